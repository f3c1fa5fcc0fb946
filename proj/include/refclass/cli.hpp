#pragma once

#include "refclass/dsl.hpp"
#include "refclass/selection.hpp"
#include "refclass/trace_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace refclass::cli {

enum ExitCode : int { kOk = 0, kInvalidKb = 1, kQueryError = 2 };

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Reads and validates a KB, printing diagnostics prefixed with the path.
inline std::optional<KnowledgeBase> load(const std::string& path, bool minimal, std::ostream& err) {
    auto text = read_file(path);
    if (!text) {
        err << path << ": cannot read file\n";
        return std::nullopt;
    }
    auto parsed = dsl::parse_kb(*text, {minimal});
    for (const auto& d : parsed.diagnostics) err << path << ":" << dsl::format(d) << "\n";
    if (!parsed.ok()) return std::nullopt;
    return std::move(parsed.kb);
}

} // namespace detail

/// Runs the rcl command line: query, check, classes. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reference-class evidential probability over interval statistics", "rcl"};
    app.require_subcommand(1);

    std::string file;
    bool minimal = false;

    auto* query = app.add_subcommand("query", "Compute Prob(sentence) from a knowledge base");
    std::string sentence;
    std::string trace_format;
    bool no_constructions = false;
    bool no_isx = false;
    bool bounds = false;
    std::size_t max_blocks = 2;
    query->add_option("file", file, "Knowledge base file")->required();
    query->add_option("sentence", sentence, "Sentence name or \"(member x C)\"")->required();
    auto* trace_opt = query->add_option("--trace", trace_format, "Print the selection trace (human or json)")
                          ->expected(0, 1)
                          ->check(CLI::IsMember({"", "human", "json"}));
    query->add_flag("--minimal", minimal, "Reject KBs outside the minimal language");
    query->add_flag("--no-constructions", no_constructions, "Disable bracket and product candidates");
    query->add_flag("--no-isx", no_isx, "Disable product candidates only");
    query->add_flag("--bounds", bounds, "Derive bounds for intersections without statistics");
    query->add_option("--max-bracket-blocks", max_blocks, "Most constituents in an enumerated bracket")
        ->check(CLI::Range(std::size_t{1}, std::size_t{64}));

    auto* check = app.add_subcommand("check", "Parse and validate a knowledge base");
    check->add_option("file", file, "Knowledge base file")->required();
    check->add_flag("--minimal", minimal, "Reject KBs outside the minimal language");

    auto* classes = app.add_subcommand("classes", "List the classes an individual belongs to");
    std::string individual;
    classes->add_option("file", file, "Knowledge base file")->required();
    classes->add_option("individual", individual, "Individual name")->required();
    classes->add_flag("--minimal", minimal, "Reject KBs outside the minimal language");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    auto kb = detail::load(file, minimal, err);
    if (!kb) return kInvalidKb;

    std::optional<Reasoner> reasoner;
    try {
        reasoner.emplace(std::move(*kb));
    } catch (const Error& e) {
        err << file << ": " << e.what() << "\n";
        return kInvalidKb;
    }

    if (*check) {
        out << file << ": ok\n";
        return kOk;
    }

    if (*classes) {
        try {
            const auto& r = *reasoner;
            std::set<ClassTerm> targets;
            for (const auto& s : r.kb().statistics) targets.insert(r.closure().representative(s.target));
            for (const auto& m : classes_of(individual, r.kb(), r.closure())) {
                out << m.term.render() << "\t" << to_string(m.origin);
                if (m.representative != m.term) out << "\t= " << m.representative.render();
                for (const auto& z : targets)
                    if (auto e = r.stats().find(m.representative, z))
                        out << "\t%(" << m.term.render() << ", " << z.render() << ") = " << to_string(e->interval);
                out << "\n";
            }
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kQueryError;
        }
        return kOk;
    }

    auto parsed = dsl::parse_sentence(sentence, reasoner->kb());
    std::string why;
    if (!parsed) {
        dsl::parse_sentence(sentence, reasoner->kb(), &why);
        err << "error: bad sentence '" << sentence << "': " << why << "\n";
        return kQueryError;
    }

    QueryConfig config;
    config.constructions = !no_constructions;
    config.isx = !no_isx;
    config.bounds = bounds;
    config.max_bracket_blocks = max_blocks;
    try {
        auto [p, trace] = reasoner->prob(*parsed, config);
        if (trace_opt->count() > 0) {
            if (trace_format == "json")
                out << trace_to_json(trace).dump(2) << "\n";
            else
                out << trace_to_text(trace);
        } else {
            out << "Prob = " << to_string(p) << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kQueryError;
    }
    return kOk;
}

} // namespace refclass::cli
