#pragma once

#include "refclass/selection.hpp"

#include <json.hpp>

#include <set>
#include <sstream>
#include <string>

namespace refclass {

namespace detail {

inline bool single_pair(const Trace& t) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& c : t.candidates) pairs.emplace(c.subject, c.target.render());
    return pairs.size() <= 1;
}

inline std::string label(const Trace& t, std::size_t i, bool single) {
    const auto& c = t.candidates[i];
    if (single) return c.ref_class.render();
    return c.ref_class.render() + " @ (member " + c.subject + " " + c.target.render() + ")";
}

} // namespace detail

inline std::string to_string(Outcome o) { return o == Outcome::Selected ? "Selected" : "Fallback"; }

/// Machine-readable trace. Endpoints are exact rationals as strings.
inline nlohmann::ordered_json trace_to_json(const Trace& t) {
    using nlohmann::ordered_json;
    const bool single = detail::single_pair(t);
    auto interval = [](const Interval& iv) { return ordered_json::array({to_string(iv.lo()), to_string(iv.hi())}); };

    ordered_json j;
    j["query"] = t.query;
    j["equivalences"] = ordered_json::array();
    for (const auto& [from, to] : t.equivalences) j["equivalences"].push_back({{"sentence", from}, {"resolves_to", to}});

    j["candidates"] = ordered_json::array();
    for (const auto& c : t.candidates) {
        ordered_json cj;
        cj["class"] = c.ref_class.render();
        cj["interval"] = interval(c.interval);
        cj["provenance"] = to_string(c.provenance);
        cj["subject"] = c.subject;
        cj["target"] = c.target.render();
        if (!c.factors.empty()) {
            cj["factors"] = ordered_json::array();
            for (const auto& [cls, iv] : c.factors) cj["factors"].push_back({{"class", cls.render()}, {"interval", interval(iv)}});
        }
        j["candidates"].push_back(std::move(cj));
    }

    j["disagreements"] = ordered_json::array();
    for (const auto& [a, b] : t.disagreements) j["disagreements"].push_back({a, b});

    j["reflections"] = ordered_json::array();
    for (const auto& r : t.reflections)
        j["reflections"].push_back({{"from", detail::label(t, r.from, single)},
                                    {"to", detail::label(t, r.to, single)},
                                    {"rule", to_string(r.rule)}});

    j["iterations"] = ordered_json::array();
    for (const auto& step : t.iterations) {
        ordered_json sj;
        sj["selected"] = detail::label(t, step.selected, single);
        sj["deleted"] = ordered_json::array();
        for (auto d : step.deleted) sj["deleted"].push_back(detail::label(t, d, single));
        sj["failed"] = step.failed;
        if (step.blocked_by) sj["blocked_by"] = detail::label(t, *step.blocked_by, single);
        j["iterations"].push_back(std::move(sj));
    }

    j["notes"] = t.notes;
    j["outcome"] = to_string(t.outcome);
    if (t.selected) j["selected"] = detail::label(t, *t.selected, single);
    j["prob"] = interval(t.prob);
    return j;
}

inline std::string trace_to_text(const Trace& t) {
    const bool single = detail::single_pair(t);
    std::ostringstream os;
    os << "query: " << t.query << "\n";
    for (const auto& [from, to] : t.equivalences) os << "equivalence: " << from << " == " << to << "\n";

    os << "candidates:\n";
    if (t.candidates.empty()) os << "  (none)\n";
    for (std::size_t i = 0; i < t.candidates.size(); ++i) {
        const auto& c = t.candidates[i];
        os << "  #" << i << " " << detail::label(t, i, single) << " " << to_string(c.interval) << " "
           << to_string(c.provenance);
        if (!c.factors.empty()) {
            os << " from";
            for (const auto& [cls, iv] : c.factors) os << " " << cls.render() << "=" << to_string(iv);
        }
        os << "\n";
    }

    os << "disagreements:";
    if (t.disagreements.empty()) os << " none";
    for (const auto& [a, b] : t.disagreements) os << " #" << a << "/#" << b;
    os << "\n";

    os << "reflections:\n";
    if (t.reflections.empty()) os << "  (none among disagreeing pairs)\n";
    for (const auto& r : t.reflections)
        os << "  " << detail::label(t, r.from, single) << " reflects " << detail::label(t, r.to, single) << " ("
           << to_string(r.rule) << ")\n";

    os << "iterations:\n";
    for (std::size_t i = 0; i < t.iterations.size(); ++i) {
        const auto& step = t.iterations[i];
        os << "  " << i + 1 << ". selected " << detail::label(t, step.selected, single);
        if (!step.deleted.empty()) {
            os << "; deleted";
            for (auto d : step.deleted) os << " " << detail::label(t, d, single);
        }
        if (step.failed) {
            os << "; failed";
            if (step.blocked_by)
                os << " against " << detail::label(t, *step.blocked_by, single)
                   << (step.mutual_reflection ? " (mutual reflection)" : "");
        } else {
            os << "; accepted";
        }
        os << "\n";
    }
    for (const auto& n : t.notes) os << "note: " << n << "\n";

    os << "outcome: " << to_string(t.outcome);
    if (t.selected) os << " " << detail::label(t, *t.selected, single);
    os << "\n";
    os << "Prob = " << to_string(t.prob) << "\n";
    return os.str();
}

} // namespace refclass
