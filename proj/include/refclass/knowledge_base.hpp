#pragma once

#include "refclass/class_term.hpp"
#include "refclass/interval.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace refclass {

struct SourcePos {
    int line = 0;
    int column = 0;
};

/// %(ref_class, target) = interval
struct StatStatement {
    ClassTerm ref_class;
    ClassTerm target;
    Interval interval;
    SourcePos pos{};
};

struct Membership {
    std::string individual;
    ClassTerm cls;
    SourcePos pos{};
};

struct SubsetAssertion {
    ClassTerm sub;
    ClassTerm super;
    SourcePos pos{};
};

/// "x ∈ Z" as a sentence.
struct MemberSentence {
    std::string individual;
    ClassTerm cls;
    friend bool operator==(const MemberSentence&, const MemberSentence&) = default;
};

/// Either a named sentence or a literal membership sentence.
using Sentence = std::variant<std::string, MemberSentence>;

inline std::string to_string(const Sentence& s) {
    if (const auto* name = std::get_if<std::string>(&s)) return *name;
    const auto& m = std::get<MemberSentence>(s);
    if (m.cls.kind() == TermKind::Intersect)
        return "(member " + m.individual + " (and " + detail::join(m.cls.names(), " ") + "))";
    return "(member " + m.individual + " " + m.cls.render() + ")";
}

struct Equivalence {
    std::string name;
    Sentence sentence;
    SourcePos pos{};
};

/// Class declarations, memberships, subset assertions, statistics and sentence
/// equivalences, in source order. Treated as immutable once validated.
struct KnowledgeBase {
    std::vector<std::string> classes;
    std::vector<Membership> memberships;
    std::vector<SubsetAssertion> subsets;
    std::vector<StatStatement> statistics;
    std::vector<Equivalence> equivalences;

    bool declares_class(const std::string& name) const {
        return std::find(classes.begin(), classes.end(), name) != classes.end();
    }

    /// Individuals named by memberships or by membership sentences, sorted.
    std::vector<std::string> individuals() const {
        std::set<std::string> out;
        for (const auto& m : memberships) out.insert(m.individual);
        for (const auto& e : equivalences)
            if (const auto* ms = std::get_if<MemberSentence>(&e.sentence)) out.insert(ms->individual);
        return {out.begin(), out.end()};
    }

    bool declares_individual(const std::string& x) const {
        auto all = individuals();
        return std::binary_search(all.begin(), all.end(), x);
    }

    /// Sorted, deduplicated primitive names of x's asserted memberships.
    NameSet membership_names(const std::string& x) const {
        NameSet out;
        for (const auto& m : memberships)
            if (m.individual == x) {
                auto n = m.cls.names();
                out.insert(out.end(), n.begin(), n.end());
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

} // namespace refclass
