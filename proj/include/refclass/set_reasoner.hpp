#pragma once

#include "refclass/class_term.hpp"
#include "refclass/error.hpp"
#include "refclass/knowledge_base.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace refclass {

/// How a subset edge entered the closure. Reflexive edges count as Syntactic.
/// Meet: X ⊆ s for every name s of an intersection S, hence X ⊆ S.
enum class EdgeOrigin : std::uint8_t { None, Asserted, Syntactic, Meet, Transitive };

inline const char* to_string(EdgeOrigin o) {
    switch (o) {
    case EdgeOrigin::None: return "None";
    case EdgeOrigin::Asserted: return "Asserted";
    case EdgeOrigin::Syntactic: return "Syntactic";
    case EdgeOrigin::Meet: return "Meet";
    case EdgeOrigin::Transitive: return "Transitive";
    }
    return "?";
}

struct ClosureOptions {
    /// Individuals with more asserted membership names than this get no
    /// intersection lattice; classes_of() rejects them.
    std::size_t max_memberships = 12;
};

/// Reflexive, transitive subset relation over every ordinary class term the KB
/// mentions plus the intersection lattice of each individual's memberships.
/// Immutable after build_closure().
class SubsetClosure {
public:
    const std::vector<ClassTerm>& terms() const { return terms_; }
    const ClosureOptions& options() const { return options_; }

    std::optional<std::size_t> index_of(const ClassTerm& t) const {
        auto it = index_.find(t);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(std::size_t sub, std::size_t super) const {
        return origin_[sub * terms_.size() + super] != EdgeOrigin::None;
    }

    EdgeOrigin origin(const ClassTerm& sub, const ClassTerm& super) const {
        auto a = index_of(sub);
        auto b = index_of(super);
        if (!a || !b) return EdgeOrigin::None;
        return origin_[*a * terms_.size() + *b];
    }

    /// Lexicographically least member of t's mutual-subset group; t itself when
    /// t is outside the closure universe.
    const ClassTerm& representative(const ClassTerm& t) const {
        auto i = index_of(t);
        return i ? terms_[rep_[*i]] : t;
    }

    /// Groups of two or more distinct terms that are mutual subsets.
    std::vector<std::vector<ClassTerm>> equivalence_groups() const {
        std::map<std::size_t, std::vector<ClassTerm>> groups;
        for (std::size_t i = 0; i < terms_.size(); ++i) groups[rep_[i]].push_back(terms_[i]);
        std::vector<std::vector<ClassTerm>> out;
        for (auto& [_, g] : groups)
            if (g.size() > 1) out.push_back(std::move(g));
        return out;
    }

    std::size_t edge_count() const {
        return static_cast<std::size_t>(
            std::count_if(origin_.begin(), origin_.end(), [](EdgeOrigin o) { return o != EdgeOrigin::None; }));
    }

private:
    friend SubsetClosure build_closure(const KnowledgeBase&, const ClosureOptions&);

    ClosureOptions options_;
    std::vector<ClassTerm> terms_;
    std::map<ClassTerm, std::size_t> index_;
    std::vector<EdgeOrigin> origin_; // row-major, terms_.size()^2
    std::vector<std::size_t> rep_;
};

namespace detail {

inline bool names_subset(const NameSet& small, const NameSet& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Every non-empty subset of names as an Intersect/Prim term.
inline std::vector<ClassTerm> intersection_lattice(const NameSet& names) {
    std::vector<ClassTerm> out;
    const std::size_t n = names.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        NameSet part;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) part.push_back(names[i]);
        out.push_back(ClassTerm::intersect(std::move(part)));
    }
    return out;
}

} // namespace detail

/// Forward-chains asserted subset facts, syntactic intersection edges and the
/// meet rule to a fixpoint, then computes mutual-subset representatives.
/// Mutual subsets between distinct terms are recorded as equivalences, not errors.
inline SubsetClosure build_closure(const KnowledgeBase& kb, const ClosureOptions& options = {}) {
    std::set<ClassTerm> universe;
    auto add = [&](const ClassTerm& t) {
        if (!t.is_ordinary()) return;
        universe.insert(t);
        for (const auto& n : t.names()) universe.insert(ClassTerm::prim(n));
    };
    for (const auto& c : kb.classes) add(ClassTerm::prim(c));
    for (const auto& m : kb.memberships) add(m.cls);
    for (const auto& s : kb.subsets) {
        add(s.sub);
        add(s.super);
    }
    for (const auto& s : kb.statistics) {
        add(s.ref_class);
        add(s.target);
    }
    for (const auto& e : kb.equivalences)
        if (const auto* ms = std::get_if<MemberSentence>(&e.sentence)) add(ms->cls);
    for (const auto& x : kb.individuals()) {
        auto names = kb.membership_names(x);
        if (names.empty() || names.size() > options.max_memberships) continue;
        for (auto& t : detail::intersection_lattice(names)) universe.insert(std::move(t));
    }

    SubsetClosure c;
    c.options_ = options;
    c.terms_.assign(universe.begin(), universe.end());
    const std::size_t n = c.terms_.size();
    for (std::size_t i = 0; i < n; ++i) c.index_.emplace(c.terms_[i], i);
    c.origin_.assign(n * n, EdgeOrigin::None);
    auto at = [&](std::size_t a, std::size_t b) -> EdgeOrigin& { return c.origin_[a * n + b]; };

    std::vector<NameSet> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = c.terms_[i].names();

    for (const auto& s : kb.subsets) {
        auto a = c.index_.at(s.sub);
        auto b = c.index_.at(s.super);
        at(a, b) = EdgeOrigin::Asserted;
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (at(a, b) == EdgeOrigin::None && detail::names_subset(names[b], names[a]))
                at(a, b) = EdgeOrigin::Syntactic;

    // For each intersection term, the indices of its primitive names.
    std::vector<std::vector<std::size_t>> prim_parts(n);
    for (std::size_t i = 0; i < n; ++i)
        if (c.terms_[i].kind() == TermKind::Intersect)
            for (const auto& nm : names[i]) prim_parts[i].push_back(c.index_.at(ClassTerm::prim(nm)));

    bool changed = true;
    while (changed) {
        changed = false;
        // Warshall over the current edge set.
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t a = 0; a < n; ++a) {
                if (at(a, k) == EdgeOrigin::None) continue;
                for (std::size_t b = 0; b < n; ++b)
                    if (at(a, b) == EdgeOrigin::None && at(k, b) != EdgeOrigin::None) {
                        at(a, b) = EdgeOrigin::Transitive;
                        changed = true;
                    }
            }
        for (std::size_t s = 0; s < n; ++s) {
            if (prim_parts[s].empty()) continue;
            for (std::size_t a = 0; a < n; ++a) {
                if (at(a, s) != EdgeOrigin::None) continue;
                bool below_all = std::all_of(prim_parts[s].begin(), prim_parts[s].end(),
                                             [&](std::size_t p) { return at(a, p) != EdgeOrigin::None; });
                if (below_all) {
                    at(a, s) = EdgeOrigin::Meet;
                    changed = true;
                }
            }
        }
    }

    c.rep_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.rep_[i] = i;
        for (std::size_t j = 0; j < i; ++j)
            if (at(i, j) != EdgeOrigin::None && at(j, i) != EdgeOrigin::None) {
                c.rep_[i] = j; // terms_ is sorted, so the first hit is the least
                break;
            }
    }
    return c;
}

/// Subset lookup; no proof search. Terms outside the universe fall back to the
/// syntactic intersection rule, optionally followed by a closure edge.
inline bool is_subset(const ClassTerm& a, const ClassTerm& b, const SubsetClosure& c) {
    if (a == b) return true;
    if (!a.is_ordinary() || !b.is_ordinary()) return false;
    auto ia = c.index_of(a);
    auto ib = c.index_of(b);
    if (ia && ib) return c.contains(*ia, *ib);
    const auto an = a.names();
    if (detail::names_subset(b.names(), an)) return true;
    if (!ib) return false;
    const auto& terms = c.terms();
    for (std::size_t u = 0; u < terms.size(); ++u)
        if (detail::names_subset(terms[u].names(), an) && c.contains(u, *ib)) return true;
    return false;
}

enum class MembershipOrigin { Asserted, Syntactic, Closure };

inline const char* to_string(MembershipOrigin o) {
    switch (o) {
    case MembershipOrigin::Asserted: return "Asserted";
    case MembershipOrigin::Syntactic: return "Syntactic";
    case MembershipOrigin::Closure: return "Closure";
    }
    return "?";
}

struct ClassMembership {
    ClassTerm term;
    ClassTerm representative;
    MembershipOrigin origin;
};

/// Every class x is known to belong to: the intersection lattice of its asserted
/// memberships and every superset reachable in the closure. Sorted by term.
inline std::vector<ClassMembership> classes_of(const std::string& x, const KnowledgeBase& kb,
                                               const SubsetClosure& c) {
    if (!kb.declares_individual(x)) throw UnknownIndividual("unknown individual " + x);
    const auto names = kb.membership_names(x);
    if (names.empty()) return {};
    if (names.size() > c.options().max_memberships)
        throw ScaleError("individual " + x + " has " + std::to_string(names.size()) +
                         " membership names; the cap is " + std::to_string(c.options().max_memberships));

    std::set<ClassTerm> asserted;
    for (const auto& m : kb.memberships)
        if (m.individual == x) asserted.insert(m.cls);

    const auto joint = c.index_of(ClassTerm::intersect(names));
    if (!joint) throw Error("closure was built without the membership lattice of " + x);

    std::vector<ClassMembership> out;
    const auto& terms = c.terms();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        if (!c.contains(*joint, j)) continue;
        MembershipOrigin origin = MembershipOrigin::Closure;
        if (asserted.count(terms[j]))
            origin = MembershipOrigin::Asserted;
        else if (detail::names_subset(terms[j].names(), names))
            origin = MembershipOrigin::Syntactic;
        out.push_back({terms[j], c.representative(terms[j]), origin});
    }
    return out;
}

} // namespace refclass
