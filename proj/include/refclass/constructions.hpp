#pragma once

#include "refclass/class_term.hpp"
#include "refclass/error.hpp"
#include "refclass/interval.hpp"
#include "refclass/set_reasoner.hpp"
#include "refclass/stat_index.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace refclass {

enum class DerivedRule { ISX, ISXB, BoundsLP };

inline const char* to_string(DerivedRule r) {
    switch (r) {
    case DerivedRule::ISX: return "ISX";
    case DerivedRule::ISXB: return "ISXB";
    case DerivedRule::BoundsLP: return "BoundsLP";
    }
    return "?";
}

struct DerivedStat {
    ClassTerm cls;
    Interval interval;
    DerivedRule rule;
    std::vector<std::pair<ClassTerm, Interval>> factors;
};

/// Agreement combination of independent indicators: the probability that all
/// are in the target given that they agree,
///     g(v1..vn) = Π v / (Π v + Π (1 - v)).
/// For two arguments this is xy / (1 - x - y + 2xy). A single value is returned as is.
inline Rational g_combine(std::span<const Rational> values) {
    if (values.empty()) throw Error("g_combine needs at least one value");
    for (const auto& v : values)
        if (v < 0 || v > 1) throw Error("g_combine argument outside [0,1]: " + to_string(v));
    if (values.size() == 1) return values.front();
    Rational in = 1;
    Rational out = 1;
    for (const auto& v : values) {
        in *= v;
        out *= 1 - v;
    }
    if (in == 0 && out == 0) throw UndefinedCombination("certainty conflict: a factor at 1 and another at 0");
    return in / (in + out);
}

inline Rational g_combine(std::initializer_list<Rational> values) {
    return g_combine(std::span<const Rational>(values.begin(), values.size()));
}

/// Cross-product statistic [Π p, Π q].
inline Interval isx_stat(std::span<const Interval> factors) {
    if (factors.size() < 2) throw Error("isx_stat needs at least two factors");
    Rational lo = 1;
    Rational hi = 1;
    for (const auto& f : factors) {
        lo *= f.lo();
        hi *= f.hi();
    }
    return {lo, hi};
}

/// Agreement-combination statistic [g(p⃗), g(q⃗)]; g is nondecreasing in every
/// argument so the result is ordered.
inline Interval isxb_stat(std::span<const Interval> factors) {
    if (factors.size() < 2) throw Error("isxb_stat needs at least two factors");
    std::vector<Rational> lo;
    std::vector<Rational> hi;
    for (const auto& f : factors) {
        lo.push_back(f.lo());
        hi.push_back(f.hi());
    }
    return {g_combine(lo), g_combine(hi)};
}

/// True iff every constituent of b is contained in some constituent of a.
/// Ordinary terms count as single-constituent brackets.
inline bool bracket_reflects(const ClassTerm& a, const ClassTerm& b) {
    return std::all_of(b.constituents().begin(), b.constituents().end(), [&](const NameSet& cb) {
        return std::any_of(a.constituents().begin(), a.constituents().end(),
                           [&](const NameSet& ca) { return detail::names_subset(cb, ca); });
    });
}

/// Looks up the statistic of an ordinary class toward the implicit target.
using ConstituentLookup = std::function<std::optional<Interval>(const ClassTerm&)>;

/// Statistic of a bracket class. One constituent: that intersection's own
/// statistic. Several: isxb over each constituent's statistic. nullopt when any
/// constituent statistic is unknown. Throws UndefinedCombination on a
/// certainty conflict.
inline std::optional<DerivedStat> bracket_stat(const ClassTerm& b, const ConstituentLookup& lookup) {
    std::vector<std::pair<ClassTerm, Interval>> factors;
    for (const auto& c : b.constituents()) {
        auto term = ClassTerm::intersect(c);
        auto stat = lookup(term);
        if (!stat) return std::nullopt;
        factors.emplace_back(std::move(term), *stat);
    }
    if (factors.size() == 1) return DerivedStat{b, factors.front().second, DerivedRule::ISXB, factors};
    std::vector<Interval> ivs;
    for (const auto& f : factors) ivs.push_back(f.second);
    return DerivedStat{b, isxb_stat(ivs), DerivedRule::ISXB, std::move(factors)};
}

/// bracket_stat() against the asserted statistics of a knowledge base.
inline std::optional<DerivedStat> bracket_stat(const ClassTerm& b, const ClassTerm& target, const StatIndex& stats,
                                               const SubsetClosure& closure) {
    const auto& z = closure.representative(target);
    return bracket_stat(b, [&](const ClassTerm& t) -> std::optional<Interval> {
        auto e = stats.find(closure.representative(t), z);
        if (!e) return std::nullopt;
        return e->interval;
    });
}

/// All brackets whose constituents partition names into at most max_blocks
/// blocks. The one-block partition is the joint intersection. Sorted.
inline std::vector<ClassTerm> enumerate_brackets(const NameSet& names, std::size_t max_blocks = 2) {
    NameSet sorted = names;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const std::size_t n = sorted.size();
    if (n == 0 || max_blocks == 0) return {};

    std::set<ClassTerm> out;
    // Restricted growth strings: block[i] <= 1 + max(block[0..i-1]).
    std::vector<std::size_t> block(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (i == n) {
            std::vector<NameSet> parts(used);
            for (std::size_t k = 0; k < n; ++k) parts[block[k]].push_back(sorted[k]);
            out.insert(ClassTerm::bracket(std::move(parts)));
            return;
        }
        for (std::size_t b = 0; b <= used && b < max_blocks; ++b) {
            block[i] = b;
            rec(i + 1, std::max(used, b + 1));
        }
    };
    rec(0, 0);
    return {out.begin(), out.end()};
}

} // namespace refclass
