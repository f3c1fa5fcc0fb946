#pragma once

#include "refclass/class_term.hpp"
#include "refclass/error.hpp"
#include "refclass/interval.hpp"
#include "refclass/knowledge_base.hpp"
#include "refclass/simplex.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace refclass {

inline constexpr std::size_t kMaxBoundNames = 6;

/// Frequency model over the Boolean algebra of a few primitive names: one
/// nonnegative weight per atom, weights summing to one (implicit), plus linear
/// constraints over the weights. Atom a lies in name i iff bit i of a is set.
class AtomSystem {
public:
    struct Constraint {
        lp::Row row;
        std::string label;
    };

    explicit AtomSystem(NameSet names) : names_(std::move(names)) {
        std::sort(names_.begin(), names_.end());
        names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
        if (names_.size() > kMaxBoundNames)
            throw ScaleError("bound system over " + std::to_string(names_.size()) + " names; the cap is " +
                             std::to_string(kMaxBoundNames));
    }

    const NameSet& names() const { return names_; }
    std::size_t atom_count() const { return std::size_t{1} << names_.size(); }
    const std::vector<Constraint>& constraints() const { return constraints_; }

    bool expressible(const ClassTerm& t) const {
        if (!t.is_ordinary()) return false;
        for (const auto& n : t.names())
            if (!std::binary_search(names_.begin(), names_.end(), n)) return false;
        return true;
    }

    /// Bit mask of the names in an ordinary term; throws if not expressible.
    std::uint32_t mask(const ClassTerm& t) const {
        if (!expressible(t)) throw Error("class " + t.render() + " is not expressible over the bound system");
        std::uint32_t m = 0;
        for (const auto& n : t.names()) {
            auto it = std::lower_bound(names_.begin(), names_.end(), n);
            m |= std::uint32_t{1} << static_cast<std::uint32_t>(it - names_.begin());
        }
        return m;
    }

    /// Indicator coefficients of w(t).
    std::vector<Rational> indicator(std::uint32_t mask) const {
        std::vector<Rational> v(atom_count(), 0);
        for (std::uint32_t a = 0; a < atom_count(); ++a)
            if ((a & mask) == mask) v[a] = 1;
        return v;
    }

    void add_constraint(std::vector<Rational> coeffs, lp::Relation rel, Rational rhs, std::string label) {
        coeffs.resize(atom_count());
        constraints_.push_back({lp::Row{std::move(coeffs), rel, std::move(rhs)}, std::move(label)});
    }

    /// p·w(Y) ≤ w(Y∩Z) ≤ q·w(Y)
    void add_statistic(const ClassTerm& ref, const ClassTerm& target, const Interval& iv) {
        const auto y = mask(ref);
        const auto yz = y | mask(target);
        const auto wy = indicator(y);
        const auto wyz = indicator(yz);
        std::vector<Rational> lower(atom_count());
        std::vector<Rational> upper(atom_count());
        for (std::size_t a = 0; a < atom_count(); ++a) {
            lower[a] = iv.lo() * wy[a] - wyz[a];
            upper[a] = wyz[a] - iv.hi() * wy[a];
        }
        const std::string stat = "%(" + ref.render() + ", " + target.render() + ")";
        add_constraint(std::move(lower), lp::Relation::LessEq, 0, stat + " >= " + to_string(iv.lo()));
        add_constraint(std::move(upper), lp::Relation::LessEq, 0, stat + " <= " + to_string(iv.hi()));
    }

    /// w(sub ∖ super) = 0
    void add_subset(const ClassTerm& sub, const ClassTerm& super) {
        const auto s = mask(sub);
        const auto t = mask(super);
        std::vector<Rational> v(atom_count(), 0);
        for (std::uint32_t a = 0; a < atom_count(); ++a)
            if ((a & s) == s && (a & t) != t) v[a] = 1;
        add_constraint(std::move(v), lp::Relation::LessEq, 0, sub.render() + " subset " + super.render());
    }

private:
    NameSet names_;
    std::vector<Constraint> constraints_;
};

/// Encodes every asserted statistic and subset assertion expressible over names.
inline AtomSystem encode(const KnowledgeBase& kb, const NameSet& names) {
    AtomSystem sys(names);
    for (const auto& s : kb.statistics)
        if (sys.expressible(s.ref_class) && sys.expressible(s.target)) sys.add_statistic(s.ref_class, s.target, s.interval);
    for (const auto& s : kb.subsets)
        if (sys.expressible(s.sub) && sys.expressible(s.super)) sys.add_subset(s.sub, s.super);
    return sys;
}

namespace detail {

inline lp::Problem weight_problem(const AtomSystem& sys, const std::vector<std::size_t>& keep) {
    lp::Problem p;
    p.num_vars = sys.atom_count();
    for (auto i : keep) p.rows.push_back(sys.constraints()[i].row);
    p.rows.push_back({std::vector<Rational>(sys.atom_count(), 1), lp::Relation::Equal, 1});
    return p;
}

inline bool weights_feasible(const AtomSystem& sys, const std::vector<std::size_t>& keep) {
    return lp::solve(weight_problem(sys, keep), {}).status == lp::Status::Optimal;
}

} // namespace detail

/// Range of w(A∩B)/w(A) over all feasible weights with w(A) > 0, computed
/// exactly by the Charnes–Cooper substitution y = w/w(A), t = 1/w(A), which
/// turns the ratio program into a linear program. When every feasible weight
/// vector has w(A) = 0 the conditional is undefined and [0,1] is returned.
/// Throws InconsistentKb, naming an irreducible infeasible constraint set, when
/// no weight vector satisfies the system at all.
inline Interval bound_conditional(const AtomSystem& sys, const ClassTerm& a, const ClassTerm& b) {
    const std::size_t atoms = sys.atom_count();
    const std::size_t k = sys.constraints().size();

    std::vector<std::size_t> all(k);
    for (std::size_t i = 0; i < k; ++i) all[i] = i;
    if (!detail::weights_feasible(sys, all)) {
        // Deletion filter down to an irreducible infeasible subset.
        std::vector<std::size_t> core = all;
        for (std::size_t i = 0; i < core.size();) {
            auto trial = core;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
            if (!detail::weights_feasible(sys, trial)) core = std::move(trial);
            else ++i;
        }
        std::string msg = "inconsistent statistics:";
        for (auto i : core) msg += " {" + sys.constraints()[i].label + "}";
        throw InconsistentKb(msg);
    }

    const auto ma = sys.mask(a);
    const auto mab = ma | sys.mask(b);

    // Variables: y[0..atoms), t.
    lp::Problem p;
    p.num_vars = atoms + 1;
    for (const auto& c : sys.constraints()) {
        lp::Row r;
        r.coeffs = c.row.coeffs;
        r.coeffs.resize(atoms);
        r.coeffs.push_back(-c.row.rhs);
        r.rel = c.row.rel;
        r.rhs = 0;
        p.rows.push_back(std::move(r));
    }
    {
        lp::Row total;
        total.coeffs.assign(atoms, 1);
        total.coeffs.push_back(-1);
        total.rel = lp::Relation::Equal;
        p.rows.push_back(std::move(total));
    }
    {
        lp::Row norm;
        norm.coeffs = sys.indicator(ma);
        norm.coeffs.push_back(0);
        norm.rel = lp::Relation::Equal;
        norm.rhs = 1;
        p.rows.push_back(std::move(norm));
    }

    auto objective = sys.indicator(mab);
    objective.push_back(0);
    const auto lo = lp::solve(p, objective, false);
    if (lo.status == lp::Status::Infeasible) return Interval::vacuous();
    const auto hi = lp::solve(p, objective, true);
    if (lo.status != lp::Status::Optimal || hi.status != lp::Status::Optimal)
        throw Error("ratio program unexpectedly unbounded");
    return {lo.value, hi.value};
}

} // namespace refclass
