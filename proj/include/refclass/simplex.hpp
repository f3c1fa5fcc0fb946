#pragma once

#include "refclass/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace refclass::lp {

enum class Relation { LessEq, Equal, GreaterEq };

struct Row {
    std::vector<Rational> coeffs;
    Relation rel = Relation::LessEq;
    Rational rhs = 0;
};

/// Variables are implicitly nonnegative.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<Row> rows;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    Rational value = 0;
    std::vector<Rational> x;
};

namespace detail {

/// Dense exact tableau, Bland's rule throughout so it cannot cycle.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : a_(rows, std::vector<Rational>(cols + 1)), basis_(rows) {}

    Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
    Rational& rhs(std::size_t r) { return a_[r].back(); }
    std::size_t rows() const { return a_.size(); }
    std::size_t cols() const { return a_.empty() ? 0 : a_.front().size() - 1; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t r, std::size_t c) {
        const Rational p = a_[r][c];
        for (auto& v : a_[r]) v /= p;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (i == r || a_[i][c] == 0) continue;
            const Rational f = a_[i][c];
            for (std::size_t j = 0; j < a_[i].size(); ++j)
                if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
        }
        basis_[r] = c;
    }

    /// Minimizes cost over columns allowed[c]; returns false if unbounded.
    bool minimize(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t c = 0; c < cols() && !enter; ++c) {
                if (!allowed[c]) continue;
                Rational reduced = cost[c];
                for (std::size_t r = 0; r < rows(); ++r)
                    if (a_[r][c] != 0) reduced -= cost[basis_[r]] * a_[r][c];
                if (reduced < 0) enter = c;
            }
            if (!enter) return true;

            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t r = 0; r < rows(); ++r) {
                if (a_[r][*enter] <= 0) continue;
                Rational ratio = a_[r].back() / a_[r][*enter];
                if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
        }
    }

    void drop_row(std::size_t r) {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    std::vector<std::vector<Rational>> a_;
    std::vector<std::size_t> basis_;
};

} // namespace detail

/// Exact two-phase simplex. Minimizes objective·x, or maximizes it when maximize is set.
inline Solution solve(const Problem& p, const std::vector<Rational>& objective, bool maximize = false) {
    const std::size_t n = p.num_vars;
    const std::size_t m = p.rows.size();

    // Columns: structural | slack/surplus per inequality | artificial per row needing one.
    std::size_t slack_count = 0;
    for (const auto& r : p.rows)
        if (r.rel != Relation::Equal) ++slack_count;

    std::vector<Row> rows = p.rows;
    for (auto& r : rows) {
        r.coeffs.resize(n);
        if (r.rhs < 0) {
            for (auto& v : r.coeffs) v = -v;
            r.rhs = -r.rhs;
            if (r.rel == Relation::LessEq) r.rel = Relation::GreaterEq;
            else if (r.rel == Relation::GreaterEq) r.rel = Relation::LessEq;
        }
    }
    std::size_t art_count = 0;
    for (const auto& r : rows)
        if (r.rel != Relation::LessEq) ++art_count;

    const std::size_t total = n + slack_count + art_count;
    detail::Tableau t(m, total);
    std::size_t slack = n;
    std::size_t art = n + slack_count;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) = rows[i].coeffs[j];
        t.rhs(i) = rows[i].rhs;
        switch (rows[i].rel) {
        case Relation::LessEq:
            t.at(i, slack) = 1;
            t.basis()[i] = slack++;
            break;
        case Relation::GreaterEq:
            t.at(i, slack++) = -1;
            t.at(i, art) = 1;
            t.basis()[i] = art++;
            break;
        case Relation::Equal:
            t.at(i, art) = 1;
            t.basis()[i] = art++;
            break;
        }
    }

    const std::size_t first_art = n + slack_count;
    std::vector<bool> allowed(total, true);
    if (art_count > 0) {
        std::vector<Rational> phase1(total, 0);
        for (std::size_t c = first_art; c < total; ++c) phase1[c] = 1;
        t.minimize(phase1, allowed);
        Rational infeas = 0;
        for (std::size_t r = 0; r < t.rows(); ++r)
            if (t.basis()[r] >= first_art) infeas += t.rhs(r);
        if (infeas > 0) return {Status::Infeasible, 0, {}};

        // Drive remaining (zero-valued) artificials out of the basis.
        for (std::size_t r = 0; r < t.rows();) {
            if (t.basis()[r] < first_art) {
                ++r;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t c = 0; c < first_art && !col; ++c)
                if (t.at(r, c) != 0) col = c;
            if (col) {
                t.pivot(r, *col);
                ++r;
            } else {
                t.drop_row(r); // redundant equality
            }
        }
        for (std::size_t c = first_art; c < total; ++c) allowed[c] = false;
    }

    std::vector<Rational> cost(total, 0);
    for (std::size_t j = 0; j < n && j < objective.size(); ++j) cost[j] = maximize ? -objective[j] : objective[j];
    if (!t.minimize(cost, allowed)) return {Status::Unbounded, 0, {}};

    Solution s;
    s.status = Status::Optimal;
    s.x.assign(n, 0);
    for (std::size_t r = 0; r < t.rows(); ++r)
        if (t.basis()[r] < n) s.x[t.basis()[r]] = t.rhs(r);
    for (std::size_t j = 0; j < n && j < objective.size(); ++j) s.value += objective[j] * s.x[j];
    return s;
}

} // namespace refclass::lp
