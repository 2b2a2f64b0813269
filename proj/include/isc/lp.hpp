#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "isc/errors.hpp"

namespace isc {

enum class Relation { ge, le, eq };

struct LpConstraint {
    std::vector<double> coeffs;
    Relation rel = Relation::ge;
    double rhs = 0.0;
};

enum class VarBound { free_var, nonneg };

/// A small dense linear program: min objective . x subject to the listed
/// row constraints. Variables are free unless bounds says otherwise.
struct LpProblem {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<LpConstraint> constraints;
    std::vector<VarBound> bounds; // empty means all free

    void add_constraint(std::vector<double> coeffs, Relation rel, double rhs) {
        constraints.push_back({std::move(coeffs), rel, rhs});
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
};

inline constexpr double lp_default_feas_tol = 1e-9;
inline constexpr double lp_default_pivot_tol = 1e-10;

namespace detail {

// Dense two-phase tableau simplex. Bland's smallest-index rule for both the
// entering and the leaving variable, which rules out cycling and makes every
// run bit-reproducible.
class SimplexTableau {
public:
    SimplexTableau(const LpProblem& p, double feas_tol, double pivot_tol, std::size_t max_iters)
        : feas_tol_(feas_tol), pivot_tol_(pivot_tol), max_iters_(max_iters) {
        const int n = p.num_vars;
        if (static_cast<int>(p.objective.size()) != n)
            throw std::invalid_argument("objective length does not match num_vars");
        if (!p.bounds.empty() && static_cast<int>(p.bounds.size()) != n)
            throw std::invalid_argument("bounds length does not match num_vars");

        // Expand free variables into positive/negative parts.
        col_of_var_.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const bool is_free = p.bounds.empty() || p.bounds[static_cast<std::size_t>(j)] == VarBound::free_var;
            col_of_var_[static_cast<std::size_t>(j)] = {num_structural_, is_free};
            num_structural_ += is_free ? 2 : 1;
        }

        const std::size_t rows = p.constraints.size();
        std::size_t slack = 0;
        for (const auto& c : p.constraints)
            if (c.rel != Relation::eq) ++slack;
        const std::size_t cols = static_cast<std::size_t>(num_structural_) + slack + rows; // + artificials
        art_begin_ = static_cast<std::size_t>(num_structural_) + slack;

        tab_.assign(rows, std::vector<double>(cols + 1, 0.0));
        basis_.resize(rows);
        cost_.assign(cols, 0.0);
        objective_costs_.assign(cols, 0.0);

        std::size_t next_slack = static_cast<std::size_t>(num_structural_);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& c = p.constraints[r];
            if (static_cast<int>(c.coeffs.size()) != n)
                throw std::invalid_argument("constraint coefficient length mismatch");
            double sign = 1.0;
            Relation rel = c.rel;
            if (c.rhs < 0.0) {
                sign = -1.0;
                rel = c.rel == Relation::ge ? Relation::le : (c.rel == Relation::le ? Relation::ge : Relation::eq);
            }
            for (int j = 0; j < n; ++j) {
                const double v = sign * c.coeffs[static_cast<std::size_t>(j)];
                const auto [col, is_free] = col_of_var_[static_cast<std::size_t>(j)];
                tab_[r][static_cast<std::size_t>(col)] += v;
                if (is_free) tab_[r][static_cast<std::size_t>(col) + 1] -= v;
            }
            tab_[r][cols] = sign * c.rhs;
            if (rel == Relation::ge) {
                tab_[r][next_slack] = -1.0; // surplus
                ++next_slack;
            } else if (rel == Relation::le) {
                tab_[r][next_slack] = 1.0;
                ++next_slack;
            }
            tab_[r][art_begin_ + r] = 1.0;
            basis_[r] = art_begin_ + r;
        }

        // A <= row with rhs >= 0 can start with its slack basic instead of
        // the artificial; detect by looking at the slack coefficient.
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = static_cast<std::size_t>(num_structural_); j < art_begin_; ++j) {
                if (tab_[r][j] == 1.0) {
                    basis_[r] = j;
                    tab_[r][art_begin_ + r] = 0.0;
                    break;
                }
            }
        }

        for (int j = 0; j < n; ++j) {
            const auto [col, is_free] = col_of_var_[static_cast<std::size_t>(j)];
            objective_costs_[static_cast<std::size_t>(col)] = p.objective[static_cast<std::size_t>(j)];
            if (is_free) objective_costs_[static_cast<std::size_t>(col) + 1] = -p.objective[static_cast<std::size_t>(j)];
        }
    }

    /// Runs phase 1; true when a feasible basis was found.
    bool phase1() {
        cost_.assign(cost_.size(), 0.0);
        for (std::size_t j = art_begin_; j < cost_.size(); ++j) cost_[j] = 1.0;
        price_out_basis();
        iterate(art_begin_ + tab_.size());
        if (phase_objective() > feas_tol_) return false;
        expel_artificials();
        return true;
    }

    LpStatus phase2() {
        cost_ = objective_costs_;
        price_out_basis();
        return iterate(art_begin_); // artificial columns stay out
    }

    std::vector<double> extract(const LpProblem& p) const {
        std::vector<double> expanded(cost_.size(), 0.0);
        for (std::size_t r = 0; r < tab_.size(); ++r) expanded[basis_[r]] = tab_[r].back();
        std::vector<double> x(static_cast<std::size_t>(p.num_vars), 0.0);
        for (int j = 0; j < p.num_vars; ++j) {
            const auto [col, is_free] = col_of_var_[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(j)] = expanded[static_cast<std::size_t>(col)];
            if (is_free) x[static_cast<std::size_t>(j)] -= expanded[static_cast<std::size_t>(col) + 1];
        }
        return x;
    }

private:
    double phase_objective() const {
        double z = 0.0;
        for (std::size_t r = 0; r < tab_.size(); ++r)
            if (basis_[r] >= art_begin_) z += tab_[r].back();
        return z;
    }

    void price_out_basis() {
        for (std::size_t r = 0; r < tab_.size(); ++r) {
            const double c = cost_[basis_[r]];
            if (c == 0.0) continue;
            for (std::size_t j = 0; j < cost_.size(); ++j) cost_[j] -= c * tab_[r][j];
            cost_[basis_[r]] = 0.0;
        }
    }

    LpStatus iterate(std::size_t usable_cols) {
        for (;;) {
            if (iters_++ > max_iters_)
                throw IterationLimitError("simplex iteration cap exceeded after " + std::to_string(iters_) + " pivots");
            // Bland: smallest-index column with a negative reduced cost.
            std::size_t enter = usable_cols;
            for (std::size_t j = 0; j < usable_cols; ++j) {
                if (cost_[j] < -pivot_tol_) { enter = j; break; }
            }
            if (enter == usable_cols) return LpStatus::optimal;

            std::size_t leave = tab_.size();
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < tab_.size(); ++r) {
                const double a = tab_[r][enter];
                if (a <= pivot_tol_) continue;
                const double ratio = tab_[r].back() / a;
                if (ratio < best_ratio ||
                    (ratio == best_ratio && (leave == tab_.size() || basis_[r] < basis_[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave == tab_.size()) return LpStatus::unbounded;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const double piv = tab_[r][c];
        for (double& v : tab_[r]) v /= piv;
        tab_[r][c] = 1.0;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == r) continue;
            const double f = tab_[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < tab_[i].size(); ++j) tab_[i][j] -= f * tab_[r][j];
            tab_[i][c] = 0.0;
        }
        const double f = cost_[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j < cost_.size(); ++j) cost_[j] -= f * tab_[r][j];
            cost_[c] = 0.0;
        }
        basis_[r] = c;
    }

    // After phase 1 an artificial may linger in the basis at level zero;
    // pivot it out on any usable column, or drop the (redundant) row.
    void expel_artificials() {
        for (std::size_t r = 0; r < tab_.size(); ++r) {
            if (basis_[r] < art_begin_) continue;
            std::size_t c = art_begin_;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (std::abs(tab_[r][j]) > pivot_tol_) { c = j; break; }
            }
            if (c < art_begin_) {
                pivot(r, c);
            } else {
                tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
                --r;
            }
        }
    }

    double feas_tol_;
    double pivot_tol_;
    std::size_t max_iters_;
    std::size_t iters_ = 0;
    int num_structural_ = 0;
    std::size_t art_begin_ = 0;
    std::vector<std::vector<double>> tab_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
    std::vector<double> objective_costs_;
    std::vector<std::pair<int, bool>> col_of_var_;
};

inline std::size_t default_iteration_cap(const LpProblem& p) {
    return 10000 + 200 * (p.constraints.size() + static_cast<std::size_t>(p.num_vars));
}

} // namespace detail

/// Solves the program with a two-phase dense simplex. Deterministic: the
/// same problem always produces the same pivots and the same solution.
inline LpSolution solve(const LpProblem& p, double feas_tol = lp_default_feas_tol,
                        double pivot_tol = lp_default_pivot_tol, std::size_t max_iters = 0) {
    detail::SimplexTableau tab(p, feas_tol, pivot_tol,
                               max_iters ? max_iters : detail::default_iteration_cap(p));
    LpSolution sol;
    if (!tab.phase1()) {
        sol.status = LpStatus::infeasible;
        return sol;
    }
    sol.status = tab.phase2();
    if (sol.status != LpStatus::optimal) return sol;
    sol.x = tab.extract(p);
    sol.objective_value = 0.0;
    for (int j = 0; j < p.num_vars; ++j)
        sol.objective_value += p.objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];

    // A returned point must satisfy every row to within feas_tol; anything
    // else is a solver defect and must not pass silently.
    for (const auto& c : p.constraints) {
        double lhs = 0.0;
        for (int j = 0; j < p.num_vars; ++j)
            lhs += c.coeffs[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
        const double slack = c.rel == Relation::ge ? lhs - c.rhs : (c.rel == Relation::le ? c.rhs - lhs : -std::abs(lhs - c.rhs));
        if (slack < -feas_tol * (1.0 + std::abs(c.rhs)))
            throw CertificationError("simplex returned a point violating a constraint by " + std::to_string(-slack));
    }
    return sol;
}

/// Phase-1 feasibility of { row . u >= rhs } without optimizing anything.
inline bool feasible_system(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs,
                            double feas_tol = lp_default_feas_tol, double pivot_tol = lp_default_pivot_tol) {
    if (rows.empty()) return true;
    LpProblem p;
    p.num_vars = static_cast<int>(rows.front().size());
    p.objective.assign(static_cast<std::size_t>(p.num_vars), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) p.add_constraint(rows[r], Relation::ge, rhs[r]);
    detail::SimplexTableau tab(p, feas_tol, pivot_tol, detail::default_iteration_cap(p));
    return tab.phase1();
}

struct L1Result {
    bool feasible = false;
    std::vector<double> u;
    double norm = 0.0;
};

/// min ||u||_1 subject to row . u >= rhs, by splitting u into nonnegative
/// positive and negative parts.
inline L1Result l1_minimize(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs,
                            double feas_tol = lp_default_feas_tol, double pivot_tol = lp_default_pivot_tol) {
    if (rows.size() != rhs.size()) throw std::invalid_argument("row/rhs count mismatch");
    if (rows.empty()) return {true, {}, 0.0};
    const std::size_t p_len = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != p_len) throw std::invalid_argument("ragged constraint rows");

    LpProblem p;
    p.num_vars = static_cast<int>(2 * p_len);
    p.objective.assign(static_cast<std::size_t>(p.num_vars), 1.0);
    p.bounds.assign(static_cast<std::size_t>(p.num_vars), VarBound::nonneg);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<double> coeffs(static_cast<std::size_t>(p.num_vars));
        for (std::size_t j = 0; j < p_len; ++j) {
            coeffs[j] = rows[r][j];
            coeffs[p_len + j] = -rows[r][j];
        }
        p.add_constraint(std::move(coeffs), Relation::ge, rhs[r]);
    }
    const LpSolution sol = solve(p, feas_tol, pivot_tol);
    if (sol.status == LpStatus::infeasible) return {false, {}, 0.0};
    if (sol.status == LpStatus::unbounded)
        throw CertificationError("L1 program reported unbounded; objective is bounded below by zero");
    L1Result out;
    out.feasible = true;
    out.u.resize(p_len);
    out.norm = sol.objective_value;
    for (std::size_t j = 0; j < p_len; ++j) out.u[j] = sol.x[j] - sol.x[p_len + j];
    return out;
}

} // namespace isc
