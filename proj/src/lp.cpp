#include "nlvol/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nlvol/errors.hpp"

namespace nlvol {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kOptTol = 1e-9;
constexpr double kFeasTol = 1e-8;

// Dense tableau with the constraint rows first, then the phase-2 objective
// row and (during phase 1) the phase-1 objective row. The last column is the
// right-hand side. Entering variables are picked by most-negative reduced
// cost; after a long run of degenerate pivots the rule switches to Bland's,
// which guarantees termination.
class Tableau {
public:
    Tableau(const LpProblem& p)
        : n_(p.num_vars()), m_(p.num_rows()) {
        rows_.assign(m_, std::vector<double>());
        rhs_.assign(m_, 0.0);
        basis_.assign(m_, SIZE_MAX);

        for (std::size_t i = 0; i < m_; ++i) {
            rows_[i].assign(n_, 0.0);
            double sign = p.rhs[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign * p.a(i, j);
            rhs_[i] = sign * p.rhs[i];
        }
    }

    // Crash basis: a column that is exactly a unit vector for a row can serve
    // as its initial basic variable; the remaining rows get artificials,
    // whose columns are materialized so pivots treat them uniformly.
    void build_initial_basis() {
        std::vector<std::size_t> unit_row(n_, SIZE_MAX);
        std::vector<int> nonzeros(n_, 0);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                if (rows_[i][j] != 0.0) {
                    ++nonzeros[j];
                    if (rows_[i][j] == 1.0) unit_row[j] = i;
                }
            }
        for (std::size_t j = 0; j < n_; ++j) {
            std::size_t i = unit_row[j];
            if (i == SIZE_MAX || nonzeros[j] != 1) continue;
            if (basis_[i] != SIZE_MAX) continue;
            basis_[i] = j;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] != SIZE_MAX) continue;
            basis_[i] = n_ + artificials_;
            artificial_row_.push_back(i);
            ++artificials_;
        }
        art_cols_.assign(artificials_, std::vector<double>(m_, 0.0));
        for (std::size_t k = 0; k < artificials_; ++k) art_cols_[k][artificial_row_[k]] = 1.0;
    }

    std::size_t width() const { return n_ + artificials_; }

    // Reduced-cost row for an objective over the structural variables.
    // Artificials cost 1 in phase 1 and are never allowed to re-enter.
    void init_costs(const std::vector<double>& phase2_obj) {
        cost2_.assign(width(), 0.0);
        std::copy(phase2_obj.begin(), phase2_obj.end(), cost2_.begin());
        z2_ = 0.0;
        cost1_.assign(width(), 0.0);
        for (std::size_t k = 0; k < artificials_; ++k) cost1_[n_ + k] = 1.0;
        z1_ = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            eliminate_basic(cost2_, z2_, i);
            eliminate_basic(cost1_, z1_, i);
        }
    }

    bool phase1_needed() const { return artificials_ > 0; }
    // z1_/z2_ accumulate the negated objective; see eliminate_basic.
    double phase1_objective() const { return -z1_; }

    enum class StepResult { Optimal, Unbounded, Pivoted };

    StepResult step(bool phase1) {
        std::vector<double>& cost = phase1 ? cost1_ : cost2_;
        double scale = 1.0;
        for (std::size_t j = 0; j < n_; ++j) scale = std::max(scale, std::abs(cost[j]));
        const double tol = kOptTol * scale;

        std::size_t enter = SIZE_MAX;
        if (bland_) {
            for (std::size_t j = 0; j < n_; ++j)
                if (cost[j] < -tol) { enter = j; break; }
        } else {
            double best = -tol;
            for (std::size_t j = 0; j < n_; ++j)
                if (cost[j] < best) { best = cost[j]; enter = j; }
        }
        if (enter == SIZE_MAX) return StepResult::Optimal;

        std::size_t leave = SIZE_MAX;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i) {
            double a = rows_[i][enter];
            if (a <= kPivotTol) continue;
            double ratio = rhs_[i] / a;
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && leave != SIZE_MAX && basis_[i] < basis_[leave])) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == SIZE_MAX) return StepResult::Unbounded;

        // z tracks the negated objective, so progress means z grows.
        double before = phase1 ? z1_ : z2_;
        pivot(leave, enter);
        double after = phase1 ? z1_ : z2_;
        if (after - before <= 1e-13 * (1.0 + std::abs(before))) {
            if (++stalled_ >= kStallLimit) bland_ = true;
        } else {
            stalled_ = 0;
        }
        return StepResult::Pivoted;
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(rows_[i][j]) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
            // A row whose artificial cannot be pivoted out is redundant; the
            // artificial stays basic at level zero and never re-enters play.
        }
    }

    std::vector<double> extract_solution() const {
        std::vector<double> z(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) z[basis_[i]] = rhs_[i];
        return z;
    }

private:
    static constexpr int kStallLimit = 64;

    void eliminate_basic(std::vector<double>& cost, double& z, std::size_t row) {
        double c = cost[basis_[row]];
        if (c == 0.0) return;
        for (std::size_t j = 0; j < n_; ++j) cost[j] -= c * rows_[row][j];
        for (std::size_t k = 0; k < artificials_; ++k)
            if (artificial_row_[k] == row) cost[n_ + k] -= c;
        z -= c * rhs_[row];
        cost[basis_[row]] = 0.0;
    }

    // Gauss-Jordan pivot on (row r, structural column s); artificial columns
    // are carried explicitly so updates stay uniform. Artificials never enter.
    void pivot(std::size_t r, std::size_t s) {
        std::vector<double>& prow = rows_[r];
        double piv = prow[s];
        if (std::abs(piv) <= kPivotTol) throw SolverError("simplex: pivot element too small");

        double inv = 1.0 / piv;
        for (std::size_t j = 0; j < n_; ++j) prow[j] *= inv;
        rhs_[r] *= inv;
        for (std::size_t k = 0; k < art_cols_.size(); ++k) art_cols_[k][r] *= inv;

        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = rows_[i][s];
            if (f == 0.0) continue;
            double* dst = rows_[i].data();
            const double* src = prow.data();
            for (std::size_t j = 0; j < n_; ++j) dst[j] -= f * src[j];
            rhs_[i] -= f * rhs_[r];
            for (std::size_t k = 0; k < art_cols_.size(); ++k)
                art_cols_[k][i] -= f * art_cols_[k][r];
            if (rhs_[i] < 0.0 && rhs_[i] > -1e-12) rhs_[i] = 0.0;
        }
        apply_to_costs(cost1_, z1_, r, s);
        apply_to_costs(cost2_, z2_, r, s);
        basis_[r] = s;
    }

    void apply_to_costs(std::vector<double>& cost, double& z, std::size_t r, std::size_t s) {
        double f = cost[s];
        if (f == 0.0) return;
        for (std::size_t j = 0; j < n_; ++j) cost[j] -= f * rows_[r][j];
        for (std::size_t k = 0; k < art_cols_.size(); ++k) cost[n_ + k] -= f * art_cols_[k][r];
        z -= f * rhs_[r];
        cost[s] = 0.0;
    }

    std::size_t n_;
    std::size_t m_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<double>> art_cols_;
    std::vector<double> rhs_;
    std::vector<double> cost1_, cost2_;
    double z1_ = 0.0, z2_ = 0.0;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> artificial_row_;
    std::size_t artificials_ = 0;
    bool bland_ = false;
    int stalled_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
    const std::size_t n = problem.num_vars();
    const std::size_t m = problem.num_rows();
    if (n == 0) throw std::invalid_argument("solve_lp: no variables");
    if (problem.constraint_matrix.size() != n * m)
        throw std::invalid_argument("solve_lp: constraint matrix shape mismatch");
    for (double v : problem.objective)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite objective");
    for (double v : problem.constraint_matrix)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite constraint");
    for (double v : problem.rhs)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite rhs");

    double b_scale = 0.0;
    for (double v : problem.rhs) b_scale = std::max(b_scale, std::abs(v));

    Tableau tab(problem);
    tab.build_initial_basis();
    tab.init_costs(problem.objective);

    const std::size_t max_iter = 5000 + 200 * (m + n);
    std::size_t iter = 0;

    if (tab.phase1_needed()) {
        for (;; ++iter) {
            if (iter > max_iter) throw SolverError("simplex: phase 1 iteration limit");
            auto r = tab.step(true);
            if (r == Tableau::StepResult::Optimal) break;
            if (r == Tableau::StepResult::Unbounded)
                throw SolverError("simplex: phase 1 unbounded (numerical breakdown)");
        }
        if (tab.phase1_objective() > kFeasTol * (1.0 + b_scale))
            return LpSolution{LpStatus::Infeasible, 0.0, {}};
        tab.drive_out_artificials();
    }

    for (;; ++iter) {
        if (iter > max_iter) throw SolverError("simplex: phase 2 iteration limit");
        auto r = tab.step(false);
        if (r == Tableau::StepResult::Optimal) break;
        if (r == Tableau::StepResult::Unbounded)
            return LpSolution{LpStatus::Unbounded, 0.0, {}};
    }

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.variables = tab.extract_solution();

    // Independent feasibility recheck against the original data.
    const double feas = kFeasTol * (1.0 + b_scale);
    for (std::size_t i = 0; i < m; ++i) {
        double r = -problem.rhs[i];
        for (std::size_t j = 0; j < n; ++j) r += problem.a(i, j) * sol.variables[j];
        if (std::abs(r) > feas)
            throw SolverError("simplex: reported solution fails feasibility recheck");
    }
    for (double v : sol.variables)
        if (v < -1e-10) throw SolverError("simplex: negative variable in reported solution");

    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += problem.objective[j] * sol.variables[j];
    sol.objective_value = obj;
    return sol;
}

}  // namespace nlvol
