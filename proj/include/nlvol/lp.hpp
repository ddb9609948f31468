#pragma once

#include <cstddef>
#include <vector>

namespace nlvol {

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Equality-form LP: minimize c.z subject to A z = b, z >= 0.
struct LpProblem {
    std::vector<double> objective;          // c, length n
    std::vector<double> constraint_matrix;  // A, row-major rows x n
    std::vector<double> rhs;                // b, length rows

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rhs.size(); }

    double a(std::size_t i, std::size_t j) const {
        return constraint_matrix[i * objective.size() + j];
    }
    double& a(std::size_t i, std::size_t j) {
        return constraint_matrix[i * objective.size() + j];
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective_value = 0.0;
    std::vector<double> variables;
};

/// Two-phase dense simplex. Optimal solutions are re-checked for feasibility
/// against the original data before being reported; numerical breakdown
/// raises SolverError instead of returning a wrong status.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace nlvol
