#include "nlvol/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlvol/errors.hpp"
#include "nlvol/lp.hpp"

namespace nlvol {

int strategy_outcome_a(const Scenario& s, std::uint64_t i, int x) {
    std::uint64_t nb_pow = 1;
    for (int y = 0; y < s.ny; ++y) nb_pow *= static_cast<std::uint64_t>(s.nb);
    std::uint64_t ia = i / nb_pow;
    for (int k = 0; k < x; ++k) ia /= static_cast<std::uint64_t>(s.na);
    return static_cast<int>(ia % static_cast<std::uint64_t>(s.na));
}

int strategy_outcome_b(const Scenario& s, std::uint64_t i, int y) {
    std::uint64_t nb_pow = 1;
    for (int k = 0; k < s.ny; ++k) nb_pow *= static_cast<std::uint64_t>(s.nb);
    std::uint64_t ib = i % nb_pow;
    for (int k = 0; k < y; ++k) ib /= static_cast<std::uint64_t>(s.nb);
    return static_cast<int>(ib % static_cast<std::uint64_t>(s.nb));
}

Behavior LocalPolytope::strategy_behavior(std::uint64_t i) const {
    Behavior b = make_behavior(scenario);
    for (int j = 0; j < scenario.table_size(); ++j) b.probs[j] = at(j, i);
    return b;
}

LocalPolytope enumerate_strategies(const Scenario& s) {
    const std::uint64_t count = s.strategy_count();
    if (count > kMaxStrategies)
        throw ConfigError("enumerate_strategies: strategy count exceeds capacity guard");

    LocalPolytope poly;
    poly.scenario = s;
    poly.num_strategies = count;
    const std::size_t table = static_cast<std::size_t>(s.table_size());
    poly.strategy_matrix.assign(table * count, 0.0);

    for (std::uint64_t i = 0; i < count; ++i) {
        for (int x = 0; x < s.nx; ++x) {
            int a = strategy_outcome_a(s, i, x);
            for (int y = 0; y < s.ny; ++y) {
                int b = strategy_outcome_b(s, i, y);
                std::size_t j = static_cast<std::size_t>(s.index(x, y, a, b));
                poly.strategy_matrix[j * count + i] = 1.0;
            }
        }
    }
    return poly;
}

TraceDistanceResult trace_distance_to_local(const Behavior& b, const LocalPolytope& polytope) {
    if (!(b.scenario == polytope.scenario))
        throw std::invalid_argument("trace_distance_to_local: scenario mismatch");

    const std::size_t J = static_cast<std::size_t>(b.scenario.table_size());
    const std::size_t I = static_cast<std::size_t>(polytope.num_strategies);

    // Variables: lambda (I), then the positive part u and negative part v of
    // the residual q - A lambda (J each). Rows: residual split per table
    // entry, plus sum lambda = 1.
    LpProblem lp;
    const std::size_t n = I + 2 * J;
    lp.objective.assign(n, 0.0);
    const double w = 1.0 / (2.0 * b.scenario.nx * b.scenario.ny);
    for (std::size_t j = 0; j < 2 * J; ++j) lp.objective[I + j] = w;

    lp.rhs.assign(J + 1, 0.0);
    lp.constraint_matrix.assign((J + 1) * n, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        double* row = lp.constraint_matrix.data() + j * n;
        for (std::size_t i = 0; i < I; ++i) row[i] = polytope.strategy_matrix[j * I + i];
        row[I + j] = 1.0;
        row[I + J + j] = -1.0;
        lp.rhs[j] = b.probs[j];
    }
    double* last = lp.constraint_matrix.data() + J * n;
    for (std::size_t i = 0; i < I; ++i) last[i] = 1.0;
    lp.rhs[J] = 1.0;

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw SolverError("trace_distance_to_local: LP did not reach an optimum");

    TraceDistanceResult res;
    res.nl = std::clamp(sol.objective_value, 0.0, 1.0);
    res.weights.assign(sol.variables.begin(), sol.variables.begin() + static_cast<long>(I));
    return res;
}

bool is_local(const Behavior& b, const LocalPolytope& polytope, double tol) {
    return trace_distance_to_local(b, polytope).nl <= tol;
}

}  // namespace nlvol
