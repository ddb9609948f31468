#pragma once

#include <cstdint>
#include <vector>

#include "nlvol/behavior.hpp"

namespace nlvol {

/// Locality tolerance: behaviors within this trace distance count as local.
inline constexpr double kLocalityTol = 1e-8;

/// Guard on the number of deterministic strategies enumerated.
inline constexpr std::uint64_t kMaxStrategies = 1'000'000;

/// Outcome assigned by deterministic strategy i to Alice input x (resp. Bob
/// input y). Strategy index encoding: i = iA * nb^ny + iB, where iA holds
/// Alice's outcomes as little-endian base-na digits (iA = sum_x a_x na^x) and
/// iB likewise for Bob. Alice's block is the most significant.
int strategy_outcome_a(const Scenario& s, std::uint64_t i, int x);
int strategy_outcome_b(const Scenario& s, std::uint64_t i, int y);

/// Deterministic-strategy matrix A: J x I with J = table entries, I = number
/// of strategies, A(j,i) = 1 iff strategy i produces the outcome pair of j.
struct LocalPolytope {
    Scenario scenario;
    std::uint64_t num_strategies = 0;
    std::vector<double> strategy_matrix;  // row-major J x I

    double at(int j, std::uint64_t i) const {
        return strategy_matrix[static_cast<std::size_t>(j) * num_strategies + i];
    }

    /// Column i as a Behavior.
    Behavior strategy_behavior(std::uint64_t i) const;
};

/// Throws ConfigError if the strategy count exceeds kMaxStrategies.
LocalPolytope enumerate_strategies(const Scenario& s);

struct TraceDistanceResult {
    double nl = 0.0;               // in [0,1]
    std::vector<double> weights;   // optimal strategy mixture lambda
};

/// Minimum of (1 / (2 nx ny)) sum_j |q_j - (A lambda)_j| over probability
/// vectors lambda, solved as an LP over (lambda, positive and negative parts
/// of the residual).
TraceDistanceResult trace_distance_to_local(const Behavior& b, const LocalPolytope& polytope);

bool is_local(const Behavior& b, const LocalPolytope& polytope, double tol = kLocalityTol);

}  // namespace nlvol
