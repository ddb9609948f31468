#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace nlvol {

/// Bipartite Bell scenario: inputs x < nx, y < ny and outcomes a < na, b < nb.
struct Scenario {
    int nx = 0;
    int ny = 0;
    int na = 0;
    int nb = 0;

    bool operator==(const Scenario&) const = default;

    int table_size() const { return nx * ny * na * nb; }

    /// Flat index of p(a,b|x,y); x is the most significant digit, then y, a, b.
    int index(int x, int y, int a, int b) const {
        return ((x * ny + y) * na + a) * nb + b;
    }

    /// Number of local deterministic strategies, na^nx * nb^ny.
    std::uint64_t strategy_count() const;
};

/// Validates counts (outcomes >= 2, inputs >= 1).
Scenario make_scenario(int nx, int ny, int na, int nb);

/// Probability table p(a,b|x,y), flattened per Scenario::index.
struct Behavior {
    Scenario scenario;
    std::vector<double> probs;

    double at(int x, int y, int a, int b) const { return probs[scenario.index(x, y, a, b)]; }
    double& at(int x, int y, int a, int b) { return probs[scenario.index(x, y, a, b)]; }
};

/// Zero-filled table for the given scenario.
Behavior make_behavior(const Scenario& s);

struct NoSignallingViolation {
    char party;  // 'A' or 'B'
    int input;
    int outcome;
    double deviation;
};

/// Empty iff every marginal p(a|x) agrees across y and p(b|y) across x within tol.
std::vector<NoSignallingViolation> check_no_signalling(const Behavior& b, double tol);

/// Text format: header "scenario nX nY nA nB", then one "x y a b p" line per
/// table entry in Scenario::index order, probabilities in round-trip precision.
void write_behavior(std::ostream& out, const Behavior& b);

/// Throws ParseError (with line number) on malformed input.
Behavior read_behavior(std::istream& in);

}  // namespace nlvol
