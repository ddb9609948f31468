#include "nlvol/functionals.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nlvol/errors.hpp"
#include "nlvol/polytope.hpp"

namespace nlvol {

namespace {

double outcome_sign(int o) { return o == 0 ? 1.0 : -1.0; }

}  // namespace

double correlator(const Behavior& b, int x, int y) {
    double e = 0.0;
    for (int a = 0; a < b.scenario.na; ++a)
        for (int bb = 0; bb < b.scenario.nb; ++bb)
            e += outcome_sign(a) * outcome_sign(bb) * b.at(x, y, a, bb);
    return e;
}

double bell_value(const BellFunctional& f, const Behavior& b) {
    if (!(f.scenario == b.scenario))
        throw std::invalid_argument("bell_value: scenario mismatch");
    if (f.form == BellFunctional::Form::ChshAbs) {
        return std::abs(correlator(b, 0, 0) - correlator(b, 0, 1)) + correlator(b, 1, 0) +
               correlator(b, 1, 1);
    }
    double v = 0.0;
    for (int j = 0; j < b.scenario.table_size(); ++j) v += f.coeffs[j] * b.probs[j];
    return v;
}

double max_abs_coeff(const BellFunctional& f) {
    if (f.form == BellFunctional::Form::ChshAbs) return 1.0;
    double m = 0.0;
    for (double c : f.coeffs) m = std::max(m, std::abs(c));
    return m;
}

double max_deterministic_value(const BellFunctional& f) {
    LocalPolytope poly = enumerate_strategies(f.scenario);
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < poly.num_strategies; ++i)
        best = std::max(best, bell_value(f, poly.strategy_behavior(i)));
    return best;
}

BellFunctional chsh_functional() {
    BellFunctional f;
    f.scenario = make_scenario(2, 2, 2, 2);
    f.name = "chsh";
    f.form = BellFunctional::Form::ChshAbs;
    f.local_bound = 2.0;
    return f;
}

BellFunctional i3322_functional() {
    BellFunctional f;
    f.scenario = make_scenario(3, 3, 2, 2);
    f.name = "i3322";
    f.form = BellFunctional::Form::Linear;
    f.coeffs.assign(static_cast<std::size_t>(f.scenario.table_size()), 0.0);

    auto add_corr = [&](int x, int y, double c) {
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                f.coeffs[f.scenario.index(x, y, a, b)] += c * outcome_sign(a) * outcome_sign(b);
    };
    // Marginals are folded in uniformly over the other party's inputs; exact
    // on no-signalling behaviors and on every deterministic strategy.
    auto add_marg_a = [&](int x, double c) {
        for (int y = 0; y < 3; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    f.coeffs[f.scenario.index(x, y, a, b)] += c * outcome_sign(a) / 3.0;
    };
    auto add_marg_b = [&](int y, double c) {
        for (int x = 0; x < 3; ++x)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    f.coeffs[f.scenario.index(x, y, a, b)] += c * outcome_sign(b) / 3.0;
    };

    add_marg_a(0, -1.0);
    add_marg_b(0, -2.0);
    add_marg_b(1, -1.0);
    add_corr(0, 0, 1.0);
    add_corr(0, 1, 1.0);
    add_corr(0, 2, 1.0);
    add_corr(1, 0, 1.0);
    add_corr(1, 1, 1.0);
    add_corr(1, 2, -1.0);
    add_corr(2, 0, 1.0);
    add_corr(2, 1, -1.0);

    f.local_bound = max_deterministic_value(f);
    return f;
}

BellFunctional cglmp3_functional() {
    BellFunctional f;
    f.scenario = make_scenario(2, 2, 3, 3);
    f.name = "cglmp3";
    f.form = BellFunctional::Form::Linear;
    f.coeffs.assign(static_cast<std::size_t>(f.scenario.table_size()), 0.0);

    // P(A=B+k | x,y) = sum_j p(a = j+k mod 3, b = j | x,y)
    auto add_term = [&](int x, int y, int k, double c) {
        for (int j = 0; j < 3; ++j)
            f.coeffs[f.scenario.index(x, y, (j + k) % 3, j)] += c;
    };
    add_term(0, 0, 0, 1.0);   // P(A1 = B1)
    add_term(1, 0, 2, 1.0);   // P(B1 = A2 + 1)  <=>  P(A2 = B1 + 2)
    add_term(1, 1, 0, 1.0);   // P(A2 = B2)
    add_term(0, 1, 0, 1.0);   // P(B2 = A1)      <=>  P(A1 = B2)
    add_term(0, 0, 2, -1.0);  // P(A1 = B1 - 1)  <=>  P(A1 = B1 + 2)
    add_term(1, 0, 0, -1.0);  // P(B1 = A2)      <=>  P(A2 = B1)
    add_term(1, 1, 2, -1.0);  // P(A2 = B2 - 1)
    add_term(0, 1, 1, -1.0);  // P(B2 = A1 - 1)  <=>  P(A1 = B2 + 1)

    f.local_bound = 2.0;
    return f;
}

namespace {

Measurement fourier_measurement(double offset, double outcome_sign_factor) {
    using std::complex;
    Measurement m;
    for (int out = 0; out < 3; ++out) {
        Eigen::Vector3cd v;
        for (int j = 0; j < 3; ++j) {
            double phase =
                2.0 * std::numbers::pi * j * (outcome_sign_factor * out + offset) / 3.0;
            v(j) = std::polar(1.0 / std::sqrt(3.0), phase);
        }
        m.outcomes.push_back(v * v.adjoint());
    }
    return m;
}

}  // namespace

CglmpSettings cglmp_optimal_settings() {
    CglmpSettings s;
    s.alice.push_back(fourier_measurement(0.0, +1.0));
    s.alice.push_back(fourier_measurement(0.5, +1.0));
    s.bob.push_back(fourier_measurement(0.25, -1.0));
    s.bob.push_back(fourier_measurement(-0.25, -1.0));
    return s;
}

BellFunctional functional_by_name(const std::string& name) {
    if (name == "chsh") return chsh_functional();
    if (name == "i3322") return i3322_functional();
    if (name == "cglmp3") return cglmp3_functional();
    throw ConfigError("unknown functional: " + name);
}

}  // namespace nlvol
