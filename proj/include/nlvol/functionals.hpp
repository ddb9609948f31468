#pragma once

#include <string>
#include <vector>

#include "nlvol/behavior.hpp"
#include "nlvol/quantum.hpp"

namespace nlvol {

/// Bell functional over behavior entries. Linear functionals are a dot
/// product with a coefficient table; ChshAbs evaluates the absolute-value
/// CHSH combination from correlators.
struct BellFunctional {
    enum class Form { Linear, ChshAbs };

    Scenario scenario;
    std::string name;
    Form form = Form::Linear;
    std::vector<double> coeffs;  // table-indexed; empty for ChshAbs
    double local_bound = 0.0;
};

/// Two-outcome correlator <A_x B_y> with outcomes 0 -> +1, 1 -> -1.
double correlator(const Behavior& b, int x, int y);

double bell_value(const BellFunctional& f, const Behavior& b);

/// Largest coefficient magnitude of f seen by a single table entry; gives the
/// exact Lipschitz link value - bound <= 2 nx ny maxcoef * NL.
double max_abs_coeff(const BellFunctional& f);

/// Maximum of f over all deterministic strategies of its scenario.
double max_deterministic_value(const BellFunctional& f);

/// |<A1B1> - <A1B2>| + <A2B1> + <A2B2>, local bound 2.
BellFunctional chsh_functional();

/// -<A1> - 2<B1> - <B2> + <A1B1> + <A1B2> + <A1B3>
/// + <A2B1> + <A2B2> - <A2B3> + <A3B1> - <A3B2>;
/// marginals folded into the table uniformly over the other party's inputs,
/// local bound computed exhaustively over the 64 deterministic strategies.
BellFunctional i3322_functional();

/// The qutrit inequality
///   I3 = P(A1=B1) + P(B1=A2+1) + P(A2=B2) + P(B2=A1)
///      - P(A1=B1-1) - P(B1=A2) - P(A2=B2-1) - P(B2=A1-1),
/// with P(A=B+k) summing p(a = j+k mod 3, b = j); local bound 2.
BellFunctional cglmp3_functional();

/// Canonical optimal measurement bases for the qutrit inequality: Fourier
/// vectors exp(2*pi*i*j*(a + alpha_x)/3) with alpha = (0, 1/2) for Alice and
/// exp(2*pi*i*j*(-b + beta_y)/3) with beta = (1/4, -1/4) for Bob.
struct CglmpSettings {
    std::vector<Measurement> alice;
    std::vector<Measurement> bob;
};
CglmpSettings cglmp_optimal_settings();

/// Look up one of the named functionals ("chsh", "i3322", "cglmp3").
BellFunctional functional_by_name(const std::string& name);

}  // namespace nlvol
