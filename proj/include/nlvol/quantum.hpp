#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "nlvol/behavior.hpp"

namespace nlvol {

using ComplexMatrix = Eigen::MatrixXcd;

bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);
bool is_positive_semidefinite(const ComplexMatrix& m, double tol);

/// Bipartite pure state sum_ij c(i,j) |i>|j> over the local computational bases.
struct PureState {
    ComplexMatrix coeffs;

    int dim_a() const { return static_cast<int>(coeffs.rows()); }
    int dim_b() const { return static_cast<int>(coeffs.cols()); }
};

/// Checks sum |c|^2 = 1 within 1e-12.
PureState make_pure_state(ComplexMatrix coeffs);

/// alpha|00> + sqrt(1-alpha^2)|11>, alpha in [0,1].
PureState psi_alpha(double alpha);

/// (|00> + gamma|11> + |22>) / sqrt(2 + gamma^2), gamma >= 0.
PureState psi_gamma(double gamma);

/// sin(a)|00> + cos(a)/sqrt(2) (|11> + |22>), a given in degrees in [0,90].
PureState ghz_alpha(double alpha_deg);

/// Complete projective measurement of one party, one operator per outcome.
struct Measurement {
    std::vector<ComplexMatrix> outcomes;

    int dim() const { return outcomes.empty() ? 0 : static_cast<int>(outcomes[0].rows()); }
};

/// Hermitian, PSD, idempotent outcomes summing to the identity, all within tol.
bool validate_measurement(const Measurement& m, double tol = 1e-10);

/// Two outcomes {|n><n|, 1 - |n><n|} with |n> = (cos(t/2), e^{i phi} sin(t/2));
/// outcome 0 is the sampled Bloch direction.
Measurement qubit_projective(double theta, double phi);

/// Product of three two-mode rotations T23(t3,p3) T13(t2,p2) T12(t1,p1), where
/// T_jk acts on modes (j,k) as [[e^{ip} cos t, -sin t], [e^{ip} sin t, cos t]].
/// angles = (t1, t2, t3, p1, p2, p3); throws on wrong count.
ComplexMatrix reck_unitary(std::span<const double> angles);

/// Fixed-basis measurement behind the interferometer: outcomes U^dag |a><a| U.
Measurement qutrit_measurement(std::span<const double> angles);

/// p(a,b|x,y) = <psi| M^x_a (x) N^y_b |psi>, contracted through the coefficient
/// matrix without forming tensor products. The result is clamped at zero,
/// normalization-checked per context (1e-9) and no-signalling-checked (1e-9).
Behavior behavior_from(const PureState& state,
                       const std::vector<Measurement>& alice,
                       const std::vector<Measurement>& bob);

/// Entanglement entropy in bits: -sum s^2 log2 s^2 over Schmidt coefficients.
double entanglement_entropy(const PureState& state);

/// Coefficient matrix c -> uA c uB^T; inputs must be unitary within 1e-10.
PureState apply_local_unitaries(const PureState& state, const ComplexMatrix& ua,
                                const ComplexMatrix& ub);

}  // namespace nlvol
