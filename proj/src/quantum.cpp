#include "nlvol/quantum.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nlvol/errors.hpp"

namespace nlvol {

using std::complex;

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    ComplexMatrix d = m.adjoint() * m;
    d -= ComplexMatrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_positive_semidefinite(const ComplexMatrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

PureState make_pure_state(ComplexMatrix coeffs) {
    if (!coeffs.allFinite()) throw std::invalid_argument("pure state: non-finite coefficients");
    double norm2 = coeffs.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw std::invalid_argument("pure state: coefficients not normalized");
    return PureState{std::move(coeffs)};
}

PureState psi_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("psi_alpha: alpha must lie in [0,1]");
    ComplexMatrix c = ComplexMatrix::Zero(2, 2);
    c(0, 0) = alpha;
    c(1, 1) = std::sqrt(1.0 - alpha * alpha);
    return PureState{std::move(c)};
}

PureState psi_gamma(double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("psi_gamma: gamma must be >= 0");
    double norm = 1.0 / std::sqrt(2.0 + gamma * gamma);
    ComplexMatrix c = ComplexMatrix::Zero(3, 3);
    c(0, 0) = norm;
    c(1, 1) = gamma * norm;
    c(2, 2) = norm;
    return PureState{std::move(c)};
}

PureState ghz_alpha(double alpha_deg) {
    if (!(alpha_deg >= 0.0 && alpha_deg <= 90.0))
        throw std::invalid_argument("ghz_alpha: angle must lie in [0,90] degrees");
    double a = alpha_deg * std::numbers::pi / 180.0;
    ComplexMatrix c = ComplexMatrix::Zero(3, 3);
    c(0, 0) = std::sin(a);
    c(1, 1) = std::cos(a) / std::numbers::sqrt2;
    c(2, 2) = std::cos(a) / std::numbers::sqrt2;
    return PureState{std::move(c)};
}

bool validate_measurement(const Measurement& m, double tol) {
    if (m.outcomes.empty()) return false;
    const int d = m.dim();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& op : m.outcomes) {
        if (op.rows() != d || op.cols() != d) return false;
        if (!is_hermitian(op, tol)) return false;
        if (!is_positive_semidefinite(op, tol)) return false;
        if ((op * op - op).cwiseAbs().maxCoeff() > tol) return false;
        sum += op;
    }
    sum -= ComplexMatrix::Identity(d, d);
    return sum.cwiseAbs().maxCoeff() <= tol;
}

Measurement qubit_projective(double theta, double phi) {
    Eigen::Vector2cd n;
    n << std::cos(theta / 2.0),
        std::polar(1.0, phi) * std::sin(theta / 2.0);
    ComplexMatrix p = n * n.adjoint();
    Measurement m;
    m.outcomes.push_back(p);
    m.outcomes.push_back(ComplexMatrix::Identity(2, 2) - p);
    return m;
}

namespace {

ComplexMatrix two_mode_rotation(int j, int k, double theta, double phi) {
    ComplexMatrix t = ComplexMatrix::Identity(3, 3);
    complex<double> eip = std::polar(1.0, phi);
    t(j, j) = eip * std::cos(theta);
    t(j, k) = -std::sin(theta);
    t(k, j) = eip * std::sin(theta);
    t(k, k) = std::cos(theta);
    return t;
}

}  // namespace

ComplexMatrix reck_unitary(std::span<const double> angles) {
    if (angles.size() != 6)
        throw std::invalid_argument("reck_unitary: expected 6 angles");
    ComplexMatrix t12 = two_mode_rotation(0, 1, angles[0], angles[3]);
    ComplexMatrix t13 = two_mode_rotation(0, 2, angles[1], angles[4]);
    ComplexMatrix t23 = two_mode_rotation(1, 2, angles[2], angles[5]);
    return t23 * t13 * t12;
}

Measurement qutrit_measurement(std::span<const double> angles) {
    ComplexMatrix u = reck_unitary(angles);
    Measurement m;
    for (int a = 0; a < 3; ++a) {
        Eigen::Vector3cd col = u.adjoint().col(a);
        m.outcomes.push_back(col * col.adjoint());
    }
    return m;
}

Behavior behavior_from(const PureState& state, const std::vector<Measurement>& alice,
                       const std::vector<Measurement>& bob) {
    if (alice.empty() || bob.empty())
        throw std::invalid_argument("behavior_from: each party needs at least one measurement");
    const int da = state.dim_a();
    const int db = state.dim_b();
    for (const auto& m : alice)
        if (m.dim() != da) throw std::invalid_argument("behavior_from: Alice dimension mismatch");
    for (const auto& m : bob)
        if (m.dim() != db) throw std::invalid_argument("behavior_from: Bob dimension mismatch");

    Scenario s = make_scenario(static_cast<int>(alice.size()), static_cast<int>(bob.size()),
                               static_cast<int>(alice[0].outcomes.size()),
                               static_cast<int>(bob[0].outcomes.size()));
    Behavior beh = make_behavior(s);

    const ComplexMatrix& c = state.coeffs;
    const ComplexMatrix cconj = c.conjugate();
    for (int x = 0; x < s.nx; ++x) {
        for (int a = 0; a < s.na; ++a) {
            // p(a,b|x,y) = sum_ij conj(c)_ij (M_a c N_b^T)_ij
            ComplexMatrix mc = alice[x].outcomes[a] * c;
            for (int y = 0; y < s.ny; ++y) {
                for (int b = 0; b < s.nb; ++b) {
                    complex<double> val =
                        cconj.cwiseProduct(mc * bob[y].outcomes[b].transpose()).sum();
                    double p = val.real();
                    if (p < 0.0) {
                        if (p < -1e-12)
                            throw ComputationError("behavior_from: probability below -1e-12");
                        p = 0.0;
                    }
                    beh.at(x, y, a, b) = p;
                }
            }
        }
    }

    for (int x = 0; x < s.nx; ++x)
        for (int y = 0; y < s.ny; ++y) {
            double sum = 0.0;
            for (int a = 0; a < s.na; ++a)
                for (int b = 0; b < s.nb; ++b) sum += beh.at(x, y, a, b);
            if (std::abs(sum - 1.0) > 1e-9)
                throw ComputationError("behavior_from: context not normalized");
        }
    if (!check_no_signalling(beh, 1e-9).empty())
        throw ComputationError("behavior_from: no-signalling check failed");
    return beh;
}

double entanglement_entropy(const PureState& state) {
    Eigen::JacobiSVD<ComplexMatrix> svd(state.coeffs);
    double entropy = 0.0;
    for (double s : svd.singularValues()) {
        double p = s * s;
        if (p < 1e-15) continue;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

PureState apply_local_unitaries(const PureState& state, const ComplexMatrix& ua,
                                const ComplexMatrix& ub) {
    if (ua.rows() != state.dim_a() || ub.rows() != state.dim_b())
        throw std::invalid_argument("apply_local_unitaries: dimension mismatch");
    if (!is_unitary(ua, 1e-10) || !is_unitary(ub, 1e-10))
        throw std::invalid_argument("apply_local_unitaries: input not unitary");
    return make_pure_state(ua * state.coeffs * ub.transpose());
}

}  // namespace nlvol
