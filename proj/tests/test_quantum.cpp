#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlvol/errors.hpp"
#include "nlvol/montecarlo.hpp"
#include "nlvol/quantum.hpp"
#include "test_util.hpp"

using namespace nlvol;
using std::numbers::pi;

namespace {
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}

TEST_CASE("psi_alpha coefficients") {
    CHECK(psi_alpha(1.0).coeffs(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(psi_alpha(1.0).coeffs(1, 1)) == doctest::Approx(0.0));
    CHECK(psi_alpha(kInvSqrt2).coeffs(0, 0).real() ==
          doctest::Approx(psi_alpha(kInvSqrt2).coeffs(1, 1).real()));
    CHECK(psi_alpha(0.6).coeffs(0, 0).real() == doctest::Approx(0.6));
    CHECK(psi_alpha(0.6).coeffs(1, 1).real() == doctest::Approx(0.8));
    CHECK_THROWS_AS(psi_alpha(1.5), std::invalid_argument);
    CHECK_THROWS_AS(psi_alpha(-0.1), std::invalid_argument);
}

TEST_CASE("psi_gamma coefficients") {
    PureState max_ent = psi_gamma(1.0);
    CHECK(max_ent.coeffs(0, 0).real() == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(max_ent.coeffs(1, 1).real() == doctest::Approx(1.0 / std::sqrt(3.0)));

    PureState boundary = psi_gamma(0.0);
    CHECK(boundary.coeffs(0, 0).real() == doctest::Approx(kInvSqrt2));
    CHECK(std::abs(boundary.coeffs(1, 1)) == doctest::Approx(0.0));

    PureState anomaly = psi_gamma(0.792);
    double norm = 1.0 / std::sqrt(2.0 + 0.792 * 0.792);
    CHECK(anomaly.coeffs(0, 0).real() == doctest::Approx(norm).epsilon(1e-12));
    CHECK(anomaly.coeffs(1, 1).real() == doctest::Approx(0.792 * norm).epsilon(1e-12));
    CHECK(anomaly.coeffs(0, 0).real() == doctest::Approx(0.6155).epsilon(1e-3));
    CHECK(anomaly.coeffs(1, 1).real() == doctest::Approx(0.4875).epsilon(1e-3));

    CHECK_THROWS_AS(psi_gamma(-0.5), std::invalid_argument);
}

TEST_CASE("ghz_alpha coefficients") {
    CHECK(ghz_alpha(90.0).coeffs(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(ghz_alpha(0.0).coeffs(0, 0)) == doctest::Approx(0.0));
    CHECK(ghz_alpha(0.0).coeffs(1, 1).real() == doctest::Approx(kInvSqrt2));
    CHECK(ghz_alpha(0.0).coeffs(2, 2).real() == doctest::Approx(kInvSqrt2));

    double max_ent_deg = std::asin(1.0 / std::sqrt(3.0)) * 180.0 / pi;
    PureState s = ghz_alpha(max_ent_deg);
    CHECK(s.coeffs(0, 0).real() == doctest::Approx(s.coeffs(1, 1).real()));
    CHECK(s.coeffs(1, 1).real() == doctest::Approx(s.coeffs(2, 2).real()));

    CHECK_THROWS_AS(ghz_alpha(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ghz_alpha(90.5), std::invalid_argument);
}

TEST_CASE("qubit projective measurements at reference angles") {
    Measurement z = qubit_projective(0.0, 1.3);
    CHECK(z.outcomes[0](0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(z.outcomes[0](1, 1)) == doctest::Approx(0.0));

    Measurement z_flip = qubit_projective(pi, 0.0);
    CHECK(z_flip.outcomes[0](1, 1).real() == doctest::Approx(1.0));
    CHECK(z_flip.outcomes[1](0, 0).real() == doctest::Approx(1.0));

    Measurement x = qubit_projective(pi / 2, 0.0);
    CHECK(x.outcomes[0](0, 1).real() == doctest::Approx(0.5));
    CHECK(x.outcomes[1](0, 1).real() == doctest::Approx(-0.5));
}

TEST_CASE("reck unitary structure") {
    double zeros[6] = {0, 0, 0, 0, 0, 0};
    ComplexMatrix id = reck_unitary(zeros);
    CHECK((id - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    double swap12[6] = {pi / 2, 0, 0, 0, 0, 0};
    ComplexMatrix u = reck_unitary(swap12);
    CHECK(std::abs(u(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(u(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(u(2, 2)) == doctest::Approx(1.0));

    double bad[4] = {0, 0, 0, 0};
    CHECK_THROWS_AS(reck_unitary(std::span<const double>(bad, 4)), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        double a[6];
        for (double& v : a) v = test::urand(rng, -pi, pi);
        CHECK(is_unitary(reck_unitary(a), 1e-12));
    }
}

TEST_CASE("qutrit measurement invariants and phase freedom") {
    double zeros[6] = {0, 0, 0, 0, 0, 0};
    Measurement comp = qutrit_measurement(zeros);
    for (int a = 0; a < 3; ++a) CHECK(comp.outcomes[a](a, a).real() == doctest::Approx(1.0));

    // Left-diagonal phases on the interferometer do not change the projectors.
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        double a[6];
        for (double& v : a) v = test::urand(rng, -pi, pi);
        ComplexMatrix u = reck_unitary(a);
        ComplexMatrix d = ComplexMatrix::Zero(3, 3);
        for (int k = 0; k < 3; ++k) d(k, k) = std::polar(1.0, test::urand(rng, -pi, pi));
        ComplexMatrix du = d * u;
        for (int out = 0; out < 3; ++out) {
            Eigen::Vector3cd col_a = u.adjoint().col(out);
            Eigen::Vector3cd col_b = du.adjoint().col(out);
            ComplexMatrix pa = col_a * col_a.adjoint();
            ComplexMatrix pb = col_b * col_b.adjoint();
            CHECK((pa - pb).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("sampled measurements satisfy the projective invariants") {
    std::mt19937_64 rng(13);
    SamplerSpec qubits{SamplerKind::QubitBloch, 2};
    SamplerSpec qutrits{SamplerKind::QutritReck, 2};
    for (int rep = 0; rep < 500; ++rep) {
        SettingAngles sa = sample_settings(qubits, rng);
        for (const Measurement& m : measurements_from_angles(qubits, sa.party_a))
            CHECK(validate_measurement(m, 1e-10));
        SettingAngles sb = sample_settings(qutrits, rng);
        for (const Measurement& m : measurements_from_angles(qutrits, sb.party_b))
            CHECK(validate_measurement(m, 1e-10));
    }
}

TEST_CASE("behavior_from on product and entangled reference states") {
    std::vector<Measurement> comp_a = {qubit_projective(0, 0), qubit_projective(0, 0)};
    std::vector<Measurement> comp_b = comp_a;

    Behavior product = behavior_from(psi_alpha(1.0), comp_a, comp_b);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(product.at(x, y, 0, 0) == doctest::Approx(1.0));

    Behavior schmidt = behavior_from(psi_alpha(kInvSqrt2), comp_a, comp_b);
    CHECK(schmidt.at(0, 0, 0, 0) == doctest::Approx(0.5));
    CHECK(schmidt.at(0, 0, 1, 1) == doctest::Approx(0.5));
    CHECK(schmidt.at(0, 0, 0, 1) == doctest::Approx(0.0));
    CHECK(schmidt.at(0, 0, 1, 0) == doctest::Approx(0.0));
}

TEST_CASE("behavior_from reaches the Tsirelson value at the known optimal angles") {
    std::vector<Measurement> ma = {qubit_projective(0, 0), qubit_projective(pi / 2, 0)};
    std::vector<Measurement> mb = {qubit_projective(pi / 4, 0), qubit_projective(3 * pi / 4, 0)};
    Behavior b = behavior_from(psi_alpha(kInvSqrt2), ma, mb);

    double e00 = b.at(0, 0, 0, 0) - b.at(0, 0, 0, 1) - b.at(0, 0, 1, 0) + b.at(0, 0, 1, 1);
    double e01 = b.at(0, 1, 0, 0) - b.at(0, 1, 0, 1) - b.at(0, 1, 1, 0) + b.at(0, 1, 1, 1);
    double e10 = b.at(1, 0, 0, 0) - b.at(1, 0, 0, 1) - b.at(1, 0, 1, 0) + b.at(1, 0, 1, 1);
    double e11 = b.at(1, 1, 0, 0) - b.at(1, 1, 0, 1) - b.at(1, 1, 1, 0) + b.at(1, 1, 1, 1);
    double chsh = std::abs(e00 - e01) + e10 + e11;
    CHECK(chsh == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-9));
}

TEST_CASE("behavior_from dimension mismatch") {
    std::vector<Measurement> qubit = {qubit_projective(0, 0)};
    double zeros[6] = {0, 0, 0, 0, 0, 0};
    std::vector<Measurement> qutrit = {qutrit_measurement(zeros)};
    CHECK_THROWS_AS(behavior_from(psi_alpha(0.5), qubit, qutrit), std::invalid_argument);
    CHECK_THROWS_AS(behavior_from(psi_alpha(0.5), {}, qubit), std::invalid_argument);
}

TEST_CASE("sampled behaviors are normalized non-signalling probability tables") {
    std::mt19937_64 rng(14);
    SamplerSpec specs[2] = {{SamplerKind::QubitBloch, 2}, {SamplerKind::QutritReck, 2}};
    PureState states[2] = {psi_alpha(0.83), psi_gamma(0.9)};
    for (int k = 0; k < 2; ++k) {
        for (int rep = 0; rep < 500; ++rep) {
            SettingAngles angles = sample_settings(specs[k], rng);
            Behavior b = behavior_from(states[k],
                                       measurements_from_angles(specs[k], angles.party_a),
                                       measurements_from_angles(specs[k], angles.party_b));
            for (double p : b.probs) CHECK(p >= 0.0);
            for (int x = 0; x < b.scenario.nx; ++x)
                for (int y = 0; y < b.scenario.ny; ++y) {
                    double sum = 0.0;
                    for (int a = 0; a < b.scenario.na; ++a)
                        for (int bb = 0; bb < b.scenario.nb; ++bb) sum += b.at(x, y, a, bb);
                    CHECK(std::abs(sum - 1.0) < 1e-9);
                }
            CHECK(check_no_signalling(b, 1e-9).empty());
        }
    }
}

TEST_CASE("entanglement entropy closed forms") {
    CHECK(entanglement_entropy(psi_alpha(1.0)) == doctest::Approx(0.0));
    CHECK(entanglement_entropy(psi_alpha(kInvSqrt2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entanglement_entropy(psi_gamma(1.0)) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

    for (double alpha : {0.1, 0.3, 0.6, 0.9}) {
        double p = alpha * alpha;
        double expected = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
        CHECK(std::abs(entanglement_entropy(psi_alpha(alpha)) - expected) < 1e-10);
    }
}

TEST_CASE("local unitaries act on the coefficient matrix as uA c uB^T") {
    ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    PureState s = psi_alpha(0.6);
    PureState same = apply_local_unitaries(s, id, id);
    CHECK((same.coeffs - s.coeffs).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    ComplexMatrix pauli_x = ComplexMatrix::Zero(2, 2);
    pauli_x(0, 1) = 1;
    pauli_x(1, 0) = 1;
    PureState flipped = apply_local_unitaries(psi_alpha(1.0), pauli_x, pauli_x);
    CHECK(flipped.coeffs(1, 1).real() == doctest::Approx(1.0));

    ComplexMatrix not_unitary = ComplexMatrix::Ones(2, 2);
    CHECK_THROWS_AS(apply_local_unitaries(s, not_unitary, id), std::invalid_argument);
}

TEST_CASE("entropy is invariant under local unitaries") {
    std::mt19937_64 rng(15);
    for (int rep = 0; rep < 100; ++rep) {
        PureState s = rep % 2 == 0 ? psi_alpha(test::urand(rng, 0.05, 0.95))
                                   : psi_gamma(test::urand(rng, 0.1, 1.5));
        int d = s.dim_a();
        PureState t = apply_local_unitaries(s, test::random_unitary(rng, d),
                                            test::random_unitary(rng, d));
        CHECK(std::abs(entanglement_entropy(t) - entanglement_entropy(s)) < 1e-10);
    }
}

TEST_CASE("rotating the state equals counter-rotating the measurements") {
    std::mt19937_64 rng(16);
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    PureState s = psi_alpha(0.77);
    for (int rep = 0; rep < 20; ++rep) {
        ComplexMatrix ua = test::random_unitary(rng, 2);
        ComplexMatrix ub = test::random_unitary(rng, 2);
        SettingAngles angles = sample_settings(spec, rng);
        std::vector<Measurement> ma = measurements_from_angles(spec, angles.party_a);
        std::vector<Measurement> mb = measurements_from_angles(spec, angles.party_b);

        Behavior rotated_state = behavior_from(apply_local_unitaries(s, ua, ub), ma, mb);

        std::vector<Measurement> ma_rot = ma, mb_rot = mb;
        for (Measurement& m : ma_rot)
            for (ComplexMatrix& op : m.outcomes) op = ua.adjoint() * op * ua;
        for (Measurement& m : mb_rot)
            for (ComplexMatrix& op : m.outcomes) op = ub.adjoint() * op * ub;
        Behavior rotated_meas = behavior_from(s, ma_rot, mb_rot);

        for (int j = 0; j < rotated_state.scenario.table_size(); ++j)
            CHECK(std::abs(rotated_state.probs[j] - rotated_meas.probs[j]) < 1e-10);
    }
}
