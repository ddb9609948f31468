#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nlvol/errors.hpp"
#include "nlvol/montecarlo.hpp"
#include "test_util.hpp"

using namespace nlvol;

namespace {

bool estimates_identical(const VolumeEstimate& a, const VolumeEstimate& b) {
    return a.n_samples == b.n_samples && a.n_nonlocal == b.n_nonlocal &&
           a.n_violating == b.n_violating && a.v_hat == b.v_hat && a.vq_hat == b.vq_hat &&
           a.stderr_v == b.stderr_v && a.stderr_vq == b.stderr_vq && a.vi_hat == b.vi_hat &&
           a.max_bell == b.max_bell;
}

}  // namespace

TEST_CASE("per-sample streams are deterministic and distinct") {
    SamplerSpec spec{SamplerKind::QubitBloch, 2};

    std::mt19937_64 r1 = derive_sample_rng(42, 7);
    std::mt19937_64 r2 = derive_sample_rng(42, 7);
    SettingAngles a1 = sample_settings(spec, r1);
    SettingAngles a2 = sample_settings(spec, r2);
    CHECK(a1.party_a == a2.party_a);
    CHECK(a1.party_b == a2.party_b);

    std::mt19937_64 r3 = derive_sample_rng(42, 8);
    SettingAngles a3 = sample_settings(spec, r3);
    CHECK(a1.party_a != a3.party_a);

    std::mt19937_64 r4 = derive_sample_rng(43, 7);
    SettingAngles a4 = sample_settings(spec, r4);
    CHECK(a1.party_a != a4.party_a);
}

TEST_CASE("sampling dimensions and ranges") {
    std::mt19937_64 rng(1);

    SamplerSpec chsh{SamplerKind::QubitBloch, 2};
    SettingAngles a = sample_settings(chsh, rng);
    CHECK(a.party_a.size() == 4);
    CHECK(a.party_b.size() == 4);  // eight angles in total

    SamplerSpec three{SamplerKind::QubitBloch, 3};
    SettingAngles b = sample_settings(three, rng);
    CHECK(b.party_a.size() + b.party_b.size() == 12);

    SamplerSpec qutrit{SamplerKind::QutritReck, 2};
    SettingAngles c = sample_settings(qutrit, rng);
    CHECK(c.party_a.size() + c.party_b.size() == 24);

    for (int rep = 0; rep < 1000; ++rep) {
        SettingAngles s = sample_settings(chsh, rng);
        for (std::size_t k = 0; k < s.party_a.size(); k += 2) {
            CHECK(s.party_a[k] >= 0.0);
            CHECK(s.party_a[k] < std::numbers::pi);
            CHECK(s.party_a[k + 1] >= 0.0);
            CHECK(s.party_a[k + 1] < 2 * std::numbers::pi);
        }
        SettingAngles q = sample_settings(qutrit, rng);
        for (double v : q.party_b) {
            CHECK(v >= -std::numbers::pi);
            CHECK(v < std::numbers::pi);
        }
    }
}

TEST_CASE("records for a short run prefix a longer run") {
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    PureState state = psi_alpha(0.8);
    std::vector<BellFunctional> fns = {chsh_functional()};

    std::vector<SampleRecord> short_run, long_run;
    for_each_record(state, spec, fns, 100, 99, kLocalityTol, 1,
                    [&](const SampleRecord& r) { short_run.push_back(r); });
    for_each_record(state, spec, fns, 1000, 99, kLocalityTol, 2,
                    [&](const SampleRecord& r) { long_run.push_back(r); });

    REQUIRE(short_run.size() == 100);
    REQUIRE(long_run.size() == 1000);
    for (std::size_t i = 0; i < short_run.size(); ++i) {
        CHECK(short_run[i].index == i);
        CHECK(short_run[i].angles.party_a == long_run[i].angles.party_a);
        CHECK(short_run[i].angles.party_b == long_run[i].angles.party_b);
        CHECK(short_run[i].nl == long_run[i].nl);
        CHECK(short_run[i].bell_values == long_run[i].bell_values);
    }
}

TEST_CASE("serial and parallel estimates are bit-identical") {
    std::vector<BellFunctional> fns = {chsh_functional()};
    PureState state = psi_alpha(0.8);
    SamplerSpec spec{SamplerKind::QubitBloch, 2};

    VolumeEstimate serial = estimate_volumes_serial(state, spec, fns, 700, 1234);
    for (int threads : {1, 2, 4}) {
        VolumeEstimate par = estimate_volumes(state, spec, fns, 700, 1234, kLocalityTol, threads);
        CHECK(estimates_identical(serial, par));
    }

    PureState qutrit_state = psi_gamma(1.0);
    SamplerSpec qutrit{SamplerKind::QutritReck, 2};
    std::vector<BellFunctional> qfns = {cglmp3_functional()};
    VolumeEstimate qserial = estimate_volumes_serial(qutrit_state, qutrit, qfns, 60, 77);
    VolumeEstimate qpar = estimate_volumes(qutrit_state, qutrit, qfns, 60, 77, kLocalityTol, 2);
    CHECK(estimates_identical(qserial, qpar));
}

TEST_CASE("product states give exactly zero estimates") {
    std::vector<BellFunctional> fns = {chsh_functional()};
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    for (double alpha : {1.0, 0.0}) {
        VolumeEstimate e = estimate_volumes(psi_alpha(alpha), spec, fns, 1000, 5);
        CHECK(e.v_hat == 0.0);
        CHECK(e.vq_hat == 0.0);
        CHECK(e.n_nonlocal == 0);
        CHECK(e.vi_hat[0] == 0.0);
        CHECK(e.stderr_v == 0.0);
    }

    SamplerSpec qutrit{SamplerKind::QutritReck, 2};
    VolumeEstimate e = estimate_volumes(ghz_alpha(90.0), qutrit, {cglmp3_functional()}, 100, 5);
    CHECK(e.v_hat == 0.0);
    CHECK(e.vq_hat == 0.0);
}

TEST_CASE("per-record invariants on an entangled run") {
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    std::vector<BellFunctional> fns = {chsh_functional()};
    const double tol = kLocalityTol;
    int nonlocal = 0;
    for_each_record(psi_alpha(1.0 / std::numbers::sqrt2), spec, fns, 2000, 31337, tol, 0,
                    [&](const SampleRecord& rec) {
                        CHECK(rec.nl >= 0.0);
                        CHECK(rec.nl <= 1.0);
                        CHECK(rec.nonlocal == (rec.nl > tol));
                        if (rec.bell_values[0] > 2.0 + tol) CHECK(rec.nonlocal);
                        double w = rec.nonlocal ? rec.nl : 0.0;
                        double chi = rec.nonlocal ? 1.0 : 0.0;
                        CHECK(w <= chi);
                        if (rec.nonlocal) ++nonlocal;
                    });
    CHECK(nonlocal > 400);
}

TEST_CASE("estimator invariants and regression values for the maximally entangled qubit pair") {
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    std::vector<BellFunctional> fns = {chsh_functional()};
    VolumeEstimate e =
        estimate_volumes(psi_alpha(1.0 / std::numbers::sqrt2), spec, fns, 10000, 271828);

    CHECK(e.vq_hat <= e.v_hat);
    CHECK(e.v_hat <= 1.0);
    CHECK(e.vq_hat > 0.0);
    CHECK(e.v_hat > 0.0);

    // Violation of the evaluated form is sufficient for nonlocality. The
    // absolute-value form covers one of the four CHSH sign patterns, so by
    // relabelling symmetry its violation volume sits near vHat/4.
    CHECK(e.vi_hat[0] <= e.v_hat);
    CHECK(std::abs(e.vi_hat[0] - e.v_hat / 4.0) < 0.012);

    // Regression values for this implementation's deterministic stream
    // (uniform-in-angle sampling, seed 271828).
    CHECK(e.v_hat == doctest::Approx(0.3321).epsilon(1e-9));
    CHECK(e.vq_hat == doctest::Approx(0.0090494446).epsilon(1e-6));
    CHECK(e.max_bell[0] <= 2.0 * std::numbers::sqrt2 + 1e-9);
}

TEST_CASE("large-sample regression for the maximally entangled qubit pair") {
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    std::vector<BellFunctional> fns = {chsh_functional()};
    VolumeEstimate e =
        estimate_volumes(psi_alpha(1.0 / std::numbers::sqrt2), spec, fns, 100000, 314159);

    CHECK(e.v_hat > 0.0);
    CHECK(e.vq_hat < e.v_hat);  // strict at this scale

    // Frozen values for seed 314159 with 3-sigma bands around them
    // (se_v = 0.0015, se_q = 5.6e-5).
    CHECK(e.v_hat == doctest::Approx(0.32466).epsilon(1e-9));
    CHECK(e.vq_hat == doctest::Approx(0.008867468).epsilon(1e-6));
    CHECK(std::abs(e.v_hat - 0.3247) < 3 * 0.0015);
    CHECK(std::abs(e.vq_hat - 0.00887) < 3 * 5.6e-5);
}

TEST_CASE("a nonlocal sample violates some member of the CHSH family") {
    // The paper's per-sample equivalence in (2,2,2): nonlocality coincides
    // with violating the CHSH inequality up to relabelling. The evaluated
    // functional keeps the literal form; the family check runs here.
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    LocalPolytope poly = enumerate_strategies(spec.scenario());
    PureState state = psi_alpha(1.0 / std::numbers::sqrt2);
    int nonlocal = 0, family_violations = 0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        SampleRecord rec = evaluate_sample(state, spec, {}, poly, 161803, i, kLocalityTol);
        std::mt19937_64 rng = derive_sample_rng(161803, i);
        SettingAngles angles = sample_settings(spec, rng);
        Behavior b = behavior_from(state, measurements_from_angles(spec, angles.party_a),
                                   measurements_from_angles(spec, angles.party_b));
        bool family = test::max_chsh_expression(b) > 2.0 + kLocalityTol;
        CHECK(family == rec.nonlocal);
        nonlocal += rec.nonlocal;
        family_violations += family;
    }
    CHECK(nonlocal == family_violations);
    CHECK(nonlocal > 400);
}

TEST_CASE("estimates are invariant under local unitaries within 3 sigma") {
    // Uniform-in-angle sampling is invariant under the Bloch rotations that
    // preserve |z|: phase rotations and pi-flips. For that subgroup the
    // estimator distributions coincide and independent seeds agree within
    // statistical error. (Generic rotations reweight the angle measure.)
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    std::vector<BellFunctional> fns = {chsh_functional()};
    PureState base = psi_alpha(0.8);

    ComplexMatrix ua = ComplexMatrix::Zero(2, 2);  // z-phase composed with X
    ua(0, 1) = std::polar(1.0, 1.234);
    ua(1, 0) = 1.0;
    ComplexMatrix ub = ComplexMatrix::Identity(2, 2);
    ub(1, 1) = std::polar(1.0, -0.777);
    PureState rotated = apply_local_unitaries(base, ua, ub);

    VolumeEstimate e1 = estimate_volumes(base, spec, fns, 10000, 1111);
    VolumeEstimate e2 = estimate_volumes(rotated, spec, fns, 10000, 2222);

    double sigma_v = std::sqrt(e1.stderr_v * e1.stderr_v + e2.stderr_v * e2.stderr_v);
    CHECK(std::abs(e1.v_hat - e2.v_hat) <= 3.0 * sigma_v);
    double sigma_q = std::sqrt(e1.stderr_vq * e1.stderr_vq + e2.stderr_vq * e2.stderr_vq);
    CHECK(std::abs(e1.vq_hat - e2.vq_hat) <= 3.0 * sigma_q);
}

TEST_CASE("more measurements see at least as much nonlocal volume") {
    PureState state = psi_alpha(1.0 / std::numbers::sqrt2);
    VolumeEstimate two = estimate_volumes(state, {SamplerKind::QubitBloch, 2}, {}, 4000, 9);
    VolumeEstimate three = estimate_volumes(state, {SamplerKind::QubitBloch, 3}, {}, 4000, 9);
    double sigma = std::sqrt(two.stderr_v * two.stderr_v + three.stderr_v * three.stderr_v);
    CHECK(three.v_hat >= two.v_hat - 3.0 * sigma);
}

TEST_CASE("estimator argument validation") {
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    CHECK_THROWS_AS(estimate_volumes(psi_gamma(1.0), spec, {}, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_volumes(psi_alpha(0.5), spec, {}, 0, 0), std::invalid_argument);
}

TEST_CASE("record lines carry index, angles, nl, bell values, flag") {
    SamplerSpec spec{SamplerKind::QubitBloch, 2};
    std::vector<BellFunctional> fns = {chsh_functional()};
    LocalPolytope poly = enumerate_strategies(spec.scenario());
    SampleRecord rec = evaluate_sample(psi_alpha(0.9), spec, fns, poly, 5, 3, kLocalityTol);

    std::ostringstream out;
    write_record_line(out, rec);
    std::istringstream in(out.str());
    std::vector<std::string> fields;
    std::string f;
    while (in >> f) fields.push_back(f);
    // index + 8 angles + nl + 1 bell value + flag
    CHECK(fields.size() == 1 + 8 + 1 + 1 + 1);
    CHECK(fields[0] == "3");
    CHECK((fields.back() == "0" || fields.back() == "1"));
    CHECK(std::stod(fields[9]) == doctest::Approx(rec.nl).epsilon(1e-15));
}
