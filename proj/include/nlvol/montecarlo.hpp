#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "nlvol/functionals.hpp"
#include "nlvol/polytope.hpp"
#include "nlvol/quantum.hpp"

namespace nlvol {

/// splitmix64 step: advances the state and returns a mixed 64-bit value.
std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based per-sample stream: sample i sees the same angles regardless
/// of worker count or execution order. The (seed, index) pair is hashed with
/// splitmix64 and used to seed a std::mt19937_64.
std::mt19937_64 derive_sample_rng(std::uint64_t master_seed, std::uint64_t index);

/// Uniform double in [lo, hi) built from the top 53 bits of the generator
/// output; fully specified so results are identical everywhere.
double uniform_double(std::mt19937_64& rng, double lo, double hi);

enum class SamplerKind { QubitBloch, QutritReck };

struct SamplerSpec {
    SamplerKind kind = SamplerKind::QubitBloch;
    int measurements_per_party = 2;

    int local_dim() const { return kind == SamplerKind::QubitBloch ? 2 : 3; }
    int angles_per_measurement() const { return kind == SamplerKind::QubitBloch ? 2 : 6; }
    Scenario scenario() const;
};

/// Flat per-party angle lists. Qubit sampling emits (theta, phi) pairs per
/// measurement with theta ~ U[0,pi), phi ~ U[0,2pi); qutrit sampling emits 6
/// angles per measurement, each ~ U[-pi,pi). Party A is drawn fully first.
struct SettingAngles {
    SamplerKind kind = SamplerKind::QubitBloch;
    std::vector<double> party_a;
    std::vector<double> party_b;
};

SettingAngles sample_settings(const SamplerSpec& spec, std::mt19937_64& rng);

std::vector<Measurement> measurements_from_angles(const SamplerSpec& spec,
                                                  std::span<const double> party_angles);

struct SampleRecord {
    std::uint64_t index = 0;
    SettingAngles angles;
    double nl = 0.0;
    std::vector<double> bell_values;
    bool nonlocal = false;
};

struct VolumeEstimate {
    std::uint64_t n_samples = 0;
    std::uint64_t n_nonlocal = 0;
    std::vector<std::uint64_t> n_violating;  // per functional
    double v_hat = 0.0;
    double vq_hat = 0.0;
    std::vector<double> vi_hat;    // per functional
    std::vector<double> max_bell;  // per functional
    double stderr_v = 0.0;
    double stderr_vq = 0.0;
    std::uint64_t seed = 0;
};

/// One sample: derive the stream, draw settings, build the behavior, compute
/// the trace distance and all functional values.
SampleRecord evaluate_sample(const PureState& state, const SamplerSpec& spec,
                             const std::vector<BellFunctional>& functionals,
                             const LocalPolytope& polytope, std::uint64_t master_seed,
                             std::uint64_t index, double tol);

/// Order-sensitive reduction of sample records into a VolumeEstimate. All
/// estimation paths feed records through this in index order, which is what
/// makes serial and parallel runs bit-identical.
class VolumeAccumulator {
public:
    VolumeAccumulator(const std::vector<BellFunctional>& functionals, double tol);
    void add(const SampleRecord& rec);
    VolumeEstimate finish(std::uint64_t seed) const;

private:
    std::vector<double> bounds_;
    double tol_;
    std::uint64_t n_ = 0;
    std::uint64_t nonlocal_ = 0;
    double sum_w_ = 0.0;
    double sum_w2_ = 0.0;
    std::vector<std::uint64_t> counts_;
    std::vector<double> max_;
};

/// Streams records to the sink in index order. Samples are evaluated in
/// OpenMP-parallel chunks; results are identical to a sequential run.
void for_each_record(const PureState& state, const SamplerSpec& spec,
                     const std::vector<BellFunctional>& functionals, std::uint64_t n_samples,
                     std::uint64_t master_seed, double tol, int threads,
                     const std::function<void(const SampleRecord&)>& sink);

/// OpenMP estimator. threads = 0 uses all available.
VolumeEstimate estimate_volumes(const PureState& state, const SamplerSpec& spec,
                                const std::vector<BellFunctional>& functionals,
                                std::uint64_t n_samples, std::uint64_t master_seed,
                                double tol = kLocalityTol, int threads = 0);

/// Serial reference implementation; bit-identical to estimate_volumes.
VolumeEstimate estimate_volumes_serial(const PureState& state, const SamplerSpec& spec,
                                       const std::vector<BellFunctional>& functionals,
                                       std::uint64_t n_samples, std::uint64_t master_seed,
                                       double tol = kLocalityTol);

/// Record dump line: index, angles (party A then B), nl, bell values,
/// isNonlocal flag; space-separated, doubles in round-trip precision.
void write_record_line(std::ostream& out, const SampleRecord& rec);

}  // namespace nlvol
