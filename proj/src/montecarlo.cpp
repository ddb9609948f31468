#include "nlvol/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "nlvol/errors.hpp"

namespace nlvol {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::mt19937_64 derive_sample_rng(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t state = master_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    return std::mt19937_64(splitmix64(state));
}

double uniform_double(std::mt19937_64& rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

Scenario SamplerSpec::scenario() const {
    int d = local_dim();
    return make_scenario(measurements_per_party, measurements_per_party, d, d);
}

SettingAngles sample_settings(const SamplerSpec& spec, std::mt19937_64& rng) {
    if (spec.measurements_per_party < 1)
        throw std::invalid_argument("sample_settings: need at least one measurement per party");
    SettingAngles out;
    out.kind = spec.kind;
    auto draw_party = [&](std::vector<double>& dst) {
        dst.reserve(static_cast<std::size_t>(spec.measurements_per_party) *
                    spec.angles_per_measurement());
        for (int m = 0; m < spec.measurements_per_party; ++m) {
            if (spec.kind == SamplerKind::QubitBloch) {
                dst.push_back(uniform_double(rng, 0.0, std::numbers::pi));
                dst.push_back(uniform_double(rng, 0.0, 2.0 * std::numbers::pi));
            } else {
                for (int k = 0; k < 6; ++k)
                    dst.push_back(uniform_double(rng, -std::numbers::pi, std::numbers::pi));
            }
        }
    };
    draw_party(out.party_a);
    draw_party(out.party_b);
    return out;
}

std::vector<Measurement> measurements_from_angles(const SamplerSpec& spec,
                                                  std::span<const double> party_angles) {
    const int per = spec.angles_per_measurement();
    if (party_angles.size() !=
        static_cast<std::size_t>(per) * static_cast<std::size_t>(spec.measurements_per_party))
        throw std::invalid_argument("measurements_from_angles: angle count mismatch");
    std::vector<Measurement> out;
    out.reserve(static_cast<std::size_t>(spec.measurements_per_party));
    for (int m = 0; m < spec.measurements_per_party; ++m) {
        std::span<const double> a = party_angles.subspan(static_cast<std::size_t>(m) * per,
                                                         static_cast<std::size_t>(per));
        if (spec.kind == SamplerKind::QubitBloch)
            out.push_back(qubit_projective(a[0], a[1]));
        else
            out.push_back(qutrit_measurement(a));
    }
    return out;
}

SampleRecord evaluate_sample(const PureState& state, const SamplerSpec& spec,
                             const std::vector<BellFunctional>& functionals,
                             const LocalPolytope& polytope, std::uint64_t master_seed,
                             std::uint64_t index, double tol) {
    std::mt19937_64 rng = derive_sample_rng(master_seed, index);
    SampleRecord rec;
    rec.index = index;
    rec.angles = sample_settings(spec, rng);

    std::vector<Measurement> ma = measurements_from_angles(spec, rec.angles.party_a);
    std::vector<Measurement> mb = measurements_from_angles(spec, rec.angles.party_b);
    Behavior beh = behavior_from(state, ma, mb);

    rec.nl = trace_distance_to_local(beh, polytope).nl;
    rec.nonlocal = rec.nl > tol;
    rec.bell_values.reserve(functionals.size());
    for (const BellFunctional& f : functionals) {
        double v = bell_value(f, beh);
        // Violation sufficiency, in its exact form: a value beyond the local
        // bound forces nl >= gap / (2 nx ny maxcoef). Tripping this means the
        // LP or the functional evaluation is broken.
        double gap = v - f.local_bound;
        if (gap > tol) {
            double floor = gap / (2.0 * beh.scenario.nx * beh.scenario.ny * max_abs_coeff(f));
            if (rec.nl < floor - 1e-7)
                throw ComputationError("bell violation inconsistent with trace distance");
        }
        rec.bell_values.push_back(v);
    }
    return rec;
}

VolumeAccumulator::VolumeAccumulator(const std::vector<BellFunctional>& functionals, double tol)
    : tol_(tol) {
    bounds_.reserve(functionals.size());
    for (const BellFunctional& f : functionals) bounds_.push_back(f.local_bound);
    counts_.assign(functionals.size(), 0);
    max_.assign(functionals.size(), -std::numeric_limits<double>::infinity());
}

void VolumeAccumulator::add(const SampleRecord& rec) {
    ++n_;
    double w = 0.0;
    if (rec.nonlocal) {
        ++nonlocal_;
        w = rec.nl;
    }
    sum_w_ += w;
    sum_w2_ += w * w;
    for (std::size_t k = 0; k < bounds_.size(); ++k) {
        double v = rec.bell_values[k];
        if (v > bounds_[k] + tol_) ++counts_[k];
        max_[k] = std::max(max_[k], v);
    }
}

VolumeEstimate VolumeAccumulator::finish(std::uint64_t seed) const {
    VolumeEstimate e;
    e.n_samples = n_;
    e.n_nonlocal = nonlocal_;
    e.n_violating = counts_;
    e.seed = seed;
    const double n = static_cast<double>(n_);
    e.v_hat = static_cast<double>(nonlocal_) / n;
    e.vq_hat = sum_w_ / n;
    e.stderr_v = std::sqrt(e.v_hat * (1.0 - e.v_hat) / n);
    if (n_ > 1) {
        double var = (sum_w2_ - sum_w_ * sum_w_ / n) / (n - 1.0);
        e.stderr_vq = std::sqrt(std::max(var, 0.0) / n);
    }
    e.vi_hat.reserve(counts_.size());
    e.max_bell.reserve(counts_.size());
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        e.vi_hat.push_back(static_cast<double>(counts_[k]) / n);
        e.max_bell.push_back(max_[k]);
    }
    return e;
}

namespace {
constexpr std::uint64_t kChunk = 256;
}  // namespace

void for_each_record(const PureState& state, const SamplerSpec& spec,
                     const std::vector<BellFunctional>& functionals, std::uint64_t n_samples,
                     std::uint64_t master_seed, double tol, int threads,
                     const std::function<void(const SampleRecord&)>& sink) {
    if (n_samples < 1) throw std::invalid_argument("for_each_record: need at least one sample");
    if (state.dim_a() != spec.local_dim() || state.dim_b() != spec.local_dim())
        throw std::invalid_argument("for_each_record: state dimension does not match sampler");

    const LocalPolytope polytope = enumerate_strategies(spec.scenario());
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();

    std::vector<SampleRecord> buf(static_cast<std::size_t>(std::min(kChunk, n_samples)));
    std::atomic<bool> failed{false};
    std::uint64_t failed_index = 0;
    std::string failed_what;

    for (std::uint64_t start = 0; start < n_samples; start += kChunk) {
        const std::uint64_t end = std::min(start + kChunk, n_samples);
        const std::int64_t len = static_cast<std::int64_t>(end - start);

#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (std::int64_t k = 0; k < len; ++k) {
            if (failed.load(std::memory_order_relaxed)) continue;
            std::uint64_t idx = start + static_cast<std::uint64_t>(k);
            try {
                buf[static_cast<std::size_t>(k)] =
                    evaluate_sample(state, spec, functionals, polytope, master_seed, idx, tol);
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    if (!failed.load() || idx < failed_index) {
                        failed_index = idx;
                        failed_what = e.what();
                        failed.store(true);
                    }
                }
            }
        }
        if (failed.load())
            throw ComputationError("sample " + std::to_string(failed_index) + ": " + failed_what);
        for (std::int64_t k = 0; k < len; ++k) sink(buf[static_cast<std::size_t>(k)]);
    }
}

VolumeEstimate estimate_volumes(const PureState& state, const SamplerSpec& spec,
                                const std::vector<BellFunctional>& functionals,
                                std::uint64_t n_samples, std::uint64_t master_seed, double tol,
                                int threads) {
    VolumeAccumulator acc(functionals, tol);
    for_each_record(state, spec, functionals, n_samples, master_seed, tol, threads,
                    [&](const SampleRecord& rec) { acc.add(rec); });
    return acc.finish(master_seed);
}

VolumeEstimate estimate_volumes_serial(const PureState& state, const SamplerSpec& spec,
                                       const std::vector<BellFunctional>& functionals,
                                       std::uint64_t n_samples, std::uint64_t master_seed,
                                       double tol) {
    if (n_samples < 1)
        throw std::invalid_argument("estimate_volumes_serial: need at least one sample");
    if (state.dim_a() != spec.local_dim() || state.dim_b() != spec.local_dim())
        throw std::invalid_argument("estimate_volumes_serial: state dimension mismatch");

    const LocalPolytope polytope = enumerate_strategies(spec.scenario());
    VolumeAccumulator acc(functionals, tol);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        try {
            acc.add(evaluate_sample(state, spec, functionals, polytope, master_seed, i, tol));
        } catch (const std::exception& e) {
            throw ComputationError("sample " + std::to_string(i) + ": " + e.what());
        }
    }
    return acc.finish(master_seed);
}

void write_record_line(std::ostream& out, const SampleRecord& rec) {
    char buf[40];
    out << rec.index;
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ' ' << buf;
    };
    for (double a : rec.angles.party_a) emit(a);
    for (double a : rec.angles.party_b) emit(a);
    emit(rec.nl);
    for (double v : rec.bell_values) emit(v);
    out << ' ' << (rec.nonlocal ? 1 : 0) << '\n';
}

}  // namespace nlvol
