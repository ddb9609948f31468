#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlvol/montecarlo.hpp"

namespace nlvol {

enum class StateFamily { PsiAlpha, PsiGamma, GhzAlpha };

StateFamily family_by_name(const std::string& name);   // psi-alpha | psi-gamma | ghz-alpha
std::string family_name(StateFamily family);
PureState make_family_state(StateFamily family, double param);

/// Closed-interval grid start, start+step, ... up to stop (inclusive within
/// half a step of roundoff).
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    std::vector<double> points() const;
};

struct ScanConfig {
    StateFamily family = StateFamily::PsiAlpha;
    GridSpec grid;
    SamplerSpec sampler;
    std::vector<std::string> quantifiers = {"volume", "trace-weighted"};
    bool canonical_settings = false;  // qutrit cglmp3 sweep at the fixed optimal settings
    std::uint64_t samples_per_point = 1000;
    std::uint64_t seed = 0;
    double tol = kLocalityTol;
    int threads = 0;
    std::string records_path;  // optional per-sample dump
};

struct ScanRow {
    double param = 0.0;
    double entropy_bits = 0.0;
    double v_hat = 0.0;
    double stderr_v = 0.0;
    double vq_hat = 0.0;
    double stderr_vq = 0.0;
    std::vector<double> vi_hat;
    std::vector<double> max_bell;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Per-point seed: hash of (master seed, point index), so refining a grid
/// elsewhere does not perturb a point's samples.
std::uint64_t derive_point_seed(std::uint64_t master_seed, std::uint64_t point_index);

/// Validates the configuration (throws ConfigError before any computation),
/// then estimates every grid point. Rows are produced in grid order and each
/// row is checked for the vQ <= v ordering and the violation bound.
std::vector<ScanRow> run_scan(const ScanConfig& config);

/// Names of the violation functionals selected by config.quantifiers.
std::vector<std::string> scan_functional_names(const ScanConfig& config);

void write_scan_csv(std::ostream& out, const ScanConfig& config,
                    const std::vector<ScanRow>& rows);

struct NscanConfig {
    double alpha = 1.0 / 1.4142135623730951;  // psi-alpha parameter
    int n_min = 2;
    int n_max = 3;
    std::uint64_t samples_per_point = 1000;
    std::uint64_t seed = 0;
    double tol = kLocalityTol;
    int threads = 0;
};

struct NscanRow {
    int n = 0;
    double v_hat = 0.0;
    double stderr_v = 0.0;
    double vq_hat = 0.0;
    double stderr_vq = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Sweep over the number of qubit measurements per party.
std::vector<NscanRow> run_nscan(const NscanConfig& config);
void write_nscan_csv(std::ostream& out, const NscanConfig& config,
                     const std::vector<NscanRow>& rows);

}  // namespace nlvol
