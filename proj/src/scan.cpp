#include "nlvol/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "nlvol/errors.hpp"
#include "nlvol/version.hpp"

namespace nlvol {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

StateFamily family_by_name(const std::string& name) {
    if (name == "psi-alpha") return StateFamily::PsiAlpha;
    if (name == "psi-gamma") return StateFamily::PsiGamma;
    if (name == "ghz-alpha") return StateFamily::GhzAlpha;
    throw ConfigError("unknown state family: " + name);
}

std::string family_name(StateFamily family) {
    switch (family) {
        case StateFamily::PsiAlpha: return "psi-alpha";
        case StateFamily::PsiGamma: return "psi-gamma";
        case StateFamily::GhzAlpha: return "ghz-alpha";
    }
    return "?";
}

PureState make_family_state(StateFamily family, double param) {
    switch (family) {
        case StateFamily::PsiAlpha: return psi_alpha(param);
        case StateFamily::PsiGamma: return psi_gamma(param);
        case StateFamily::GhzAlpha: return ghz_alpha(param);
    }
    throw ConfigError("invalid state family");
}

std::vector<double> GridSpec::points() const {
    std::vector<double> pts;
    if (!(step > 0.0)) return pts;
    // Relative slack so an exact multiple of step lands on the last point.
    const double span = (stop - start) / step;
    const long count = static_cast<long>(std::floor(span * (1.0 + 1e-12) + 1e-9));
    for (long i = 0; i <= count; ++i) {
        double p = start + static_cast<double>(i) * step;
        if (p > stop + 0.5 * step) break;
        pts.push_back(p);
    }
    return pts;
}

std::uint64_t derive_point_seed(std::uint64_t master_seed, std::uint64_t point_index) {
    std::uint64_t state = master_seed ^ (point_index + 1) * 0xD1342543DE82EF95ull;
    return splitmix64(state);
}

std::vector<std::string> scan_functional_names(const ScanConfig& config) {
    std::vector<std::string> names;
    for (const std::string& q : config.quantifiers) {
        if (q == "volume" || q == "trace-weighted") continue;
        if (q.rfind("violation:", 0) == 0) {
            names.push_back(q.substr(10));
            continue;
        }
        throw ConfigError("unknown quantifier: " + q);
    }
    return names;
}

namespace {

void validate_scan(const ScanConfig& config, const std::vector<double>& grid,
                   const std::vector<std::string>& functional_names) {
    if (grid.empty()) throw ConfigError("scan: empty parameter grid");
    if (!(config.grid.step > 0.0)) throw ConfigError("scan: grid step must be > 0");
    if (config.samples_per_point < 1) throw ConfigError("scan: samples must be >= 1");
    if (config.sampler.measurements_per_party < 1)
        throw ConfigError("scan: need at least one measurement per party");

    const bool qubit_family = config.family == StateFamily::PsiAlpha;
    const bool qubit_sampler = config.sampler.kind == SamplerKind::QubitBloch;
    if (qubit_family != qubit_sampler)
        throw ConfigError("scan: family " + family_name(config.family) +
                          " does not match the sampler's local dimension");

    for (double p : grid) {
        try {
            make_family_state(config.family, p);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("scan: grid point out of range: ") + e.what());
        }
    }
    for (const std::string& name : functional_names) {
        BellFunctional f = functional_by_name(name);
        if (!(f.scenario == config.sampler.scenario()))
            throw ConfigError("scan: functional " + name + " does not fit the sampled scenario");
    }
    if (config.canonical_settings) {
        if (config.family != StateFamily::PsiGamma && config.family != StateFamily::GhzAlpha)
            throw ConfigError("scan: canonical settings require a qutrit family");
        if (config.sampler.kind != SamplerKind::QutritReck ||
            config.sampler.measurements_per_party != 2)
            throw ConfigError("scan: canonical settings require scenario qutrit:2");
    }
    // Strategy-count guard surfaces before any sampling.
    if (config.sampler.scenario().strategy_count() > kMaxStrategies)
        throw ConfigError("scan: scenario exceeds the strategy capacity guard");
}

ScanRow row_from_estimate(double param, double entropy, const VolumeEstimate& e) {
    ScanRow row;
    row.param = param;
    row.entropy_bits = entropy;
    row.v_hat = e.v_hat;
    row.stderr_v = e.stderr_v;
    row.vq_hat = e.vq_hat;
    row.stderr_vq = e.stderr_vq;
    row.vi_hat = e.vi_hat;
    row.max_bell = e.max_bell;
    row.n_samples = e.n_samples;
    row.seed = e.seed;
    return row;
}

// Deterministic evaluation at the fixed canonical CGLMP settings: one
// behavior per grid point instead of sampled ones.
ScanRow canonical_point(const ScanConfig& config, const std::vector<BellFunctional>& functionals,
                        const LocalPolytope& polytope, double param, std::uint64_t seed) {
    PureState state = make_family_state(config.family, param);
    CglmpSettings settings = cglmp_optimal_settings();
    Behavior beh = behavior_from(state, settings.alice, settings.bob);
    double nl = trace_distance_to_local(beh, polytope).nl;
    bool nonlocal = nl > config.tol;

    ScanRow row;
    row.param = param;
    row.entropy_bits = entanglement_entropy(state);
    row.v_hat = nonlocal ? 1.0 : 0.0;
    row.vq_hat = nonlocal ? nl : 0.0;
    for (const BellFunctional& f : functionals) {
        double v = bell_value(f, beh);
        row.vi_hat.push_back(v > f.local_bound + config.tol ? 1.0 : 0.0);
        row.max_bell.push_back(v);
    }
    row.n_samples = 1;
    row.seed = seed;
    return row;
}

void check_row(const ScanRow& row) {
    if (row.vq_hat > row.v_hat)
        throw ComputationError("scan: ordering vQ <= v violated at param " + fmt(row.param));
    for (std::size_t k = 0; k < row.vi_hat.size(); ++k) {
        double se_i = std::sqrt(row.vi_hat[k] * (1.0 - row.vi_hat[k]) /
                                static_cast<double>(row.n_samples));
        double slack = 3.0 * std::sqrt(se_i * se_i + row.stderr_v * row.stderr_v);
        if (row.vi_hat[k] > row.v_hat + slack)
            throw ComputationError("scan: violation volume exceeds nonlocal volume at param " +
                                   fmt(row.param));
    }
}

}  // namespace

std::vector<ScanRow> run_scan(const ScanConfig& config) {
    const std::vector<double> grid = config.grid.points();
    const std::vector<std::string> names = scan_functional_names(config);
    validate_scan(config, grid, names);

    std::vector<BellFunctional> functionals;
    for (const std::string& name : names) functionals.push_back(functional_by_name(name));

    std::ofstream records;
    if (!config.records_path.empty()) {
        records.open(config.records_path);
        if (!records) throw ConfigError("scan: cannot open records file " + config.records_path);
    }

    std::vector<ScanRow> rows;
    rows.reserve(grid.size());

    const LocalPolytope polytope =
        config.canonical_settings ? enumerate_strategies(config.sampler.scenario())
                                  : LocalPolytope{};

    for (std::size_t pt = 0; pt < grid.size(); ++pt) {
        const double param = grid[pt];
        const std::uint64_t point_seed = derive_point_seed(config.seed, pt);

        ScanRow row;
        if (config.canonical_settings) {
            row = canonical_point(config, functionals, polytope, param, point_seed);
        } else {
            PureState state = make_family_state(config.family, param);
            VolumeEstimate est;
            if (records.is_open()) {
                records << "# point " << pt << " param=" << fmt(param) << '\n';
                VolumeAccumulator acc(functionals, config.tol);
                for_each_record(state, config.sampler, functionals, config.samples_per_point,
                                point_seed, config.tol, config.threads,
                                [&](const SampleRecord& rec) {
                                    write_record_line(records, rec);
                                    acc.add(rec);
                                });
                est = acc.finish(point_seed);
            } else {
                est = estimate_volumes(state, config.sampler, functionals,
                                       config.samples_per_point, point_seed, config.tol,
                                       config.threads);
            }
            row = row_from_estimate(param, entanglement_entropy(state), est);
        }
        check_row(row);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

void write_header_comments(std::ostream& out, const std::string& command,
                           const std::string& config_echo, std::uint64_t seed) {
    out << "# nlvol " << kVersion << ' ' << command << '\n';
    out << "# " << config_echo << '\n';
    out << "# seed=" << seed << '\n';
}

std::size_t argmax_index(const std::vector<ScanRow>& rows,
                         const std::function<double(const ScanRow&)>& key) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (key(rows[i]) > key(rows[best])) best = i;
    return best;
}

}  // namespace

void write_scan_csv(std::ostream& out, const ScanConfig& config,
                    const std::vector<ScanRow>& rows) {
    const std::vector<std::string> names = scan_functional_names(config);

    std::ostringstream echo;
    echo << "family=" << family_name(config.family) << " grid=" << fmt(config.grid.start) << ':'
         << fmt(config.grid.stop) << ':' << fmt(config.grid.step) << " scenario="
         << (config.sampler.kind == SamplerKind::QubitBloch ? "qubit" : "qutrit") << ':'
         << config.sampler.measurements_per_party << " samples=" << config.samples_per_point
         << " tol=" << fmt(config.tol);
    if (config.canonical_settings) echo << " canonical-settings";
    write_header_comments(out, "scan", echo.str(), config.seed);

    out << "param,entropyBits,vHat,stdErrV,vQHat,stdErrVQ";
    for (const std::string& n : names) out << ",vIHat_" << n << ",maxBell_" << n;
    out << ",nSamples,seed\n";

    for (const ScanRow& r : rows) {
        out << fmt(r.param) << ',' << fmt(r.entropy_bits) << ',' << fmt(r.v_hat) << ','
            << fmt(r.stderr_v) << ',' << fmt(r.vq_hat) << ',' << fmt(r.stderr_vq);
        for (std::size_t k = 0; k < names.size(); ++k)
            out << ',' << fmt(r.vi_hat[k]) << ',' << fmt(r.max_bell[k]);
        out << ',' << r.n_samples << ',' << r.seed << '\n';
    }

    if (!rows.empty()) {
        out << "# argmax";
        out << " vHat=" << fmt(rows[argmax_index(rows, [](const ScanRow& r) { return r.v_hat; })].param);
        out << " vQHat=" << fmt(rows[argmax_index(rows, [](const ScanRow& r) { return r.vq_hat; })].param);
        for (std::size_t k = 0; k < names.size(); ++k) {
            out << " vIHat_" << names[k] << '='
                << fmt(rows[argmax_index(rows, [k](const ScanRow& r) { return r.vi_hat[k]; })].param);
            out << " maxBell_" << names[k] << '='
                << fmt(rows[argmax_index(rows, [k](const ScanRow& r) { return r.max_bell[k]; })].param);
        }
        out << '\n';
    }
}

std::vector<NscanRow> run_nscan(const NscanConfig& config) {
    if (config.n_min < 1 || config.n_max < config.n_min)
        throw ConfigError("nscan: need 1 <= nmin <= nmax");
    if (config.samples_per_point < 1) throw ConfigError("nscan: samples must be >= 1");
    PureState state = [&] {
        try {
            return psi_alpha(config.alpha);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("nscan: ") + e.what());
        }
    }();

    // Capacity guard across the whole range, before any sampling.
    for (int n = config.n_min; n <= config.n_max; ++n) {
        SamplerSpec spec{SamplerKind::QubitBloch, n};
        if (spec.scenario().strategy_count() > kMaxStrategies)
            throw ConfigError("nscan: n=" + std::to_string(n) +
                              " exceeds the strategy capacity guard");
    }

    std::vector<NscanRow> rows;
    for (int n = config.n_min; n <= config.n_max; ++n) {
        SamplerSpec spec{SamplerKind::QubitBloch, n};
        const std::uint64_t point_seed =
            derive_point_seed(config.seed, static_cast<std::uint64_t>(n - config.n_min));
        VolumeEstimate est = estimate_volumes(state, spec, {}, config.samples_per_point,
                                              point_seed, config.tol, config.threads);
        NscanRow row;
        row.n = n;
        row.v_hat = est.v_hat;
        row.stderr_v = est.stderr_v;
        row.vq_hat = est.vq_hat;
        row.stderr_vq = est.stderr_vq;
        row.n_samples = est.n_samples;
        row.seed = est.seed;
        if (row.vq_hat > row.v_hat)
            throw ComputationError("nscan: ordering vQ <= v violated at n=" + std::to_string(n));
        rows.push_back(row);
    }
    return rows;
}

void write_nscan_csv(std::ostream& out, const NscanConfig& config,
                     const std::vector<NscanRow>& rows) {
    std::ostringstream echo;
    echo << "alpha=" << fmt(config.alpha) << " nrange=" << config.n_min << ':' << config.n_max
         << " samples=" << config.samples_per_point << " tol=" << fmt(config.tol);
    write_header_comments(out, "nscan", echo.str(), config.seed);
    out << "n,vHat,stdErrV,vQHat,stdErrVQ,nSamples,seed\n";
    for (const NscanRow& r : rows) {
        out << r.n << ',' << fmt(r.v_hat) << ',' << fmt(r.stderr_v) << ',' << fmt(r.vq_hat)
            << ',' << fmt(r.stderr_vq) << ',' << r.n_samples << ',' << r.seed << '\n';
    }
}

}  // namespace nlvol
