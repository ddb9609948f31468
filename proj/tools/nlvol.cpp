#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nlvol/errors.hpp"
#include "nlvol/scan.hpp"
#include "nlvol/version.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 computation error, 4 parse error.
constexpr int kExitConfig = 2;
constexpr int kExitComputation = 3;
constexpr int kExitParse = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlvol::GridSpec parse_grid(const std::string& text) {
    nlvol::GridSpec g;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> g.start >> c1 >> g.stop >> c2 >> g.step) || c1 != ':' || c2 != ':')
        throw nlvol::ConfigError("--grid expects start:stop:step");
    return g;
}

nlvol::SamplerSpec parse_scenario(const std::string& text) {
    auto pos = text.find(':');
    if (pos == std::string::npos) throw nlvol::ConfigError("--scenario expects qubit:<n> or qutrit:<n>");
    std::string kind = text.substr(0, pos);
    int n = 0;
    try {
        n = std::stoi(text.substr(pos + 1));
    } catch (const std::exception&) {
        throw nlvol::ConfigError("--scenario: bad measurement count");
    }
    nlvol::SamplerSpec spec;
    spec.measurements_per_party = n;
    if (kind == "qubit")
        spec.kind = nlvol::SamplerKind::QubitBloch;
    else if (kind == "qutrit")
        spec.kind = nlvol::SamplerKind::QutritReck;
    else
        throw nlvol::ConfigError("--scenario: unknown kind " + kind);
    return spec;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

nlvol::Behavior load_behavior(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nlvol::ConfigError("cannot open " + path);
    return nlvol::read_behavior(in);
}

// The output file is opened before any sampling so that an unwritable path
// fails as a configuration error, not after minutes of computation.
std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw nlvol::ConfigError("cannot open output file " + path);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Bell nonlocality volumes via local-polytope membership"};
    app.set_version_flag("--version", nlvol::kVersion);
    app.require_subcommand(1);

    // scan
    auto* scan = app.add_subcommand("scan", "Monte Carlo scan over a state family");
    std::string family_name = "psi-alpha";
    std::string grid_text = "0:1:0.1";
    std::string scenario_text = "qubit:2";
    std::string quantifiers_text = "volume,trace-weighted";
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
    double tol = nlvol::kLocalityTol;
    int threads = 0;
    std::string out_path;
    std::string records_path;
    bool canonical = false;
    scan->add_option("--family", family_name, "psi-alpha | psi-gamma | ghz-alpha");
    scan->add_option("--grid", grid_text, "start:stop:step over the state parameter");
    scan->add_option("--scenario", scenario_text, "qubit:<n> | qutrit:<n>");
    scan->add_option("--quantifiers", quantifiers_text,
                     "comma list: volume, trace-weighted, violation:<functional>");
    scan->add_option("--samples", samples, "settings sampled per grid point");
    scan->add_option("--seed", seed, "master seed");
    scan->add_option("--tol", tol, "locality tolerance");
    scan->add_option("--threads", threads, "worker threads (0 = all)");
    scan->add_option("--out", out_path, "output CSV path")->required();
    scan->add_option("--records", records_path, "optional per-sample record dump");
    scan->add_flag("--canonical-settings", canonical,
                   "evaluate the fixed canonical qutrit settings instead of sampling");

    // nscan
    auto* nscan = app.add_subcommand("nscan", "sweep the number of qubit measurements");
    double alpha = 1.0 / 1.4142135623730951;
    std::string nrange_text = "2:3";
    std::uint64_t n_samples = 1000;
    std::uint64_t n_seed = 0;
    double n_tol = nlvol::kLocalityTol;
    int n_threads = 0;
    std::string n_out;
    nscan->add_option("--alpha", alpha, "psi-alpha state parameter");
    nscan->add_option("--nrange", nrange_text, "min:max measurements per party");
    nscan->add_option("--samples", n_samples, "settings sampled per point");
    nscan->add_option("--seed", n_seed, "master seed");
    nscan->add_option("--tol", n_tol, "locality tolerance");
    nscan->add_option("--threads", n_threads, "worker threads (0 = all)");
    nscan->add_option("--out", n_out, "output CSV path")->required();

    // distance
    auto* distance = app.add_subcommand("distance", "trace distance of a behavior to the local set");
    std::string dist_file;
    double dist_tol = nlvol::kLocalityTol;
    distance->add_option("file", dist_file, "behavior table file")->required();
    distance->add_option("--tol", dist_tol, "locality tolerance");

    // bellval
    auto* bellval = app.add_subcommand("bellval", "evaluate a Bell functional on a behavior");
    std::string bv_file;
    std::string bv_functional;
    bellval->add_option("file", bv_file, "behavior table file")->required();
    bellval->add_option("--functional", bv_functional, "chsh | i3322 | cglmp3")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (scan->parsed()) {
        nlvol::ScanConfig config;
        config.family = nlvol::family_by_name(family_name);
        config.grid = parse_grid(grid_text);
        config.sampler = parse_scenario(scenario_text);
        config.quantifiers = split_list(quantifiers_text);
        config.canonical_settings = canonical;
        config.samples_per_point = samples;
        config.seed = seed;
        config.tol = tol;
        config.threads = threads;
        config.records_path = records_path;

        std::ofstream out = open_output(out_path);
        std::vector<nlvol::ScanRow> rows = nlvol::run_scan(config);
        nlvol::write_scan_csv(out, config, rows);
        if (!out) throw nlvol::ComputationError("failed writing " + out_path);
        return 0;
    }

    if (nscan->parsed()) {
        nlvol::NscanConfig config;
        config.alpha = alpha;
        auto pos = nrange_text.find(':');
        if (pos == std::string::npos) throw nlvol::ConfigError("--nrange expects min:max");
        try {
            config.n_min = std::stoi(nrange_text.substr(0, pos));
            config.n_max = std::stoi(nrange_text.substr(pos + 1));
        } catch (const std::exception&) {
            throw nlvol::ConfigError("--nrange: bad bounds");
        }
        config.samples_per_point = n_samples;
        config.seed = n_seed;
        config.tol = n_tol;
        config.threads = n_threads;

        std::ofstream out = open_output(n_out);
        std::vector<nlvol::NscanRow> rows = nlvol::run_nscan(config);
        nlvol::write_nscan_csv(out, config, rows);
        if (!out) throw nlvol::ComputationError("failed writing " + n_out);
        return 0;
    }

    if (distance->parsed()) {
        nlvol::Behavior b = load_behavior(dist_file);
        nlvol::LocalPolytope poly = nlvol::enumerate_strategies(b.scenario);
        nlvol::TraceDistanceResult res = nlvol::trace_distance_to_local(b, poly);
        std::cout << "nl " << fmt(res.nl) << '\n';
        std::cout << "verdict " << (res.nl <= dist_tol ? "local" : "nonlocal") << " (tol "
                  << fmt(dist_tol) << ")\n";
        std::cout << "weights";
        for (std::size_t i = 0; i < res.weights.size(); ++i)
            if (res.weights[i] > 1e-12) std::cout << ' ' << i << ':' << fmt(res.weights[i]);
        std::cout << '\n';
        return 0;
    }

    if (bellval->parsed()) {
        nlvol::Behavior b = load_behavior(bv_file);
        nlvol::BellFunctional f = nlvol::functional_by_name(bv_functional);
        double v = nlvol::bell_value(f, b);
        std::cout << "functional " << f.name << '\n';
        std::cout << "value " << fmt(v) << '\n';
        std::cout << "localBound " << fmt(f.local_bound) << '\n';
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nlvol::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const nlvol::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlvol::ComputationError& e) {
        std::cerr << "computation error: " << e.what() << '\n';
        return kExitComputation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    }
}
