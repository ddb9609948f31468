// Compares the serial reference estimator against the OpenMP one on the same
// workload and verifies they agree bit for bit.

#include <omp.h>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "nlvol/montecarlo.hpp"

using namespace nlvol;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool identical(const VolumeEstimate& a, const VolumeEstimate& b) {
    return a.n_nonlocal == b.n_nonlocal && a.v_hat == b.v_hat && a.vq_hat == b.vq_hat &&
           a.stderr_v == b.stderr_v && a.stderr_vq == b.stderr_vq && a.vi_hat == b.vi_hat &&
           a.max_bell == b.max_bell;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
    bool qutrit = argc > 2 && std::string(argv[2]) == "qutrit";

    PureState state = qutrit ? psi_gamma(1.0) : psi_alpha(1.0 / 1.4142135623730951);
    SamplerSpec spec{qutrit ? SamplerKind::QutritReck : SamplerKind::QubitBloch, 2};
    std::vector<BellFunctional> functionals;
    functionals.push_back(qutrit ? cglmp3_functional() : chsh_functional());
    const std::uint64_t seed = 20240917;

    std::cout << "samples " << n << "  kind " << (qutrit ? "qutrit" : "qubit") << "  threads "
              << omp_get_max_threads() << "\n";

    auto t0 = std::chrono::steady_clock::now();
    VolumeEstimate serial = estimate_volumes_serial(state, spec, functionals, n, seed);
    double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    VolumeEstimate parallel = estimate_volumes(state, spec, functionals, n, seed);
    double t_parallel = seconds_since(t0);

    std::cout << "serial   " << t_serial << " s  (" << n / t_serial << " samples/s)\n";
    std::cout << "parallel " << t_parallel << " s  (" << n / t_parallel << " samples/s)\n";
    std::cout << "speedup  " << t_serial / t_parallel << "x\n";
    std::cout << "vHat " << serial.v_hat << "  vQHat " << serial.vq_hat << "\n";

    if (!identical(serial, parallel)) {
        std::cout << "MISMATCH between serial and parallel estimates\n";
        return 1;
    }
    std::cout << "serial and parallel estimates identical\n";
    return 0;
}
