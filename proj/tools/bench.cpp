// Event throughput of the lattice engines.
#include <chrono>
#include <cstdio>

#include "fzr/dynamics.hpp"
#include "fzr/measures.hpp"

int main(int argc, char** argv) {
    const long n = argc > 1 ? std::atol(argv[1]) : 4096;
    const double t = argc > 2 ? std::atof(argv[2]) : 0.002;
    auto eta = fzr::sample_bernoulli_profile(fzr::Profile::step(0.8, 0.3), n, 1);
    auto params = fzr::SimParams::symmetric(t, {t}, argc > 3 ? std::atol(argv[3]) : 1);
    params.record_states = false;
    const auto t0 = std::chrono::steady_clock::now();
    const auto obs = fzr::run_fep(eta, params);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("fep n=%ld t=%g events=%llu seconds=%.3f ns/event=%.1f\n", n, t,
                (unsigned long long)obs.total_events, s, 1e9 * s / double(obs.total_events));
    auto omega = fzr::sample_geometric_profile(fzr::Profile::step(4.0, 3.0 / 7.0, 2.0 / 9.0), n * 45 / 100, 1);
    auto zp = params;
    zp.scale = double(n);
    const auto t1 = std::chrono::steady_clock::now();
    const auto zo = fzr::run_fzrp(omega, zp);
    const double s1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    std::printf("fzrp m=%ld events=%llu seconds=%.3f ns/event=%.1f\n", n * 45 / 100,
                (unsigned long long)zo.total_events, s1, 1e9 * s1 / double(zo.total_events));
}
