// Benchmark: OpenMP-parallel kernels against the serial reference. The chunked
// reduction must agree bitwise between the two paths; timings show the speedup
// (or lack of one on a single-core host).
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "narlab/kernels.hpp"
#include "narlab/parallel.hpp"
#include "narlab/rng.hpp"

using namespace narlab;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Monte Carlo estimate of the kernel mass: the same per-index counter RNG
// streams the transform engine uses, so serial and parallel runs must agree
// bitwise, not just statistically.
MeanVar mc_kernel_mass(const HTypeGroup& g, const SpectralParam& p, std::int64_t samples,
                       bool parallel) {
    const double sigma = g.rho() + p.beta;
    ChunkEval eval = [&](std::int64_t i0, std::int64_t i1, double& sum, double& sumsq) {
        for (std::int64_t i = i0; i < i1; ++i) {
            CounterRng rng(17, 0xb3c40000u + static_cast<std::uint64_t>(i));
            NPoint n;
            n.X.resize(g.dim_v());
            n.Z.resize(g.k());
            double e2 = 0.0;
            for (auto& c : n.X) {
                c = rng.next_gaussian();
                e2 += c * c;
            }
            for (auto& c : n.Z) {
                c = rng.next_gaussian();
                e2 += c * c;
            }
            // importance sampling against a standard gaussian proposal
            const double dim = static_cast<double>(g.dim_v() + g.k());
            double log_proposal = -0.5 * e2 - 0.5 * dim * std::log(2.0 * 3.14159265358979324);
            double v = q_kernel(g, p, 1.0, n) * std::exp(-log_proposal);
            sum += v;
            sumsq += v * v;
        }
    };
    return chunked_mean(samples, 8192, eval, parallel);
}

void bench_reduction(const HTypeGroup& g, const SpectralParam& p, std::int64_t samples) {
    auto t0 = std::chrono::steady_clock::now();
    MeanVar serial = mc_kernel_mass(g, p, samples, false);
    double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    MeanVar parallel = mc_kernel_mass(g, p, samples, true);
    double t_parallel = seconds_since(t0);

    bool bitwise = serial.mean == parallel.mean && serial.var_of_mean == parallel.var_of_mean;
    std::printf("  chunked_mean, %lld samples\n", static_cast<long long>(samples));
    std::printf("    serial   : %8.3f s   mean = %.15e\n", t_serial, serial.mean);
    std::printf("    parallel : %8.3f s   mean = %.15e\n", t_parallel, parallel.mean);
    std::printf("    speedup  : %8.2fx   bitwise identical: %s\n",
                t_serial / std::max(t_parallel, 1e-9), bitwise ? "yes" : "NO");
    if (!bitwise) std::exit(1);
}

void bench_pointwise(const HTypeGroup& g, const SpectralParam& p, std::int64_t n) {
    std::vector<NPoint> pts(n);
    for (std::int64_t i = 0; i < n; ++i) {
        CounterRng rng(3, static_cast<std::uint64_t>(i));
        pts[i].X.resize(g.dim_v());
        pts[i].Z.resize(g.k());
        for (auto& c : pts[i].X) c = rng.next_gaussian();
        for (auto& c : pts[i].Z) c = rng.next_gaussian();
    }
    std::vector<double> out_serial(n), out_parallel(n);

    auto t0 = std::chrono::steady_clock::now();
    serial_for(n, [&](std::int64_t i) { out_serial[i] = q_kernel(g, p, 0.7, pts[i]); });
    double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    parallel_for(n, [&](std::int64_t i) { out_parallel[i] = q_kernel(g, p, 0.7, pts[i]); });
    double t_parallel = seconds_since(t0);

    bool bitwise = out_serial == out_parallel;
    std::printf("  parallel_for, %lld kernel evaluations\n", static_cast<long long>(n));
    std::printf("    serial   : %8.3f s\n", t_serial);
    std::printf("    parallel : %8.3f s\n", t_parallel);
    std::printf("    speedup  : %8.2fx   bitwise identical: %s\n",
                t_serial / std::max(t_parallel, 1e-9), bitwise ? "yes" : "NO");
    if (!bitwise) std::exit(1);
}

}  // namespace

int main() {
    std::printf("workers: %d\n", worker_count());
    for (const char* preset : {"heisenberg:1", "quaternionic:2"}) {
        HTypeGroup g = HTypeGroup::from_preset(preset);
        SpectralParam p{1.0, 1.0, 1.0};  // uncalibrated: benchmarking, not measuring
        std::printf("%s (dim_v = %d, k = %d)\n", preset, g.dim_v(), g.k());
        bench_reduction(g, p, 4'000'000);
        bench_pointwise(g, p, 8'000'000);
    }
    std::printf("all parallel results bitwise identical to the serial reference\n");
    return 0;
}
