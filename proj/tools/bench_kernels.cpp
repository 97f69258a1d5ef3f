// Coarse wall-clock comparison of the serial reference kernels against the
// OpenMP variants, plus the chord-distortion scan that sits on top of them.
// Build-only sanity target; numbers are indicative, not a benchmark suite.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <vector>

#include "stable_embed/harness.hpp"
#include "stable_embed/kernels.hpp"
#include "stable_embed/linops.hpp"
#include "stable_embed/manifolds.hpp"
#include "stable_embed/rng.hpp"

namespace se = stable_embed;
using se::kernels::cplx;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", se::kernels::max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const std::int64_t m = 2000, n = 2000;
        se::rng::Stream entries(1, se::rng::streams::entries);
        std::vector<double> a(static_cast<std::size_t>(m * n));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = entries.gaussian(i);
        std::vector<cplx> x(n), y(m);
        for (std::int64_t i = 0; i < n; ++i) x[i] = {entries.uniform01(9000 + i), 0.0};

        const double ts = time_ms([&] {
            se::kernels::dense_real_matvec_serial(a, m, n, x, y);
        }, 20);
        const double tp = time_ms([&] {
            se::kernels::dense_real_matvec_parallel(a, m, n, x, y);
        }, 20);
        report("dense matvec 2000x2000", ts, tp);
    }

    {
        const std::int64_t M = 64, N = 64, J = 256;
        se::rng::Stream entries(2, se::rng::streams::entries);
        std::vector<double> blocks(static_cast<std::size_t>(M * N * J));
        for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = entries.gaussian(i);
        std::vector<cplx> x(N * J), y(M * J);
        for (std::int64_t i = 0; i < N * J; ++i) x[i] = {entries.uniform01(i), 0.0};

        const double ts = time_ms([&] {
            se::kernels::block_diag_matvec_serial(blocks, M, N, J, x, y);
        }, 20);
        const double tp = time_ms([&] {
            se::kernels::block_diag_matvec_parallel(blocks, M, N, J, x, y);
        }, 20);
        report("block-diag 256 x (64x64)", ts, tp);
    }

    {
        const auto model = se::manifolds::sinusoid_model(64);
        const auto chords = se::manifolds::sample_chords(model, 4000, 7);
        const auto op = se::harness::build_family_operator(
            se::harness::EmbedFamily::dense_gaussian, 32, 64, 11);

        const double ts = time_ms([&] {
            se::harness::measure_embedding(*op, chords, se::Exec::serial);
        }, 5);
        const double tp = time_ms([&] {
            se::harness::measure_embedding(*op, chords, se::Exec::parallel);
        }, 5);
        report("distortion scan 4000 chords", ts, tp);
    }

    return 0;
}
