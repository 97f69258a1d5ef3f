#include "stable_embed/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "stable_embed/errors.hpp"

namespace stable_embed::kernels {

int max_threads() {
    static const int cap = [] {
        if (const char* env = std::getenv("STABLE_EMBED_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return omp_get_max_threads();
    }();
    return cap;
}

namespace {

void check_shapes(std::size_t a, std::int64_t m, std::int64_t n, std::size_t x, std::size_t y) {
    if (m < 0 || n < 0 || a != static_cast<std::size_t>(m) * static_cast<std::size_t>(n) ||
        x != static_cast<std::size_t>(n) || y != static_cast<std::size_t>(m)) {
        throw DimensionError("matvec: buffer sizes do not match " + std::to_string(m) + "x" +
                             std::to_string(n));
    }
}

inline cplx row_dot(const double* row, const cplx* x, std::int64_t n) {
    double re = 0.0, im = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
        re += row[j] * x[j].real();
        im += row[j] * x[j].imag();
    }
    return {re, im};
}

// dot over a strided column of A; used for the transpose without forming it
inline cplx col_dot(const double* a, std::int64_t m, std::int64_t n, std::int64_t j,
                    const cplx* x) {
    double re = 0.0, im = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        const double v = a[i * n + j];
        re += v * x[i].real();
        im += v * x[i].imag();
    }
    return {re, im};
}

}  // namespace

void dense_real_matvec_serial(std::span<const double> a, std::int64_t m, std::int64_t n,
                              std::span<const cplx> x, std::span<cplx> y) {
    check_shapes(a.size(), m, n, x.size(), y.size());
    for (std::int64_t i = 0; i < m; ++i) {
        y[i] = row_dot(a.data() + i * n, x.data(), n);
    }
}

void dense_real_matvec_parallel(std::span<const double> a, std::int64_t m, std::int64_t n,
                                std::span<const cplx> x, std::span<cplx> y) {
    check_shapes(a.size(), m, n, x.size(), y.size());
    const double* ap = a.data();
    const cplx* xp = x.data();
    cplx* yp = y.data();
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t i = 0; i < m; ++i) {
        yp[i] = row_dot(ap + i * n, xp, n);
    }
}

void dense_real_matvec(std::span<const double> a, std::int64_t m, std::int64_t n,
                       std::span<const cplx> x, std::span<cplx> y) {
    if (omp_in_parallel() || m * n < (1 << 14)) {
        dense_real_matvec_serial(a, m, n, x, y);
    } else {
        dense_real_matvec_parallel(a, m, n, x, y);
    }
}

void dense_real_matvec_adjoint_serial(std::span<const double> a, std::int64_t m, std::int64_t n,
                                      std::span<const cplx> x, std::span<cplx> y) {
    check_shapes(a.size(), m, n, y.size(), x.size());
    for (std::int64_t j = 0; j < n; ++j) {
        y[j] = col_dot(a.data(), m, n, j, x.data());
    }
}

void dense_real_matvec_adjoint_parallel(std::span<const double> a, std::int64_t m,
                                        std::int64_t n, std::span<const cplx> x,
                                        std::span<cplx> y) {
    check_shapes(a.size(), m, n, y.size(), x.size());
    const double* ap = a.data();
    const cplx* xp = x.data();
    cplx* yp = y.data();
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t j = 0; j < n; ++j) {
        yp[j] = col_dot(ap, m, n, j, xp);
    }
}

void dense_real_matvec_adjoint(std::span<const double> a, std::int64_t m, std::int64_t n,
                               std::span<const cplx> x, std::span<cplx> y) {
    if (omp_in_parallel() || m * n < (1 << 14)) {
        dense_real_matvec_adjoint_serial(a, m, n, x, y);
    } else {
        dense_real_matvec_adjoint_parallel(a, m, n, x, y);
    }
}

namespace {

void check_block_shapes(std::size_t blocks, std::int64_t M, std::int64_t N, std::int64_t J,
                        std::size_t x, std::size_t y) {
    if (M < 1 || N < 1 || J < 1 ||
        blocks != static_cast<std::size_t>(M) * static_cast<std::size_t>(N) *
                      static_cast<std::size_t>(J) ||
        x != static_cast<std::size_t>(N) * static_cast<std::size_t>(J) ||
        y != static_cast<std::size_t>(M) * static_cast<std::size_t>(J)) {
        throw DimensionError("block matvec: buffer sizes do not match M=" + std::to_string(M) +
                             " N=" + std::to_string(N) + " J=" + std::to_string(J));
    }
}

}  // namespace

void block_diag_matvec_serial(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                              std::int64_t J, std::span<const cplx> x, std::span<cplx> y) {
    check_block_shapes(blocks.size(), M, N, J, x.size(), y.size());
    for (std::int64_t j = 0; j < J; ++j) {
        dense_real_matvec_serial(blocks.subspan(j * M * N, M * N), M, N,
                                 x.subspan(j * N, N), y.subspan(j * M, M));
    }
}

void block_diag_matvec_parallel(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                                std::int64_t J, std::span<const cplx> x, std::span<cplx> y) {
    check_block_shapes(blocks.size(), M, N, J, x.size(), y.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t j = 0; j < J; ++j) {
        dense_real_matvec_serial(blocks.subspan(j * M * N, M * N), M, N,
                                 x.subspan(j * N, N), y.subspan(j * M, M));
    }
}

void block_diag_matvec(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                       std::int64_t J, std::span<const cplx> x, std::span<cplx> y) {
    if (omp_in_parallel() || M * N * J < (1 << 14)) {
        block_diag_matvec_serial(blocks, M, N, J, x, y);
    } else {
        block_diag_matvec_parallel(blocks, M, N, J, x, y);
    }
}

void block_diag_matvec_adjoint_serial(std::span<const double> blocks, std::int64_t M,
                                      std::int64_t N, std::int64_t J, std::span<const cplx> x,
                                      std::span<cplx> y) {
    check_block_shapes(blocks.size(), M, N, J, y.size(), x.size());
    for (std::int64_t j = 0; j < J; ++j) {
        dense_real_matvec_adjoint_serial(blocks.subspan(j * M * N, M * N), M, N,
                                         x.subspan(j * M, M), y.subspan(j * N, N));
    }
}

void block_diag_matvec_adjoint_parallel(std::span<const double> blocks, std::int64_t M,
                                        std::int64_t N, std::int64_t J,
                                        std::span<const cplx> x, std::span<cplx> y) {
    check_block_shapes(blocks.size(), M, N, J, y.size(), x.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t j = 0; j < J; ++j) {
        dense_real_matvec_adjoint_serial(blocks.subspan(j * M * N, M * N), M, N,
                                         x.subspan(j * M, M), y.subspan(j * N, N));
    }
}

void block_diag_matvec_adjoint(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                               std::int64_t J, std::span<const cplx> x, std::span<cplx> y) {
    if (omp_in_parallel() || M * N * J < (1 << 14)) {
        block_diag_matvec_adjoint_serial(blocks, M, N, J, x, y);
    } else {
        block_diag_matvec_adjoint_parallel(blocks, M, N, J, x, y);
    }
}

}  // namespace stable_embed::kernels
