#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace stable_embed {

enum class Exec { serial, parallel };

namespace kernels {

using cplx = std::complex<double>;

// Worker cap: the STABLE_EMBED_THREADS environment variable if set, else the
// OpenMP default. Read once on first use.
int max_threads();

// y = A x with A real, m x n, row-major. Each row is reduced serially in
// index order in both variants, so the parallel result is bit-identical to
// the serial one.
void dense_real_matvec_serial(std::span<const double> a, std::int64_t m, std::int64_t n,
                              std::span<const cplx> x, std::span<cplx> y);
void dense_real_matvec_parallel(std::span<const double> a, std::int64_t m, std::int64_t n,
                                std::span<const cplx> x, std::span<cplx> y);
void dense_real_matvec(std::span<const double> a, std::int64_t m, std::int64_t n,
                       std::span<const cplx> x, std::span<cplx> y);

// y = A^T x (A real, so the adjoint is the transpose). Computed row-wise
// over A^T, i.e. column-wise over A, keeping each output entry a serial sum.
void dense_real_matvec_adjoint_serial(std::span<const double> a, std::int64_t m, std::int64_t n,
                                      std::span<const cplx> x, std::span<cplx> y);
void dense_real_matvec_adjoint_parallel(std::span<const double> a, std::int64_t m,
                                        std::int64_t n, std::span<const cplx> x,
                                        std::span<cplx> y);
void dense_real_matvec_adjoint(std::span<const double> a, std::int64_t m, std::int64_t n,
                               std::span<const cplx> x, std::span<cplx> y);

// Block-diagonal y = diag(A_1..A_J) x with J dense real M x N blocks stored
// consecutively. Parallel variant distributes blocks across threads.
void block_diag_matvec_serial(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                              std::int64_t J, std::span<const cplx> x, std::span<cplx> y);
void block_diag_matvec_parallel(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                                std::int64_t J, std::span<const cplx> x, std::span<cplx> y);
void block_diag_matvec(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                       std::int64_t J, std::span<const cplx> x, std::span<cplx> y);

void block_diag_matvec_adjoint_serial(std::span<const double> blocks, std::int64_t M,
                                      std::int64_t N, std::int64_t J, std::span<const cplx> x,
                                      std::span<cplx> y);
void block_diag_matvec_adjoint_parallel(std::span<const double> blocks, std::int64_t M,
                                        std::int64_t N, std::int64_t J,
                                        std::span<const cplx> x, std::span<cplx> y);
void block_diag_matvec_adjoint(std::span<const double> blocks, std::int64_t M, std::int64_t N,
                               std::int64_t J, std::span<const cplx> x, std::span<cplx> y);

}  // namespace kernels
}  // namespace stable_embed
