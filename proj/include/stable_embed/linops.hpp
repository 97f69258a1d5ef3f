#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "stable_embed/descriptor.hpp"
#include "stable_embed/kernels.hpp"

namespace stable_embed::linops {

using cplx = std::complex<double>;

// Matrix-free linear map C^n -> C^m. Implementations are immutable after
// construction and safe to apply concurrently from multiple threads.
class LinearMap {
public:
    virtual ~LinearMap() = default;

    std::int64_t rows() const { return descriptor_.m; }
    std::int64_t cols() const { return descriptor_.n; }
    const OperatorDescriptor& descriptor() const { return descriptor_; }

    void apply(std::span<const cplx> x, std::span<cplx> y) const;
    void adjoint(std::span<const cplx> x, std::span<cplx> y) const;

    std::vector<cplx> apply(std::span<const cplx> x) const;
    std::vector<cplx> adjoint(std::span<const cplx> x) const;

protected:
    explicit LinearMap(OperatorDescriptor d) : descriptor_(std::move(d)) {}

private:
    virtual void do_apply(std::span<const cplx> x, std::span<cplx> y) const = 0;
    virtual void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const = 0;

    OperatorDescriptor descriptor_;
};

using LinearOp = std::shared_ptr<const LinearMap>;

// Random sign diagonal D_xi with xi_i in {-1, +1} drawn from the seed.
LinearOp make_rademacher_diag(std::int64_t n, std::uint64_t seed);

// Unitary DFT F/sqrt(n); adjoint is the unitary inverse transform.
LinearOp make_unitary_dft(std::int64_t n);

// Dense i.i.d. subgaussian matrix scaled by 1/sqrt(m) so columns have unit
// expected norm.
LinearOp make_dense_subgaussian(std::int64_t m, std::int64_t n, Dist dist, std::uint64_t seed);

// m rows of the DFT, drawn without replacement, scaled by sqrt(n/m) on top
// of the unitary normalization so E||Phi x||^2 = ||x||^2.
LinearOp make_subsampled_dft(std::int64_t m, std::int64_t n, std::uint64_t seed);
// Same, with the row set fixed explicitly (strictly increasing, in [0, n)).
LinearOp make_subsampled_dft(std::int64_t m, std::int64_t n, std::uint64_t seed,
                             std::vector<std::int64_t> selection);

// m rows of a circulant matrix whose first row is an i.i.d. probe scaled by
// 1/sqrt(m). Row selection per the policy, recorded in the descriptor.
LinearOp make_partial_circulant(std::int64_t m, std::int64_t n, Dist dist, std::uint64_t seed,
                                SelectionPolicy policy = SelectionPolicy::first_m);
LinearOp make_partial_circulant(std::int64_t m, std::int64_t n, Dist dist, std::uint64_t seed,
                                std::vector<std::int64_t> selection);

// m rows of the unitary convolution F D_xi F^H (a random sign flip in the
// frequency domain), scaled by sqrt(n/m). At m = n this is unitary.
LinearOp make_random_convolution(std::int64_t m, std::int64_t n, std::uint64_t seed);
LinearOp make_random_convolution(std::int64_t m, std::int64_t n, std::uint64_t seed,
                                 std::vector<std::int64_t> selection);

// Block diagonal of J independent dense M x N subgaussian blocks, each
// scaled by 1/sqrt(M).
LinearOp make_dbd(std::int64_t M, std::int64_t N, std::int64_t J, Dist dist,
                  std::uint64_t seed);

// Deterministic binary matrix from polynomial graphs over F_p: p^2 rows,
// p^(r+1) columns, each column has exactly p entries equal to 1/sqrt(p).
LinearOp make_devore_binary(std::int64_t p, std::int64_t r);

// Product children[0] * children[1] * ... (rightmost factor applied first).
LinearOp compose(std::vector<LinearOp> children);

// Identity as a trivially composed operator, useful as a neutral factor.
LinearOp make_identity(std::int64_t n);

// Single reconstruction path: any descriptor round-trips to an operator that
// reproduces the original entries exactly.
LinearOp make_operator(const OperatorDescriptor& d);

struct DenseMatrix {
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::vector<cplx> a;  // row-major

    cplx& at(std::int64_t i, std::int64_t j) { return a[static_cast<std::size_t>(i * n + j)]; }
    const cplx& at(std::int64_t i, std::int64_t j) const {
        return a[static_cast<std::size_t>(i * n + j)];
    }
};

inline constexpr std::int64_t kMaterializeCap = std::int64_t{1} << 22;

// Column-by-column materialization; refuses matrices above the entry cap.
DenseMatrix materialize_dense(const LinearMap& op, std::int64_t cap = kMaterializeCap);

// Largest singular value via power iteration on A^* A.
double estimate_spectral_norm(const LinearMap& op, int iterations = 50, std::uint64_t seed = 0);

}  // namespace stable_embed::linops
