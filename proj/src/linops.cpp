#include "stable_embed/linops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "stable_embed/errors.hpp"
#include "stable_embed/fft.hpp"
#include "stable_embed/rng.hpp"

namespace stable_embed::linops {

namespace {

std::vector<std::int64_t> draw_selection(std::int64_t m, std::int64_t n, std::uint64_t seed) {
    return rng::sample_without_replacement(m, n, rng::Stream(seed, rng::streams::selection));
}

double draw_entry(const rng::Stream& s, Dist dist, std::uint64_t i) {
    return dist == Dist::gaussian ? s.gaussian(i) : s.sign(i);
}

// ---- concrete operators ------------------------------------------------

class RademacherDiag final : public LinearMap {
public:
    explicit RademacherDiag(OperatorDescriptor d) : LinearMap(std::move(d)) {
        const rng::Stream s(descriptor().seed, rng::streams::signs);
        signs_.resize(static_cast<std::size_t>(cols()));
        for (std::int64_t i = 0; i < cols(); ++i) {
            signs_[static_cast<std::size_t>(i)] = s.sign(static_cast<std::uint64_t>(i));
        }
    }

private:
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        for (std::int64_t i = 0; i < cols(); ++i) {
            y[i] = signs_[static_cast<std::size_t>(i)] * x[i];
        }
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        do_apply(x, y);  // real diagonal, self-adjoint
    }

    std::vector<double> signs_;
};

class UnitaryDft final : public LinearMap {
public:
    explicit UnitaryDft(OperatorDescriptor d)
        : LinearMap(std::move(d)), fft_(fft_plan(cols())) {}

private:
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        fft_->forward_unitary(x, y);
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        fft_->backward_unitary(x, y);
    }

    std::shared_ptr<const Fft> fft_;
};

class DenseSubgaussian final : public LinearMap {
public:
    explicit DenseSubgaussian(OperatorDescriptor d) : LinearMap(std::move(d)) {
        const rng::Stream s(descriptor().seed, rng::streams::entries);
        const Dist dist = *descriptor().dist;
        const double scale = 1.0 / std::sqrt(static_cast<double>(rows()));
        entries_.resize(static_cast<std::size_t>(rows() * cols()));
        for (std::int64_t i = 0; i < rows() * cols(); ++i) {
            entries_[static_cast<std::size_t>(i)] =
                scale * draw_entry(s, dist, static_cast<std::uint64_t>(i));
        }
    }

private:
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        kernels::dense_real_matvec(entries_, rows(), cols(), x, y);
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        kernels::dense_real_matvec_adjoint(entries_, rows(), cols(), x, y);
    }

    std::vector<double> entries_;
};

class SubsampledDft final : public LinearMap {
public:
    explicit SubsampledDft(OperatorDescriptor d)
        : LinearMap(std::move(d)),
          fft_(fft_plan(cols())),
          scale_(1.0 / std::sqrt(static_cast<double>(rows()))) {}

private:
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        std::vector<cplx> full(static_cast<std::size_t>(cols()));
        fft_->forward(x, full);
        const auto& sel = *descriptor().selection;
        for (std::int64_t k = 0; k < rows(); ++k) {
            y[k] = scale_ * full[static_cast<std::size_t>(sel[static_cast<std::size_t>(k)])];
        }
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        std::vector<cplx> full(static_cast<std::size_t>(cols()), cplx{0.0, 0.0});
        const auto& sel = *descriptor().selection;
        for (std::int64_t k = 0; k < rows(); ++k) {
            full[static_cast<std::size_t>(sel[static_cast<std::size_t>(k)])] = scale_ * x[k];
        }
        fft_->backward(full, y);
    }

    std::shared_ptr<const Fft> fft_;
    double scale_;
};

class PartialCirculant final : public LinearMap {
public:
    explicit PartialCirculant(OperatorDescriptor d)
        : LinearMap(std::move(d)), fft_(fft_plan(cols())) {
        const std::int64_t n = cols();
        const rng::Stream s(descriptor().seed, rng::streams::entries);
        const Dist dist = *descriptor().dist;
        const double scale = 1.0 / std::sqrt(static_cast<double>(rows()));
        std::vector<cplx> probe(static_cast<std::size_t>(n));
        for (std::int64_t j = 0; j < n; ++j) {
            probe[static_cast<std::size_t>(j)] =
                scale * draw_entry(s, dist, static_cast<std::uint64_t>(j));
        }
        probe_hat_.resize(static_cast<std::size_t>(n));
        fft_->forward(probe, probe_hat_);
    }

private:
    // row i is the probe shifted left by i, so applying the operator is a
    // circular cross-correlation with the probe
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        const std::int64_t n = cols();
        std::vector<cplx> hat(static_cast<std::size_t>(n));
        fft_->forward(x, hat);
        for (std::int64_t k = 0; k < n; ++k) {
            hat[static_cast<std::size_t>(k)] *= std::conj(probe_hat_[static_cast<std::size_t>(k)]);
        }
        std::vector<cplx> full(static_cast<std::size_t>(n));
        fft_->backward(hat, full);
        const double inv_n = 1.0 / static_cast<double>(n);
        const auto& sel = *descriptor().selection;
        for (std::int64_t i = 0; i < rows(); ++i) {
            y[i] = inv_n * full[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])];
        }
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        const std::int64_t n = cols();
        std::vector<cplx> full(static_cast<std::size_t>(n), cplx{0.0, 0.0});
        const auto& sel = *descriptor().selection;
        for (std::int64_t i = 0; i < rows(); ++i) {
            full[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])] = x[i];
        }
        std::vector<cplx> hat(static_cast<std::size_t>(n));
        fft_->forward(full, hat);
        for (std::int64_t k = 0; k < n; ++k) {
            hat[static_cast<std::size_t>(k)] *= probe_hat_[static_cast<std::size_t>(k)];
        }
        fft_->backward(hat, y);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::int64_t j = 0; j < n; ++j) y[j] *= inv_n;
    }

    std::shared_ptr<const Fft> fft_;
    std::vector<cplx> probe_hat_;
};

class RandomConvolution final : public LinearMap {
public:
    explicit RandomConvolution(OperatorDescriptor d)
        : LinearMap(std::move(d)), fft_(fft_plan(cols())) {
        const rng::Stream s(descriptor().seed, rng::streams::signs);
        signs_.resize(static_cast<std::size_t>(cols()));
        for (std::int64_t k = 0; k < cols(); ++k) {
            signs_[static_cast<std::size_t>(k)] = s.sign(static_cast<std::uint64_t>(k));
        }
        // R F D F^H with unitary F, subsampled rows rescaled by sqrt(n/m):
        // two unnormalized transforms contribute 1/n
        scale_ = std::sqrt(static_cast<double>(cols()) / static_cast<double>(rows())) /
                 static_cast<double>(cols());
    }

private:
    void convolve(std::span<const cplx> x, std::span<cplx> out) const {
        const std::int64_t n = cols();
        std::vector<cplx> hat(static_cast<std::size_t>(n));
        fft_->backward(x, hat);
        for (std::int64_t k = 0; k < n; ++k) {
            hat[static_cast<std::size_t>(k)] *= signs_[static_cast<std::size_t>(k)];
        }
        fft_->forward(hat, out);
    }

    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        std::vector<cplx> full(static_cast<std::size_t>(cols()));
        convolve(x, full);
        const auto& sel = *descriptor().selection;
        for (std::int64_t k = 0; k < rows(); ++k) {
            y[k] = scale_ * full[static_cast<std::size_t>(sel[static_cast<std::size_t>(k)])];
        }
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        // the full convolution is Hermitian, so the adjoint is scatter + convolve
        std::vector<cplx> full(static_cast<std::size_t>(cols()), cplx{0.0, 0.0});
        const auto& sel = *descriptor().selection;
        for (std::int64_t k = 0; k < rows(); ++k) {
            full[static_cast<std::size_t>(sel[static_cast<std::size_t>(k)])] = scale_ * x[k];
        }
        convolve(full, y);
    }

    std::shared_ptr<const Fft> fft_;
    std::vector<double> signs_;
    double scale_;
};

class Dbd final : public LinearMap {
public:
    explicit Dbd(OperatorDescriptor d) : LinearMap(std::move(d)) {
        const auto& b = *descriptor().block_params;
        const rng::Stream s(descriptor().seed, rng::streams::entries);
        const Dist dist = *descriptor().dist;
        const double scale = 1.0 / std::sqrt(static_cast<double>(b.M));
        // entry index is row-major over the vertically stacked blocks, so a
        // single-block operator reproduces the dense family entry for entry
        blocks_.resize(static_cast<std::size_t>(b.M * b.N * b.J));
        for (std::int64_t i = 0; i < b.M * b.N * b.J; ++i) {
            blocks_[static_cast<std::size_t>(i)] =
                scale * draw_entry(s, dist, static_cast<std::uint64_t>(i));
        }
    }

private:
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        const auto& b = *descriptor().block_params;
        kernels::block_diag_matvec(blocks_, b.M, b.N, b.J, x, y);
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        const auto& b = *descriptor().block_params;
        kernels::block_diag_matvec_adjoint(blocks_, b.M, b.N, b.J, x, y);
    }

    std::vector<double> blocks_;
};

class DevoreBinary final : public LinearMap {
public:
    explicit DevoreBinary(OperatorDescriptor d) : LinearMap(std::move(d)) {
        const std::int64_t p = descriptor().devore_params->p;
        const std::int64_t r = descriptor().devore_params->r;
        const std::int64_t n = cols();
        value_ = 1.0 / std::sqrt(static_cast<double>(p));

        // column ell encodes polynomial coefficients as base-p digits, least
        // significant digit = constant term; its support is the graph
        // {(x, Q_ell(x)) : x in F_p} flattened to rows x*p + Q_ell(x)
        col_support_.resize(static_cast<std::size_t>(n * p));
        std::vector<std::vector<std::int32_t>> row_cols(static_cast<std::size_t>(rows()));
        for (std::int64_t ell = 0; ell < n; ++ell) {
            std::int64_t digits = ell;
            std::vector<std::int64_t> coeff(static_cast<std::size_t>(r + 1));
            for (std::int64_t k = 0; k <= r; ++k) {
                coeff[static_cast<std::size_t>(k)] = digits % p;
                digits /= p;
            }
            for (std::int64_t x = 0; x < p; ++x) {
                std::int64_t q = 0;
                for (std::int64_t k = r; k >= 0; --k) {
                    q = (q * x + coeff[static_cast<std::size_t>(k)]) % p;
                }
                const std::int64_t row = x * p + q;
                col_support_[static_cast<std::size_t>(ell * p + x)] = row;
                row_cols[static_cast<std::size_t>(row)].push_back(
                    static_cast<std::int32_t>(ell));
            }
        }
        row_ptr_.resize(static_cast<std::size_t>(rows()) + 1, 0);
        for (std::int64_t i = 0; i < rows(); ++i) {
            row_ptr_[static_cast<std::size_t>(i) + 1] =
                row_ptr_[static_cast<std::size_t>(i)] +
                static_cast<std::int64_t>(row_cols[static_cast<std::size_t>(i)].size());
        }
        row_idx_.reserve(static_cast<std::size_t>(row_ptr_.back()));
        for (const auto& members : row_cols) {
            row_idx_.insert(row_idx_.end(), members.begin(), members.end());
        }
    }

    std::span<const std::int64_t> column_support(std::int64_t ell) const {
        const std::int64_t p = descriptor().devore_params->p;
        return {col_support_.data() + ell * p, static_cast<std::size_t>(p)};
    }

private:
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        for (std::int64_t i = 0; i < rows(); ++i) {
            cplx acc{0.0, 0.0};
            for (std::int64_t t = row_ptr_[static_cast<std::size_t>(i)];
                 t < row_ptr_[static_cast<std::size_t>(i) + 1]; ++t) {
                acc += x[static_cast<std::size_t>(row_idx_[static_cast<std::size_t>(t)])];
            }
            y[i] = value_ * acc;
        }
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        const std::int64_t p = descriptor().devore_params->p;
        for (std::int64_t ell = 0; ell < cols(); ++ell) {
            cplx acc{0.0, 0.0};
            for (std::int64_t t = 0; t < p; ++t) {
                acc += x[static_cast<std::size_t>(
                    col_support_[static_cast<std::size_t>(ell * p + t)])];
            }
            y[ell] = value_ * acc;
        }
    }

    double value_;
    std::vector<std::int64_t> col_support_;  // n groups of p rows
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> row_idx_;
};

class Composed final : public LinearMap {
public:
    Composed(OperatorDescriptor d, std::vector<LinearOp> children)
        : LinearMap(std::move(d)), children_(std::move(children)) {}

private:
    void do_apply(std::span<const cplx> x, std::span<cplx> y) const override {
        std::vector<cplx> cur(x.begin(), x.end());
        std::vector<cplx> next;
        for (auto it = children_.rbegin(); it != children_.rend(); ++it) {
            next.resize(static_cast<std::size_t>((*it)->rows()));
            (*it)->apply(cur, next);
            cur.swap(next);
        }
        std::copy(cur.begin(), cur.end(), y.begin());
    }
    void do_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
        std::vector<cplx> cur(x.begin(), x.end());
        std::vector<cplx> next;
        for (const auto& child : children_) {
            next.resize(static_cast<std::size_t>(child->cols()));
            child->adjoint(cur, next);
            cur.swap(next);
        }
        std::copy(cur.begin(), cur.end(), y.begin());
    }

    std::vector<LinearOp> children_;
};

}  // namespace

// ---- base class span plumbing -------------------------------------------

void LinearMap::apply(std::span<const cplx> x, std::span<cplx> y) const {
    if (static_cast<std::int64_t>(x.size()) != cols() ||
        static_cast<std::int64_t>(y.size()) != rows()) {
        throw DimensionError("apply: " + family_name(descriptor_.family) + " is " +
                             std::to_string(rows()) + "x" + std::to_string(cols()) +
                             ", got input " + std::to_string(x.size()) + " output " +
                             std::to_string(y.size()));
    }
    if (x.data() == y.data()) {
        throw std::invalid_argument("apply: input and output must not alias");
    }
    do_apply(x, y);
}

void LinearMap::adjoint(std::span<const cplx> x, std::span<cplx> y) const {
    if (static_cast<std::int64_t>(x.size()) != rows() ||
        static_cast<std::int64_t>(y.size()) != cols()) {
        throw DimensionError("adjoint: " + family_name(descriptor_.family) + " is " +
                             std::to_string(rows()) + "x" + std::to_string(cols()) +
                             ", got input " + std::to_string(x.size()) + " output " +
                             std::to_string(y.size()));
    }
    if (x.data() == y.data()) {
        throw std::invalid_argument("adjoint: input and output must not alias");
    }
    do_adjoint(x, y);
}

std::vector<cplx> LinearMap::apply(std::span<const cplx> x) const {
    std::vector<cplx> y(static_cast<std::size_t>(rows()));
    apply(x, y);
    return y;
}

std::vector<cplx> LinearMap::adjoint(std::span<const cplx> x) const {
    std::vector<cplx> y(static_cast<std::size_t>(cols()));
    adjoint(x, y);
    return y;
}

// ---- factories -----------------------------------------------------------

LinearOp make_operator(const OperatorDescriptor& d) {
    validate_descriptor(d);
    OperatorDescriptor full = d;
    switch (d.family) {
        case Family::rademacher_diag:
            return std::make_shared<RademacherDiag>(std::move(full));
        case Family::unitary_dft:
            return std::make_shared<UnitaryDft>(std::move(full));
        case Family::dense_subgaussian:
            return std::make_shared<DenseSubgaussian>(std::move(full));
        case Family::subsampled_dft:
        case Family::partial_circulant:
        case Family::random_convolution:
            if (!full.selection) {
                full.selection = draw_selection(d.m, d.n, d.seed);
            }
            if (d.family == Family::subsampled_dft) {
                return std::make_shared<SubsampledDft>(std::move(full));
            }
            if (d.family == Family::partial_circulant) {
                return std::make_shared<PartialCirculant>(std::move(full));
            }
            return std::make_shared<RandomConvolution>(std::move(full));
        case Family::dbd:
            return std::make_shared<Dbd>(std::move(full));
        case Family::devore_binary:
            return std::make_shared<DevoreBinary>(std::move(full));
        case Family::composed: {
            std::vector<LinearOp> children;
            children.reserve(d.children.size());
            for (const auto& c : d.children) children.push_back(make_operator(c));
            // children may have filled generated selections; re-embed them
            for (std::size_t i = 0; i < children.size(); ++i) {
                full.children[i] = children[i]->descriptor();
            }
            return std::make_shared<Composed>(std::move(full), std::move(children));
        }
    }
    throw std::invalid_argument("make_operator: unknown family");
}

LinearOp make_rademacher_diag(std::int64_t n, std::uint64_t seed) {
    OperatorDescriptor d;
    d.family = Family::rademacher_diag;
    d.m = n;
    d.n = n;
    d.seed = seed;
    return make_operator(d);
}

LinearOp make_unitary_dft(std::int64_t n) {
    OperatorDescriptor d;
    d.family = Family::unitary_dft;
    d.m = n;
    d.n = n;
    d.seed = 0;
    return make_operator(d);
}

LinearOp make_dense_subgaussian(std::int64_t m, std::int64_t n, Dist dist, std::uint64_t seed) {
    OperatorDescriptor d;
    d.family = Family::dense_subgaussian;
    d.m = m;
    d.n = n;
    d.seed = seed;
    d.dist = dist;
    return make_operator(d);
}

LinearOp make_subsampled_dft(std::int64_t m, std::int64_t n, std::uint64_t seed) {
    OperatorDescriptor d;
    d.family = Family::subsampled_dft;
    d.m = m;
    d.n = n;
    d.seed = seed;
    return make_operator(d);
}

LinearOp make_subsampled_dft(std::int64_t m, std::int64_t n, std::uint64_t seed,
                             std::vector<std::int64_t> selection) {
    OperatorDescriptor d;
    d.family = Family::subsampled_dft;
    d.m = m;
    d.n = n;
    d.seed = seed;
    d.selection = std::move(selection);
    return make_operator(d);
}

LinearOp make_partial_circulant(std::int64_t m, std::int64_t n, Dist dist, std::uint64_t seed,
                                SelectionPolicy policy) {
    OperatorDescriptor d;
    d.family = Family::partial_circulant;
    d.m = m;
    d.n = n;
    d.seed = seed;
    d.dist = dist;
    if (policy == SelectionPolicy::first_m) {
        std::vector<std::int64_t> sel(static_cast<std::size_t>(m));
        for (std::int64_t i = 0; i < m; ++i) sel[static_cast<std::size_t>(i)] = i;
        d.selection = std::move(sel);
    }
    return make_operator(d);
}

LinearOp make_partial_circulant(std::int64_t m, std::int64_t n, Dist dist, std::uint64_t seed,
                                std::vector<std::int64_t> selection) {
    OperatorDescriptor d;
    d.family = Family::partial_circulant;
    d.m = m;
    d.n = n;
    d.seed = seed;
    d.dist = dist;
    d.selection = std::move(selection);
    return make_operator(d);
}

LinearOp make_random_convolution(std::int64_t m, std::int64_t n, std::uint64_t seed) {
    OperatorDescriptor d;
    d.family = Family::random_convolution;
    d.m = m;
    d.n = n;
    d.seed = seed;
    return make_operator(d);
}

LinearOp make_random_convolution(std::int64_t m, std::int64_t n, std::uint64_t seed,
                                 std::vector<std::int64_t> selection) {
    OperatorDescriptor d;
    d.family = Family::random_convolution;
    d.m = m;
    d.n = n;
    d.seed = seed;
    d.selection = std::move(selection);
    return make_operator(d);
}

LinearOp make_dbd(std::int64_t M, std::int64_t N, std::int64_t J, Dist dist,
                  std::uint64_t seed) {
    OperatorDescriptor d;
    d.family = Family::dbd;
    d.m = M * J;
    d.n = N * J;
    d.seed = seed;
    d.dist = dist;
    d.block_params = BlockParams{M, N, J};
    return make_operator(d);
}

LinearOp make_devore_binary(std::int64_t p, std::int64_t r) {
    OperatorDescriptor d;
    d.family = Family::devore_binary;
    d.devore_params = DevoreParams{p, r};
    d.m = p * p;
    d.n = 1;
    for (std::int64_t k = 0; k <= r; ++k) d.n *= p;
    d.seed = 0;
    return make_operator(d);
}

LinearOp compose(std::vector<LinearOp> children) {
    if (children.empty()) {
        throw std::invalid_argument("compose: need at least one child");
    }
    OperatorDescriptor d;
    d.family = Family::composed;
    d.m = children.front()->rows();
    d.n = children.back()->cols();
    d.seed = 0;
    for (const auto& c : children) d.children.push_back(c->descriptor());
    validate_descriptor(d);
    return std::make_shared<Composed>(std::move(d), std::move(children));
}

LinearOp make_identity(std::int64_t n) {
    return compose({make_rademacher_diag(n, 0), make_rademacher_diag(n, 0)});
}

DenseMatrix materialize_dense(const LinearMap& op, std::int64_t cap) {
    const std::int64_t m = op.rows(), n = op.cols();
    if (m * n > cap) {
        throw DimensionError("materialize_dense: " + std::to_string(m) + "x" +
                             std::to_string(n) + " exceeds entry cap " + std::to_string(cap));
    }
    DenseMatrix out;
    out.m = m;
    out.n = n;
    out.a.resize(static_cast<std::size_t>(m * n));
    std::vector<cplx> e(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    std::vector<cplx> col(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j < n; ++j) {
        e[static_cast<std::size_t>(j)] = cplx{1.0, 0.0};
        op.apply(e, col);
        for (std::int64_t i = 0; i < m; ++i) {
            out.at(i, j) = col[static_cast<std::size_t>(i)];
        }
        e[static_cast<std::size_t>(j)] = cplx{0.0, 0.0};
    }
    return out;
}

double estimate_spectral_norm(const LinearMap& op, int iterations, std::uint64_t seed) {
    const std::int64_t n = op.cols();
    const rng::Stream s(seed, rng::streams::power_iter);
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = cplx{s.gaussian(2 * static_cast<std::uint64_t>(i)),
                                              s.gaussian(2 * static_cast<std::uint64_t>(i) + 1)};
    }
    std::vector<cplx> w(static_cast<std::size_t>(op.rows()));
    double sigma_sq = 0.0;
    for (int it = 0; it < iterations; ++it) {
        double norm = 0.0;
        for (const auto& z : v) norm += std::norm(z);
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (auto& z : v) z /= norm;
        op.apply(v, w);
        const std::vector<cplx> u = op.adjoint(w);
        sigma_sq = 0.0;
        for (const auto& z : u) sigma_sq += std::norm(z);
        sigma_sq = std::sqrt(sigma_sq);
        std::copy(u.begin(), u.end(), v.begin());
    }
    return std::sqrt(sigma_sq);
}

}  // namespace stable_embed::linops
