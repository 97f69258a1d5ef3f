#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>

namespace stable_embed {

using cplx = std::complex<double>;

// One-dimensional complex DFT of a fixed length, backed by FFTW. Plans are
// created with FFTW_ESTIMATE so the chosen algorithm depends only on the
// length, keeping transforms bit-reproducible across runs and machines with
// the same library build. Planning is serialized internally; execution is
// safe to call from multiple threads on distinct buffers.
class Fft {
public:
    explicit Fft(std::int64_t n);
    ~Fft();
    Fft(Fft&&) noexcept;
    Fft& operator=(Fft&&) noexcept;
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::int64_t size() const { return n_; }

    // out_k = sum_j in_j e^{-2 pi i jk/n}; no normalization
    void forward(std::span<const cplx> in, std::span<cplx> out) const;
    // out_k = sum_j in_j e^{+2 pi i jk/n}; no normalization
    void backward(std::span<const cplx> in, std::span<cplx> out) const;
    // forward scaled by 1/sqrt(n); unitary, adjoint of backward_unitary
    void forward_unitary(std::span<const cplx> in, std::span<cplx> out) const;
    void backward_unitary(std::span<const cplx> in, std::span<cplx> out) const;

private:
    std::int64_t n_;
    void* plan_fwd_;
    void* plan_bwd_;
};

// Shared per-length plan cache; returns the same Fft for repeated lengths.
std::shared_ptr<const Fft> fft_plan(std::int64_t n);

}  // namespace stable_embed
