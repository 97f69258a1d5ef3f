#include "stable_embed/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "stable_embed/errors.hpp"

namespace stable_embed {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft::Fft(std::int64_t n) : n_(n), plan_fwd_(nullptr), plan_bwd_(nullptr) {
    if (n < 1) {
        throw DimensionError("fft: length must be positive, got " + std::to_string(n));
    }
    std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(in.data()), as_fftw(out.data()),
                                 FFTW_FORWARD, flags);
    plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(in.data()), as_fftw(out.data()),
                                 FFTW_BACKWARD, flags);
    if (!plan_fwd_ || !plan_bwd_) {
        throw std::runtime_error("fft: planner failed for length " + std::to_string(n));
    }
}

Fft::~Fft() {
    if (plan_fwd_ || plan_bwd_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
        if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    }
}

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_), plan_fwd_(other.plan_fwd_), plan_bwd_(other.plan_bwd_) {
    other.plan_fwd_ = nullptr;
    other.plan_bwd_ = nullptr;
}

Fft& Fft::operator=(Fft&& other) noexcept {
    std::swap(n_, other.n_);
    std::swap(plan_fwd_, other.plan_fwd_);
    std::swap(plan_bwd_, other.plan_bwd_);
    return *this;
}

namespace {

void check_spans(std::int64_t n, std::span<const cplx> in, std::span<cplx> out) {
    if (static_cast<std::int64_t>(in.size()) != n || static_cast<std::int64_t>(out.size()) != n) {
        throw DimensionError("fft: buffer sizes " + std::to_string(in.size()) + "/" +
                             std::to_string(out.size()) + " do not match length " +
                             std::to_string(n));
    }
}

void run_plan(void* plan, std::span<const cplx> in, std::span<cplx> out) {
    // new-array execution requires in != out for an out-of-place plan
    if (in.data() == out.data()) {
        std::vector<cplx> tmp(in.begin(), in.end());
        fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(tmp.data()),
                         as_fftw(out.data()));
        return;
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(const_cast<cplx*>(in.data())),
                     as_fftw(out.data()));
}

}  // namespace

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) const {
    check_spans(n_, in, out);
    run_plan(plan_fwd_, in, out);
}

void Fft::backward(std::span<const cplx> in, std::span<cplx> out) const {
    check_spans(n_, in, out);
    run_plan(plan_bwd_, in, out);
}

void Fft::forward_unitary(std::span<const cplx> in, std::span<cplx> out) const {
    forward(in, out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& v : out) v *= scale;
}

void Fft::backward_unitary(std::span<const cplx> in, std::span<cplx> out) const {
    backward(in, out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& v : out) v *= scale;
}

std::shared_ptr<const Fft> fft_plan(std::int64_t n) {
    static std::mutex cache_mutex;
    static std::map<std::int64_t, std::shared_ptr<const Fft>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const Fft>(n);
    cache.emplace(n, plan);
    return plan;
}

}  // namespace stable_embed
