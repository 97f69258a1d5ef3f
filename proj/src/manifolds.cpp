#include "stable_embed/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "stable_embed/errors.hpp"
#include "stable_embed/kernels.hpp"
#include "stable_embed/rng.hpp"

namespace stable_embed::manifolds {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_axis(double v, double lo, double hi) {
    const double span = hi - lo;
    double t = std::fmod(v - lo, span);
    if (t < 0.0) t += span;
    return lo + t;
}

}  // namespace

ManifoldModel::ManifoldModel(std::string name, std::int64_t intrinsic_dim,
                             std::int64_t ambient_complex, ParamDomain domain, EvalFn eval,
                             std::optional<bounds::ManifoldParams> geometry, GeodesicFn geodesic)
    : name_(std::move(name)),
      intrinsic_dim_(intrinsic_dim),
      ambient_complex_(ambient_complex),
      domain_(std::move(domain)),
      eval_(std::move(eval)),
      geometry_(std::move(geometry)),
      geodesic_(std::move(geodesic)) {
    if (intrinsic_dim_ < 1 || ambient_complex_ < 1) {
        throw DimensionError("manifold: dimensions must be positive");
    }
    if (static_cast<std::int64_t>(domain_.lo.size()) != intrinsic_dim_ ||
        domain_.hi.size() != domain_.lo.size() || domain_.periodic.size() != domain_.lo.size()) {
        throw DimensionError("manifold: domain description must have one entry per dimension");
    }
}

ManifoldModel ManifoldModel::from_grid(std::string name, std::int64_t intrinsic_dim,
                                       std::int64_t ambient_complex, std::vector<double> thetas,
                                       std::vector<cplx> points) {
    if (intrinsic_dim < 1 || ambient_complex < 1) {
        throw DimensionError("manifold: dimensions must be positive");
    }
    if (thetas.empty() || thetas.size() % static_cast<std::size_t>(intrinsic_dim) != 0) {
        throw DimensionError("manifold grid: theta rows do not match intrinsic dimension");
    }
    const std::size_t rows = thetas.size() / static_cast<std::size_t>(intrinsic_dim);
    if (points.size() != rows * static_cast<std::size_t>(ambient_complex)) {
        throw DimensionError("manifold grid: point rows do not match theta rows");
    }
    ParamDomain dom;
    dom.lo.assign(static_cast<std::size_t>(intrinsic_dim),
                  std::numeric_limits<double>::quiet_NaN());
    dom.hi = dom.lo;
    dom.periodic.assign(static_cast<std::size_t>(intrinsic_dim), false);
    ManifoldModel m(std::move(name), intrinsic_dim, ambient_complex, std::move(dom), EvalFn{});
    m.grid_thetas_ = std::move(thetas);
    m.grid_points_ = std::move(points);
    return m;
}

std::int64_t ManifoldModel::grid_size() const {
    return static_cast<std::int64_t>(grid_points_.size()) / ambient_complex_;
}

std::span<const double> ManifoldModel::grid_theta(std::int64_t i) const {
    return {grid_thetas_.data() + i * intrinsic_dim_, static_cast<std::size_t>(intrinsic_dim_)};
}

std::span<const cplx> ManifoldModel::grid_point(std::int64_t i) const {
    return {grid_points_.data() + i * ambient_complex_,
            static_cast<std::size_t>(ambient_complex_)};
}

void ManifoldModel::eval(std::span<const double> theta, std::span<cplx> out) const {
    if (static_cast<std::int64_t>(theta.size()) != intrinsic_dim_ ||
        static_cast<std::int64_t>(out.size()) != ambient_complex_) {
        throw DimensionError("manifold eval: argument sizes do not match model dimensions");
    }
    if (is_grid()) {
        throw std::invalid_argument(
            "manifold eval: grid models only hold sampled points; use grid_point");
    }
    eval_(theta, out);
}

double ManifoldModel::geodesic_distance(std::span<const double> a,
                                        std::span<const double> b) const {
    if (!geodesic_) {
        throw std::invalid_argument("manifold: no geodesic distance available for " + name_);
    }
    return geodesic_(a, b);
}

std::vector<cplx> sinusoid_point(double omega, std::int64_t N, bool* wrapped) {
    if (N < 1) throw DimensionError("sinusoid_point: N must be >= 1");
    const bool outside = omega < 0.0 || omega >= kTwoPi;
    if (wrapped) *wrapped = outside;
    if (outside) omega = wrap_axis(omega, 0.0, kTwoPi);
    std::vector<cplx> out(static_cast<std::size_t>(N));
    for (std::int64_t k = 1; k <= N; ++k) {
        const double phase = static_cast<double>(k) * omega;
        out[static_cast<std::size_t>(k - 1)] = cplx{std::cos(phase), std::sin(phase)};
    }
    return out;
}

namespace {

// sum of n^2 and n^4 for n = 1..N, exact in double for N <= ~10^4
void power_sums(std::int64_t N, double& sum2, double& sum4) {
    sum2 = 0.0;
    sum4 = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double nd = static_cast<double>(n);
        sum2 += nd * nd;
        sum4 += nd * nd * nd * nd;
    }
}

}  // namespace

bounds::ManifoldParams sinusoid_geometry(std::int64_t N) {
    if (N < 1) throw DimensionError("sinusoid_geometry: N must be >= 1");
    double sum2 = 0.0, sum4 = 0.0;
    power_sums(N, sum2, sum4);
    bounds::ManifoldParams p;
    p.D = 1.0;
    p.N = 2.0 * static_cast<double>(N);
    p.tau = sum2 / std::sqrt(sum4);
    p.V = kTwoPi * std::sqrt(sum2);
    p.R = 1.0;
    return p;
}

double sinusoid_geodesic_distance(double omega1, double omega2, std::int64_t N) {
    if (N < 1) throw DimensionError("sinusoid_geodesic_distance: N must be >= 1");
    omega1 = wrap_axis(omega1, 0.0, kTwoPi);
    omega2 = wrap_axis(omega2, 0.0, kTwoPi);
    const double gap = std::abs(omega1 - omega2);
    const double arc = std::min(gap, kTwoPi - gap);
    double sum2 = 0.0, sum4 = 0.0;
    power_sums(N, sum2, sum4);
    return arc * std::sqrt(sum2);
}

ManifoldModel sinusoid_model(std::int64_t N) {
    if (N < 1) throw DimensionError("sinusoid_model: N must be >= 1");
    ParamDomain dom;
    dom.lo = {0.0};
    dom.hi = {kTwoPi};
    dom.periodic = {true};
    auto eval = [N](std::span<const double> theta, std::span<cplx> out) {
        const double omega = theta[0];
        for (std::int64_t k = 1; k <= N; ++k) {
            const double phase = static_cast<double>(k) * omega;
            out[static_cast<std::size_t>(k - 1)] = cplx{std::cos(phase), std::sin(phase)};
        }
    };
    auto geodesic = [N](std::span<const double> a, std::span<const double> b) {
        return sinusoid_geodesic_distance(a[0], b[0], N);
    };
    return ManifoldModel("sinusoid", 1, N, std::move(dom), std::move(eval),
                         sinusoid_geometry(N), std::move(geodesic));
}

double default_min_separation(const ManifoldModel& model) {
    return 1e-8 * std::sqrt(static_cast<double>(model.ambient_real()));
}

namespace {

double norm_of(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

// chord sampling draws for index i, attempt a, slot k; the layout leaves
// room for 2 theta draws per side plus a direction draw per axis
std::uint64_t draw_index(std::int64_t i, int attempt, int slot, std::int64_t width) {
    return (static_cast<std::uint64_t>(i) * 128 + static_cast<std::uint64_t>(attempt)) *
               static_cast<std::uint64_t>(width) +
           static_cast<std::uint64_t>(slot);
}

constexpr int kStratumLevels = 32;
constexpr int kMaxAttempts = 100;

}  // namespace

ChordSet sample_chords(const ManifoldModel& model, std::int64_t count, std::uint64_t seed,
                       double min_separation) {
    if (count < 1) throw std::invalid_argument("sample_chords: count must be >= 1");
    if (min_separation < 0.0) min_separation = default_min_separation(model);

    const std::int64_t D = model.intrinsic_dim();
    const std::int64_t n = model.ambient_complex();
    ChordSet set;
    set.ambient_n = n;
    set.intrinsic_dim = D;
    set.count = count;
    set.seed = seed;
    set.min_separation = min_separation;
    set.chords.resize(static_cast<std::size_t>(count * n));
    set.pair_params.resize(static_cast<std::size_t>(count * 2 * D));

    const rng::Stream stream(seed, rng::streams::chords);
    const std::int64_t width = 4 * D + 2;

    double span_max = 0.0;
    if (!model.is_grid()) {
        for (std::int64_t d = 0; d < D; ++d) {
            span_max = std::max(span_max,
                                model.domain().hi[static_cast<std::size_t>(d)] -
                                    model.domain().lo[static_cast<std::size_t>(d)]);
        }
    }
    // geometric spacing from span/2 down to min_separation (parameter units)
    const double level_top = span_max / 2.0;
    const double level_floor = std::min(min_separation, level_top);
    const double level_ratio =
        level_top > 0.0 && level_floor > 0.0
            ? std::pow(level_floor / level_top, 1.0 / (kStratumLevels - 1))
            : 1.0;

    std::int64_t failed = 0;

#pragma omp parallel for schedule(static) num_threads(kernels::max_threads()) \
    reduction(+ : failed)
    for (std::int64_t i = 0; i < count; ++i) {
        std::vector<double> th1(static_cast<std::size_t>(D));
        std::vector<double> th2(static_cast<std::size_t>(D));
        std::vector<cplx> p1(static_cast<std::size_t>(n));
        std::vector<cplx> p2(static_cast<std::size_t>(n));
        bool ok = false;
        for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
            if (model.is_grid()) {
                const std::int64_t g = model.grid_size();
                const std::int64_t a = static_cast<std::int64_t>(
                    stream.below(draw_index(i, attempt, 0, width), static_cast<std::uint64_t>(g)));
                const std::int64_t b = static_cast<std::int64_t>(
                    stream.below(draw_index(i, attempt, 1, width), static_cast<std::uint64_t>(g)));
                if (a == b) continue;
                std::copy(model.grid_theta(a).begin(), model.grid_theta(a).end(), th1.begin());
                std::copy(model.grid_theta(b).begin(), model.grid_theta(b).end(), th2.begin());
                std::copy(model.grid_point(a).begin(), model.grid_point(a).end(), p1.begin());
                std::copy(model.grid_point(b).begin(), model.grid_point(b).end(), p2.begin());
            } else {
                for (std::int64_t d = 0; d < D; ++d) {
                    const double u = stream.uniform01(draw_index(i, attempt, static_cast<int>(d),
                                                                 width));
                    const double lo = model.domain().lo[static_cast<std::size_t>(d)];
                    const double hi = model.domain().hi[static_cast<std::size_t>(d)];
                    th1[static_cast<std::size_t>(d)] = lo + u * (hi - lo);
                }
                const bool stratum = (i % 4 == 3) && level_top > 0.0;
                if (stratum) {
                    // re-probe one level coarser on each rejected attempt so
                    // a floor below the ambient separation cannot dead-end
                    const int level = static_cast<int>(
                        std::max<std::int64_t>(0, (i / 4) % kStratumLevels - attempt));
                    const double dt = level_top * std::pow(level_ratio, level);
                    for (std::int64_t d = 0; d < D; ++d) {
                        const double s = stream.sign(
                            draw_index(i, attempt, static_cast<int>(D + d), width));
                        double v = th1[static_cast<std::size_t>(d)] + s * dt;
                        const double lo = model.domain().lo[static_cast<std::size_t>(d)];
                        const double hi = model.domain().hi[static_cast<std::size_t>(d)];
                        if (model.domain().periodic[static_cast<std::size_t>(d)]) {
                            v = wrap_axis(v, lo, hi);
                        } else {
                            v = std::clamp(v, lo, hi);
                        }
                        th2[static_cast<std::size_t>(d)] = v;
                    }
                } else {
                    for (std::int64_t d = 0; d < D; ++d) {
                        const double u = stream.uniform01(
                            draw_index(i, attempt, static_cast<int>(2 * D + d), width));
                        const double lo = model.domain().lo[static_cast<std::size_t>(d)];
                        const double hi = model.domain().hi[static_cast<std::size_t>(d)];
                        th2[static_cast<std::size_t>(d)] = lo + u * (hi - lo);
                    }
                }
                model.eval(th1, p1);
                model.eval(th2, p2);
            }
            for (std::int64_t k = 0; k < n; ++k) {
                p1[static_cast<std::size_t>(k)] -= p2[static_cast<std::size_t>(k)];
            }
            const double dist = norm_of(p1);
            if (dist < min_separation || dist == 0.0) continue;
            const double inv = 1.0 / dist;
            for (std::int64_t k = 0; k < n; ++k) {
                set.chords[static_cast<std::size_t>(i * n + k)] =
                    p1[static_cast<std::size_t>(k)] * inv;
            }
            for (std::int64_t d = 0; d < D; ++d) {
                set.pair_params[static_cast<std::size_t>(i * 2 * D + d)] =
                    th1[static_cast<std::size_t>(d)];
                set.pair_params[static_cast<std::size_t>(i * 2 * D + D + d)] =
                    th2[static_cast<std::size_t>(d)];
            }
            ok = true;
        }
        if (!ok) failed += 1;
    }

    if (failed > 0) {
        throw std::invalid_argument(
            "sample_chords: " + std::to_string(failed) + " of " + std::to_string(count) +
            " slots rejected " + std::to_string(kMaxAttempts) +
            " consecutive pairs; min_separation=" + std::to_string(min_separation) +
            " is likely too large, try a smaller value");
    }
    return set;
}

std::vector<cplx> chord_between(const ManifoldModel& model, std::span<const double> theta1,
                                std::span<const double> theta2) {
    std::vector<cplx> p1(static_cast<std::size_t>(model.ambient_complex()));
    std::vector<cplx> p2(static_cast<std::size_t>(model.ambient_complex()));
    model.eval(theta1, p1);
    model.eval(theta2, p2);
    for (std::size_t k = 0; k < p1.size(); ++k) p1[k] -= p2[k];
    const double dist = norm_of(p1);
    if (dist == 0.0) {
        throw std::invalid_argument("chord_between: the two parameter points coincide");
    }
    for (auto& z : p1) z /= dist;
    return p1;
}

SelfAvoidanceReport verify_self_avoidance(const ManifoldModel& model,
                                          const bounds::ManifoldParams& geometry,
                                          std::int64_t pair_count, std::uint64_t seed,
                                          double slack) {
    if (pair_count < 1) throw std::invalid_argument("verify_self_avoidance: pair_count >= 1");
    if (!model.has_geodesic()) {
        throw std::invalid_argument("verify_self_avoidance: model has no geodesic distance");
    }
    const std::int64_t D = model.intrinsic_dim();
    const std::int64_t n = model.ambient_complex();
    const double tau = geometry.tau;
    const rng::Stream stream(seed, rng::streams::chords);
    const std::int64_t width = 4 * D + 2;

    SelfAvoidanceReport rep;
    rep.slack = slack;
    rep.pairs_tested = pair_count;

    std::int64_t in_range = 0, violations = 0;
    double max_excess = 0.0;

    double span_max = 0.0;
    for (std::int64_t d = 0; d < D; ++d) {
        span_max = std::max(span_max, model.domain().hi[static_cast<std::size_t>(d)] -
                                          model.domain().lo[static_cast<std::size_t>(d)]);
    }
    const double floor_dt = span_max * 1e-10;
    const double ratio = std::pow(floor_dt / (span_max / 2.0), 1.0 / (kStratumLevels - 1));

#pragma omp parallel for schedule(static) num_threads(kernels::max_threads()) \
    reduction(+ : in_range, violations) reduction(max : max_excess)
    for (std::int64_t i = 0; i < pair_count; ++i) {
        std::vector<double> th1(static_cast<std::size_t>(D));
        std::vector<double> th2(static_cast<std::size_t>(D));
        std::vector<cplx> p1(static_cast<std::size_t>(n));
        std::vector<cplx> p2(static_cast<std::size_t>(n));
        for (std::int64_t d = 0; d < D; ++d) {
            const double u = stream.uniform01(draw_index(i, 0, static_cast<int>(d), width));
            const double lo = model.domain().lo[static_cast<std::size_t>(d)];
            const double hi = model.domain().hi[static_cast<std::size_t>(d)];
            th1[static_cast<std::size_t>(d)] = lo + u * (hi - lo);
        }
        // even indices: uniform partner; odd: geometrically shrinking offset
        // so short distances are represented
        if (i % 2 == 0) {
            for (std::int64_t d = 0; d < D; ++d) {
                const double u =
                    stream.uniform01(draw_index(i, 0, static_cast<int>(2 * D + d), width));
                const double lo = model.domain().lo[static_cast<std::size_t>(d)];
                const double hi = model.domain().hi[static_cast<std::size_t>(d)];
                th2[static_cast<std::size_t>(d)] = lo + u * (hi - lo);
            }
        } else {
            const int level = static_cast<int>((i / 2) % kStratumLevels);
            const double dt = (span_max / 2.0) * std::pow(ratio, level);
            for (std::int64_t d = 0; d < D; ++d) {
                const double s =
                    stream.sign(draw_index(i, 0, static_cast<int>(D + d), width));
                double v = th1[static_cast<std::size_t>(d)] + s * dt;
                const double lo = model.domain().lo[static_cast<std::size_t>(d)];
                const double hi = model.domain().hi[static_cast<std::size_t>(d)];
                v = model.domain().periodic[static_cast<std::size_t>(d)] ? wrap_axis(v, lo, hi)
                                                                         : std::clamp(v, lo, hi);
                th2[static_cast<std::size_t>(d)] = v;
            }
        }
        model.eval(th1, p1);
        model.eval(th2, p2);
        for (std::int64_t k = 0; k < n; ++k) {
            p1[static_cast<std::size_t>(k)] -= p2[static_cast<std::size_t>(k)];
        }
        const double d_e = norm_of(p1);
        if (d_e == 0.0 || d_e > 3.0 * tau / 8.0) continue;
        in_range += 1;
        const double d_m = model.geodesic_distance(th1, th2);
        // geodesic bounded by tau (1 - sqrt(1 - 2 d_e / tau))
        const double bound_up = tau - tau * std::sqrt(1.0 - 2.0 * d_e / tau);
        const double excess_up = d_m - bound_up;
        // Euclidean bounded below by d_m - d_m^2/(2 tau)
        const double excess_lo = (d_m - d_m * d_m / (2.0 * tau)) - d_e;
        const double excess = std::max(excess_up, excess_lo);
        if (excess > slack) {
            violations += 1;
            max_excess = std::max(max_excess, excess);
        }
    }

    rep.pairs_in_range = in_range;
    rep.violations = violations;
    rep.max_excess = max_excess;
    rep.inconclusive = in_range == 0;
    return rep;
}

CurvatureReport verify_curvature_bound(const ManifoldModel& model,
                                       const bounds::ManifoldParams& geometry,
                                       std::int64_t sample_count, double tolerance) {
    if (sample_count < 1) throw std::invalid_argument("verify_curvature_bound: need samples");
    if (model.is_grid()) {
        throw std::invalid_argument("verify_curvature_bound: grid models are not differentiable");
    }
    if (model.intrinsic_dim() != 1) {
        throw std::invalid_argument(
            "verify_curvature_bound: only one-dimensional models supported");
    }
    const std::int64_t n = model.ambient_complex();
    const double lo = model.domain().lo[0];
    const double hi = model.domain().hi[0];
    const double eps = std::numeric_limits<double>::epsilon();
    // first derivative step eps^(1/3); the second derivative uses a larger
    // eps^(1/4) step to keep the difference quotient above rounding noise
    const double h1_rel = std::cbrt(eps);
    const double h2_rel = std::sqrt(std::sqrt(eps));

    double max_curv = 0.0;
    int underflow = 0;

#pragma omp parallel for schedule(static) num_threads(kernels::max_threads()) \
    reduction(max : max_curv) reduction(max : underflow)
    for (std::int64_t i = 0; i < sample_count; ++i) {
        const double theta =
            lo + (static_cast<double>(i) + 0.5) / static_cast<double>(sample_count) * (hi - lo);
        const double scale = std::max(1.0, std::abs(theta));
        const double h1 = h1_rel * scale;
        const double h2 = h2_rel * scale;
        if (theta + h1 == theta || theta + h2 == theta) {
            underflow = 1;
            continue;
        }
        std::vector<cplx> fp(static_cast<std::size_t>(n)), fm(static_cast<std::size_t>(n)),
            f0(static_cast<std::size_t>(n));
        std::vector<double> tp{theta + h1}, tm{theta - h1};
        model.eval(tp, fp);
        model.eval(tm, fm);
        std::vector<cplx> d1(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k) {
            d1[static_cast<std::size_t>(k)] = (fp[static_cast<std::size_t>(k)] -
                                               fm[static_cast<std::size_t>(k)]) /
                                              (2.0 * h1);
        }
        tp[0] = theta + h2;
        tm[0] = theta - h2;
        std::vector<double> t0{theta};
        model.eval(tp, fp);
        model.eval(tm, fm);
        model.eval(t0, f0);
        std::vector<cplx> d2(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k) {
            d2[static_cast<std::size_t>(k)] =
                (fp[static_cast<std::size_t>(k)] - 2.0 * f0[static_cast<std::size_t>(k)] +
                 fm[static_cast<std::size_t>(k)]) /
                (h2 * h2);
        }
        // curvature of the unit-speed curve: orthogonal part of d2 over speed^2
        double speed_sq = 0.0;
        for (const auto& z : d1) speed_sq += std::norm(z);
        double dot = 0.0;  // Re<d2, d1>, real inner product on realified space
        for (std::int64_t k = 0; k < n; ++k) {
            dot += (d2[static_cast<std::size_t>(k)] *
                    std::conj(d1[static_cast<std::size_t>(k)]))
                       .real();
        }
        double ortho_sq = 0.0;
        for (std::int64_t k = 0; k < n; ++k) {
            const cplx o = d2[static_cast<std::size_t>(k)] -
                           (dot / speed_sq) * d1[static_cast<std::size_t>(k)];
            ortho_sq += std::norm(o);
        }
        const double curv = std::sqrt(ortho_sq) / speed_sq;
        max_curv = std::max(max_curv, curv);
    }

    if (underflow != 0) {
        throw std::range_error("verify_curvature_bound: finite-difference step underflow");
    }

    CurvatureReport rep;
    rep.sample_count = sample_count;
    rep.max_curvature = max_curv;
    rep.curvature_limit = 1.0 / geometry.tau;
    rep.tolerance = tolerance;
    rep.within_limit = max_curv <= rep.curvature_limit * (1.0 + tolerance);
    return rep;
}

nlohmann::json self_avoidance_to_json(const SelfAvoidanceReport& r) {
    return {{"pairs_tested", r.pairs_tested},   {"pairs_in_range", r.pairs_in_range},
            {"violations", r.violations},       {"max_excess", r.max_excess},
            {"inconclusive", r.inconclusive},   {"slack", r.slack}};
}

nlohmann::json curvature_to_json(const CurvatureReport& r) {
    return {{"sample_count", r.sample_count},
            {"max_curvature", r.max_curvature},
            {"curvature_limit", r.curvature_limit},
            {"tolerance", r.tolerance},
            {"within_limit", r.within_limit}};
}

}  // namespace stable_embed::manifolds
