#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stable_embed/bounds.hpp"

namespace stable_embed::manifolds {

using cplx = std::complex<double>;

// Parameter domain: a box in R^D, with per-axis periodicity.
struct ParamDomain {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<bool> periodic;
};

// A parametric manifold in C^n. Either continuous (eval over the box) or a
// finite grid of precomputed (theta, point) rows loaded from file. Models
// are immutable and safe to share across threads; eval is pure.
class ManifoldModel {
public:
    using EvalFn = std::function<void(std::span<const double>, std::span<cplx>)>;
    using GeodesicFn = std::function<double(std::span<const double>, std::span<const double>)>;

    ManifoldModel(std::string name, std::int64_t intrinsic_dim, std::int64_t ambient_complex,
                  ParamDomain domain, EvalFn eval,
                  std::optional<bounds::ManifoldParams> geometry = {},
                  GeodesicFn geodesic = {});

    static ManifoldModel from_grid(std::string name, std::int64_t intrinsic_dim,
                                   std::int64_t ambient_complex,
                                   std::vector<double> thetas /* rows x D */,
                                   std::vector<cplx> points /* rows x ambient */);

    const std::string& name() const { return name_; }
    std::int64_t intrinsic_dim() const { return intrinsic_dim_; }
    // points live in C^(ambient_complex), identified with R^(2 ambient_complex)
    std::int64_t ambient_complex() const { return ambient_complex_; }
    std::int64_t ambient_real() const { return 2 * ambient_complex_; }
    const ParamDomain& domain() const { return domain_; }
    const std::optional<bounds::ManifoldParams>& geometry() const { return geometry_; }

    bool is_grid() const { return !grid_points_.empty(); }
    std::int64_t grid_size() const;
    std::span<const double> grid_theta(std::int64_t i) const;
    std::span<const cplx> grid_point(std::int64_t i) const;

    void eval(std::span<const double> theta, std::span<cplx> out) const;
    bool has_geodesic() const { return static_cast<bool>(geodesic_); }
    double geodesic_distance(std::span<const double> a, std::span<const double> b) const;

private:
    std::string name_;
    std::int64_t intrinsic_dim_;
    std::int64_t ambient_complex_;
    ParamDomain domain_;
    EvalFn eval_;
    std::optional<bounds::ManifoldParams> geometry_;
    GeodesicFn geodesic_;
    std::vector<double> grid_thetas_;
    std::vector<cplx> grid_points_;
};

// Coordinate k (1-based) equals e^{i k omega}. An omega outside [0, 2pi) is
// reduced into the domain; *wrapped reports whether reduction happened.
std::vector<cplx> sinusoid_point(double omega, std::int64_t N, bool* wrapped = nullptr);

// Closed-form geometry: 1/tau = sqrt(sum n^4)/sum n^2, V = 2 pi sqrt(sum n^2),
// R = 1, D = 1; the ambient dimension is reported realified as 2N.
bounds::ManifoldParams sinusoid_geometry(std::int64_t N);

// Arc length along the constant-speed parameter circle.
double sinusoid_geodesic_distance(double omega1, double omega2, std::int64_t N);

ManifoldModel sinusoid_model(std::int64_t N);

// Unit chords u = (x1 - x2)/||x1 - x2|| between sampled parameter pairs.
struct ChordSet {
    std::int64_t ambient_n = 0;  // complex dimension of each chord
    std::int64_t intrinsic_dim = 1;
    std::int64_t count = 0;
    std::vector<cplx> chords;        // count x ambient_n, row-major
    std::vector<double> pair_params; // count x (2 intrinsic_dim): theta1, theta2
    std::uint64_t seed = 0;
    double min_separation = 0.0;

    std::span<const cplx> chord(std::int64_t i) const {
        return {chords.data() + i * ambient_n, static_cast<std::size_t>(ambient_n)};
    }
    std::span<const double> pair(std::int64_t i) const {
        return {pair_params.data() + i * 2 * intrinsic_dim,
                static_cast<std::size_t>(2 * intrinsic_dim)};
    }
};

double default_min_separation(const ManifoldModel& model);

// Uniform parameter pairs plus a deterministic short-chord stratum with
// geometrically spaced parameter offsets; pairs closer than min_separation
// in ambient norm are rejected and resampled. Pass a negative
// min_separation to use the default. Sampling is indexed, so results do not
// depend on worker count.
ChordSet sample_chords(const ManifoldModel& model, std::int64_t count, std::uint64_t seed,
                       double min_separation = -1.0);

// Normalized difference of two explicit parameter points.
std::vector<cplx> chord_between(const ManifoldModel& model, std::span<const double> theta1,
                                std::span<const double> theta2);

struct SelfAvoidanceReport {
    std::int64_t pairs_tested = 0;
    std::int64_t pairs_in_range = 0;  // Euclidean distance <= 3 tau/8
    std::int64_t violations = 0;
    double max_excess = 0.0;  // worst violation beyond the slack
    bool inconclusive = false;  // no pairs fell in range
    double slack = 0.0;
};

// Checks both self-avoidance inequalities relating geodesic and Euclidean
// distance on pairs with Euclidean distance at most 3 tau/8.
SelfAvoidanceReport verify_self_avoidance(const ManifoldModel& model,
                                          const bounds::ManifoldParams& geometry,
                                          std::int64_t pair_count, std::uint64_t seed,
                                          double slack = 1e-9);

struct CurvatureReport {
    std::int64_t sample_count = 0;
    double max_curvature = 0.0;
    double curvature_limit = 0.0;  // 1/tau
    double tolerance = 0.0;
    bool within_limit = false;
};

// Estimates the curvature of the unit-speed reparameterized curve by central
// finite differences on a parameter grid; one-dimensional models only.
CurvatureReport verify_curvature_bound(const ManifoldModel& model,
                                       const bounds::ManifoldParams& geometry,
                                       std::int64_t sample_count, double tolerance = 1e-3);

nlohmann::json self_avoidance_to_json(const SelfAvoidanceReport& r);
nlohmann::json curvature_to_json(const CurvatureReport& r);

}  // namespace stable_embed::manifolds
