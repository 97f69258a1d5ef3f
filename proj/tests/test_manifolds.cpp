#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <vector>

#include "stable_embed/errors.hpp"
#include "stable_embed/io.hpp"
#include "stable_embed/manifolds.hpp"

using namespace stable_embed;
using manifolds::cplx;
using manifolds::ManifoldModel;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void exact_power_sums(std::int64_t N, __int128& s2, __int128& s4) {
    s2 = 0;
    s4 = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const __int128 nn = static_cast<__int128>(n) * n;
        s2 += nn;
        s4 += nn * nn;
    }
}

double norm2(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& z : v) acc += std::norm(z);
    return std::sqrt(acc);
}

// Circle of radius r in the complex plane, as a one-harmonic test model with
// known curvature 1/r.
ManifoldModel circle_model(double r) {
    manifolds::ParamDomain dom{{0.0}, {kTwoPi}, {true}};
    bounds::ManifoldParams geom{1.0, 2.0, r, kTwoPi * r, r};
    return ManifoldModel(
        "circle", 1, 1, dom,
        [r](std::span<const double> th, std::span<cplx> out) {
            out[0] = r * cplx{std::cos(th[0]), std::sin(th[0])};
        },
        geom,
        [r](std::span<const double> a, std::span<const double> b) {
            double d = std::abs(a[0] - b[0]);
            d = std::min(d, kTwoPi - d);
            return r * d;
        });
}

}  // namespace

TEST_CASE("sinusoid point values") {
    {
        const auto s = manifolds::sinusoid_point(0.0, 4);
        for (const auto& z : s) CHECK(z == cplx{1.0, 0.0});
    }
    {
        const auto s = manifolds::sinusoid_point(std::numbers::pi, 2);
        CHECK(std::abs(s[0] - cplx{-1.0, 0.0}) < 1e-15);
        CHECK(std::abs(s[1] - cplx{1.0, 0.0}) < 1e-15);
    }
    {
        const auto s = manifolds::sinusoid_point(std::numbers::pi / 2.0, 4);
        CHECK(std::abs(s[0] - cplx{0.0, 1.0}) < 1e-15);
        CHECK(std::abs(s[1] - cplx{-1.0, 0.0}) < 1e-15);
        CHECK(std::abs(s[2] - cplx{0.0, -1.0}) < 1e-15);
        CHECK(std::abs(s[3] - cplx{1.0, 0.0}) < 1e-15);
    }
}

TEST_CASE("sinusoid points are reduced into the domain with a flag") {
    bool wrapped = false;
    const auto a = manifolds::sinusoid_point(0.3, 3, &wrapped);
    CHECK_FALSE(wrapped);
    const auto b = manifolds::sinusoid_point(0.3 + kTwoPi, 3, &wrapped);
    CHECK(wrapped);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-14);
}

TEST_CASE("sinusoid norm is sqrt(N)") {
    for (std::int64_t N : {1, 2, 7, 32}) {
        for (double omega : {0.0, 0.1, 2.0, 6.28}) {
            const auto s = manifolds::sinusoid_point(omega, N);
            const double nsq = norm2(s) * norm2(s);
            CHECK(std::abs(nsq - static_cast<double>(N)) <= 4e-15 * static_cast<double>(N));
        }
    }
}

TEST_CASE("sinusoid geometry against exact integer power sums") {
    {
        const auto p = manifolds::sinusoid_geometry(1);
        CHECK(p.tau == 1.0);
        CHECK(p.V == doctest::Approx(kTwoPi).epsilon(1e-15));
        CHECK(p.R == 1.0);
        CHECK(p.D == 1.0);
        CHECK(p.N == 2.0);
    }
    {
        const auto p = manifolds::sinusoid_geometry(2);
        CHECK(p.tau == doctest::Approx(5.0 / std::sqrt(17.0)).epsilon(1e-15));
        CHECK(p.V == doctest::Approx(kTwoPi * std::sqrt(5.0)).epsilon(1e-15));
    }
    // below 2^53 the library's double accumulation is exact integer
    // arithmetic, so the match is bitwise
    for (std::int64_t N : {1, 2, 10, 100, 1000, 2000}) {
        CAPTURE(N);
        __int128 s2 = 0, s4 = 0;
        exact_power_sums(N, s2, s4);
        const double tau = static_cast<double>(s2) / std::sqrt(static_cast<double>(s4));
        const double vol = kTwoPi * std::sqrt(static_cast<double>(s2));
        const auto p = manifolds::sinusoid_geometry(N);
        CHECK(p.tau == tau);
        CHECK(p.V == vol);
        CHECK(p.N == 2.0 * static_cast<double>(N));
    }
    {
        __int128 s2 = 0, s4 = 0;
        exact_power_sums(10000, s2, s4);
        const double tau = static_cast<double>(s2) / std::sqrt(static_cast<double>(s4));
        const auto p = manifolds::sinusoid_geometry(10000);
        CHECK(p.tau == doctest::Approx(tau).epsilon(1e-12));
    }
    // closed form n(n+1)(2n+1)/6 cross-check for the squared sum
    for (std::int64_t N : {10, 100, 10000}) {
        __int128 s2 = 0, s4 = 0;
        exact_power_sums(N, s2, s4);
        const __int128 closed =
            static_cast<__int128>(N) * (N + 1) * (2 * N + 1) / 6;
        CHECK(s2 == closed);
    }
}

TEST_CASE("sinusoid tau scales like sqrt(N)") {
    const double r3 = manifolds::sinusoid_geometry(1000).tau / std::sqrt(1000.0);
    const double r4 = manifolds::sinusoid_geometry(10000).tau / std::sqrt(10000.0);
    CHECK(std::abs(r3 - r4) / r4 < 0.05);
    CHECK(r3 == doctest::Approx(0.7455424323).epsilon(1e-9));
    CHECK(r4 == doctest::Approx(0.7453746274).epsilon(1e-9));
}

TEST_CASE("sinusoid geodesic distance") {
    CHECK(manifolds::sinusoid_geodesic_distance(1.3, 1.3, 5) == 0.0);
    CHECK(manifolds::sinusoid_geodesic_distance(0.0, std::numbers::pi, 1) ==
          doctest::Approx(std::numbers::pi).epsilon(1e-15));
    // frozen: 0.1 sqrt(14)
    CHECK(manifolds::sinusoid_geodesic_distance(1.0, 1.1, 3) ==
          doctest::Approx(0.37416573867739414).epsilon(1e-13));
    // wraps the short way around the parameter circle
    CHECK(manifolds::sinusoid_geodesic_distance(0.1, kTwoPi - 0.1, 3) ==
          doctest::Approx(0.2 * std::sqrt(14.0)).epsilon(1e-12));
}

TEST_CASE("geodesic distance matches numerical arc length") {
    const std::int64_t N = 3;
    const double w1 = 1.0, w2 = 1.6;
    const int steps = 4000;
    double arc = 0.0;
    auto prev = manifolds::sinusoid_point(w1, N);
    for (int i = 1; i <= steps; ++i) {
        const double w = w1 + (w2 - w1) * static_cast<double>(i) / steps;
        const auto cur = manifolds::sinusoid_point(w, N);
        double seg = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k) seg += std::norm(cur[k] - prev[k]);
        arc += std::sqrt(seg);
        prev = cur;
    }
    CHECK(manifolds::sinusoid_geodesic_distance(w1, w2, N) ==
          doctest::Approx(arc).epsilon(1e-7));
}

TEST_CASE("chord sampling produces unit chords above the separation floor") {
    const auto model = manifolds::sinusoid_model(8);
    const auto chords = manifolds::sample_chords(model, 1000, 1);
    REQUIRE(chords.count == 1000);
    REQUIRE(chords.ambient_n == 8);
    CHECK(chords.min_separation == manifolds::default_min_separation(model));
    for (std::int64_t i = 0; i < chords.count; ++i) {
        CHECK(std::abs(norm2(chords.chord(i)) - 1.0) <= 1e-12);
        const auto pair = chords.pair(i);
        const auto p1 = manifolds::sinusoid_point(pair[0], 8);
        const auto p2 = manifolds::sinusoid_point(pair[1], 8);
        double diff = 0.0;
        for (std::size_t k = 0; k < p1.size(); ++k) diff += std::norm(p1[k] - p2[k]);
        CHECK(std::sqrt(diff) >= chords.min_separation);
        // geodesic dominates the chord
        CHECK(manifolds::sinusoid_geodesic_distance(pair[0], pair[1], 8) >=
              std::sqrt(diff) - 1e-12);
    }
}

TEST_CASE("chord sampling is deterministic") {
    const auto model = manifolds::sinusoid_model(4);
    const auto a = manifolds::sample_chords(model, 256, 9);
    const auto b = manifolds::sample_chords(model, 256, 9);
    CHECK(a.chords == b.chords);
    CHECK(a.pair_params == b.pair_params);
    const auto c = manifolds::sample_chords(model, 256, 10);
    CHECK(a.chords != c.chords);
}

TEST_CASE("short-chord stratum aligns with the tangent direction") {
    const std::int64_t N = 8;
    const auto model = manifolds::sinusoid_model(N);
    const auto chords = manifolds::sample_chords(model, 1000, 1);
    int checked = 0;
    for (std::int64_t i = 0; i < chords.count; ++i) {
        const auto pair = chords.pair(i);
        const double dw = std::abs(pair[0] - pair[1]);
        if (dw > 1e-7 || dw == 0.0) continue;
        const double mid = 0.5 * (pair[0] + pair[1]);
        const double h = 1e-6;
        const auto fp = manifolds::sinusoid_point(mid + h, N);
        const auto fm = manifolds::sinusoid_point(mid - h, N);
        std::vector<cplx> tangent(static_cast<std::size_t>(N));
        for (std::size_t k = 0; k < tangent.size(); ++k) tangent[k] = fp[k] - fm[k];
        const double tn = norm2(tangent);
        cplx dot{0.0, 0.0};
        const auto u = chords.chord(i);
        for (std::size_t k = 0; k < tangent.size(); ++k) {
            dot += std::conj(tangent[k] / tn) * u[k];
        }
        CHECK(std::abs(dot) > 1.0 - 1e-4);
        ++checked;
    }
    // the stratum guarantees short chords exist in every sample
    CHECK(checked > 5);
}

TEST_CASE("chord_between normalizes explicit pairs") {
    const auto model = manifolds::sinusoid_model(1);
    const std::vector<double> t1{0.0}, t2{std::numbers::pi};
    const auto u = manifolds::chord_between(model, t1, t2);
    CHECK(std::abs(norm2(u) - 1.0) <= 1e-15);
    // (1 - (-1))/2 = 1
    CHECK(std::abs(u[0] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("oversized min_separation fails with advice") {
    const auto model = manifolds::sinusoid_model(2);
    CHECK_THROWS_WITH_AS((void)manifolds::sample_chords(model, 50, 1, 10.0),
                         doctest::Contains("min_separation"), std::invalid_argument);
}

TEST_CASE("self avoidance holds on the sinusoid and fails under inflated tau") {
    for (std::int64_t N : {1, 2, 4, 8, 16}) {
        CAPTURE(N);
        const auto model = manifolds::sinusoid_model(N);
        const auto geom = manifolds::sinusoid_geometry(N);
        const auto rep = manifolds::verify_self_avoidance(model, geom, 2000, 5);
        CHECK(rep.pairs_tested == 2000);
        CHECK(rep.pairs_in_range > 0);
        CHECK_FALSE(rep.inconclusive);
        CHECK(rep.violations == 0);
        CHECK(rep.max_excess == 0.0);
    }
    {
        const auto model = manifolds::sinusoid_model(4);
        auto geom = manifolds::sinusoid_geometry(4);
        geom.tau *= 10.0;
        const auto rep = manifolds::verify_self_avoidance(model, geom, 2000, 5);
        CHECK(rep.violations >= 1);
        CHECK(rep.max_excess > 0.0);
    }
}

TEST_CASE("self avoidance reports inconclusive when no pair is close enough") {
    const auto model = manifolds::sinusoid_model(4);
    auto geom = manifolds::sinusoid_geometry(4);
    geom.tau = 1e-12;
    const auto rep = manifolds::verify_self_avoidance(model, geom, 500, 5);
    CHECK(rep.inconclusive);
    CHECK(rep.pairs_in_range == 0);
    CHECK(rep.violations == 0);
}

TEST_CASE("curvature estimate matches the circle and the sinusoid") {
    {
        const double r = 2.5;
        const auto model = circle_model(r);
        const auto rep = manifolds::verify_curvature_bound(model, *model.geometry(), 500);
        CHECK(std::abs(rep.max_curvature - 1.0 / r) < 1e-6);
        CHECK(rep.within_limit);
    }
    {
        const auto model = manifolds::sinusoid_model(1);
        const auto rep =
            manifolds::verify_curvature_bound(model, manifolds::sinusoid_geometry(1), 400);
        CHECK(rep.curvature_limit == 1.0);
        CHECK(std::abs(rep.max_curvature - 1.0) < 1e-6);
        CHECK(rep.within_limit);
    }
    {
        const auto model = manifolds::sinusoid_model(8);
        const auto geom = manifolds::sinusoid_geometry(8);
        const auto rep = manifolds::verify_curvature_bound(model, geom, 1000);
        CHECK(rep.max_curvature <= (1.0 / geom.tau) * (1.0 + 1e-3));
        CHECK(rep.within_limit);
    }
    {
        // inflated tau shrinks the allowed curvature below the true value
        const auto model = manifolds::sinusoid_model(4);
        auto geom = manifolds::sinusoid_geometry(4);
        geom.tau *= 10.0;
        const auto rep = manifolds::verify_curvature_bound(model, geom, 400);
        CHECK_FALSE(rep.within_limit);
    }
}

TEST_CASE("grid models reject curvature checks and direct eval") {
    std::vector<double> thetas{0.0, 1.0, 2.0};
    std::vector<cplx> points;
    for (double t : thetas) {
        const auto p = manifolds::sinusoid_point(t, 2);
        points.insert(points.end(), p.begin(), p.end());
    }
    const auto grid = ManifoldModel::from_grid("tiny", 1, 2, thetas, points);
    CHECK(grid.is_grid());
    CHECK(grid.grid_size() == 3);
    CHECK_FALSE(grid.geometry().has_value());
    CHECK(grid.ambient_real() == 4);
    std::vector<cplx> out(2);
    const std::vector<double> th{0.5};
    CHECK_THROWS_AS(grid.eval(th, out), std::invalid_argument);
    const auto geom = manifolds::sinusoid_geometry(2);
    CHECK_THROWS_AS((void)manifolds::verify_curvature_bound(grid, geom, 10),
                    std::invalid_argument);
    // chord sampling over the finite grid still works
    const auto chords = manifolds::sample_chords(grid, 64, 3, 0.0);
    CHECK(chords.count == 64);
    for (std::int64_t i = 0; i < chords.count; ++i) {
        CHECK(std::abs(norm2(chords.chord(i)) - 1.0) <= 1e-12);
    }
}

TEST_CASE("vectors csv round-trips exactly") {
    const std::string path = "tmp_vectors_roundtrip.csv";
    std::vector<std::vector<cplx>> rows = {
        {cplx{1.0 / 3.0, -2.5e-17}, cplx{std::numbers::pi, 1e300}},
        {cplx{-0.0, 4.0}, cplx{5.0, -6.75}},
    };
    io::write_vectors_csv(path, rows);
    const auto back = io::read_vectors_csv(path);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(back[i].size() == rows[i].size());
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
            CHECK(back[i][k].real() == rows[i][k].real());
            CHECK(back[i][k].imag() == rows[i][k].imag());
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("chords csv carries parameters and coordinates") {
    const auto model = manifolds::sinusoid_model(3);
    const auto chords = manifolds::sample_chords(model, 16, 2);
    const std::string path = "tmp_chords.csv";
    io::write_chords_csv(path, chords);
    const auto text = io::read_text_file(path);
    CHECK(text.rfind("theta1,theta2,re1,im1,re2,im2,re3,im3\n", 0) == 0);
    // reuse the grid reader: same layout, two parameter columns
    const auto as_grid = io::read_grid_model_csv(path, "chords");
    CHECK(as_grid.intrinsic_dim() == 2);
    CHECK(as_grid.ambient_complex() == 3);
    CHECK(as_grid.grid_size() == 16);
    for (std::int64_t i = 0; i < 16; ++i) {
        const auto pt = as_grid.grid_point(i);
        const auto u = chords.chord(i);
        for (std::int64_t k = 0; k < 3; ++k) {
            CHECK(pt[static_cast<std::size_t>(k)] == u[static_cast<std::size_t>(k)]);
        }
        CHECK(as_grid.grid_theta(i)[0] == chords.pair(i)[0]);
        CHECK(as_grid.grid_theta(i)[1] == chords.pair(i)[1]);
    }
    std::remove(path.c_str());
}

TEST_CASE("grid csv reader validates its header") {
    const std::string path = "tmp_bad_grid.csv";
    io::write_text_file(path, "theta1,re1\n0.0,1.0\n");
    CHECK_THROWS_AS((void)io::read_grid_model_csv(path, "bad"), IoError);
    io::write_text_file(path, "re1,im1\n0.0,1.0\n");
    CHECK_THROWS_AS((void)io::read_grid_model_csv(path, "bad"), IoError);
    io::write_text_file(path, "theta1,re1,im1\n0.0,1.0\n");
    CHECK_THROWS_AS((void)io::read_grid_model_csv(path, "bad"), IoError);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)io::read_grid_model_csv("tmp_missing_grid.csv", "bad"), IoError);
}
