#include "doctest.h"
#include "generators.hpp"

#include "ellip/error.hpp"
#include "ellip/wrapmaps.hpp"

#include <cmath>

using namespace ellip;

TEST_CASE("strip map") {
    for (double x : {0.0, 0.25, 0.5, 1.0}) {
        auto p = eval_f0(x, 0);
        CHECK(p.r == doctest::Approx(1));
        CHECK(p.theta == doctest::Approx(0).epsilon(1e-12));
    }
    for (double y : {0.0, 1.0, 7.5}) {
        auto p = eval_f0(1, y);
        CHECK(p.r == doctest::Approx(1));
        CHECK(p.theta == doctest::Approx(y));
        auto q = eval_f0(0, y);
        CHECK(q.r == doctest::Approx(std::exp(-y)));
        CHECK(std::abs(q.theta) < 1e-12);
    }
    CHECK_THROWS_AS(eval_f0(1.5, 0), InvalidArgument);
    CHECK_THROWS_AS(eval_f0(0, -1), InvalidArgument);
}

TEST_CASE("hemisphere charts agree on the boundary circle") {
    for (int i = 0; i < 64; ++i) {
        Polar w{1, 2 * M_PI * i / 64};
        auto a = hemisphere_plus(w), b = hemisphere_minus(w);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(a[c] - b[c]) < 1e-12);
    }
}

TEST_CASE("sphere wrap") {
    for (double x : {0.0, 0.3, 1.0}) {
        auto p = eval_sphere_wrap(x, 0);
        CHECK(p[0] == doctest::Approx(1));
        CHECK(std::abs(p[1]) < 1e-12);
        CHECK(std::abs(p[2]) < 1e-12);
    }
    gen::Rng rng(61);
    std::uniform_real_distribution<double> ux(-20, 20), uy(-30, 30);
    for (int i = 0; i < 2000; ++i) {
        auto p = eval_sphere_wrap(ux(rng), uy(rng));
        CHECK(std::abs(std::hypot(p[0], p[1], p[2]) - 1) < 1e-12);
    }
    auto a = eval_sphere_wrap(0.7, 3), b = eval_sphere_wrap(4.7, 3);
    for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(b[c]));
}

TEST_CASE("torus collapse") {
    for (int d = 1; d <= 4; ++d) {
        auto c = eval_torus_collapse(std::vector<double>(static_cast<std::size_t>(d), 0.5));
        for (int i = 0; i < d; ++i) CHECK(std::abs(c[static_cast<std::size_t>(i)]) < 1e-12);
        CHECK(c.back() == doctest::Approx(-1));
        std::vector<double> face(static_cast<std::size_t>(d), 0.3);
        face[0] = 2.0;
        auto f = eval_torus_collapse(face);
        for (int i = 0; i < d; ++i) CHECK(f[static_cast<std::size_t>(i)] == 0);
        CHECK(f.back() == 1);
    }
}

TEST_CASE("join map reduces to the planar construction") {
    gen::Rng rng(62);
    std::uniform_real_distribution<double> ux(-6, 6), uy(-8, 8), uz(-3, 3);
    for (int n : {3, 4, 5}) {
        for (int i = 0; i < 500; ++i) {
            double x = ux(rng), y = uy(rng);
            std::vector<double> z;
            for (int k = 0; k < n - 2; ++k) z.push_back(uz(rng));
            auto f = eval_fn(x, y, z, n);
            auto s = eval_sphere_wrap(x, y);
            REQUIRE(f.size() == static_cast<std::size_t>(n + 1));
            CHECK(std::abs(f[0] - s[0]) < 1e-12);
            CHECK(std::abs(f[1] - s[1]) < 1e-12);
            double rest = 0;
            for (std::size_t k = 2; k < f.size(); ++k) rest += f[k] * f[k];
            CHECK(std::abs(std::sqrt(rest) - std::abs(s[2])) < 1e-12);
        }
    }
    CHECK_THROWS_AS(eval_fn(0, 0, {0.0}, 2), InvalidArgument);
}

TEST_CASE("Lipschitz estimates") {
    auto id = estimate_lipschitz(EvaluableMap::identity(2), {{-1, -1}, {1, 1}}, 0.05);
    CHECK(std::abs(id.value - 1) < 1e-9);
    auto c = estimate_lipschitz(EvaluableMap::constant(2), {{-1, -1}, {1, 1}}, 0.05);
    CHECK(c.value == 0);
    auto sw = EvaluableMap::sphere_wrap();
    auto coarse = estimate_lipschitz(sw, {{-2, -3}, {6, 3}}, 2e-2).value;
    auto fine = estimate_lipschitz(sw, {{-2, -3}, {6, 3}}, 1e-2).value;
    CHECK(std::isfinite(coarse));
    CHECK(std::abs(coarse - fine) < 0.05 * fine);
    auto f0 = estimate_lipschitz(EvaluableMap::f0(), {{-1, 10}, {1, 30}}, 0.05);
    CHECK(f0.value < 3);
}

TEST_CASE("asymptotic degree of simple maps") {
    auto id = asymptotic_degree(EvaluableMap::identity(2), {2, 4, 8}, 0.02);
    for (double v : id.normalized) CHECK(v == doctest::Approx(M_PI).epsilon(0.01));
    auto c = asymptotic_degree(EvaluableMap::constant(2), {2, 4}, 0.05);
    for (double v : c.normalized) CHECK(std::abs(v) < 1e-12);
    CHECK_THROWS_AS(asymptotic_degree(EvaluableMap::identity(2), {4, 2}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(asymptotic_degree(EvaluableMap::identity(2), {2}, 0), InvalidArgument);
    auto coarse = asymptotic_degree(EvaluableMap::identity(2), {1}, 0.5);
    CHECK_FALSE(coarse.warnings.empty());
}

TEST_CASE("torus collapse has degree one") {
    for (int d = 1; d <= 3; ++d) {
        double integral = integrate_jacobian(EvaluableMap::torus_collapse(d),
                                             {std::vector<double>(static_cast<std::size_t>(d), 0.0),
                                              std::vector<double>(static_cast<std::size_t>(d), 1.0)},
                                             d == 3 ? 60 : 400);
        double sphere_volume = d == 1 ? 2 * M_PI : d == 2 ? 4 * M_PI : 2 * M_PI * M_PI;
        CHECK(integral / sphere_volume == doctest::Approx(1).epsilon(0.02));
    }
}

TEST_CASE("Jacobian floors") {
    std::vector<Box> unit{{{0, 0}, {1, 1}}};
    CHECK(jacobian_floor(EvaluableMap::identity(2), unit, 400) == doctest::Approx(1));
    CHECK(jacobian_floor(EvaluableMap::constant(2), unit, 400) == 0);
    double floor = jacobian_floor(EvaluableMap::sphere_wrap(), strip_set(-1, 1, 1, 20), 10000);
    CHECK(floor > 0);
    // closed form on the upper strip: (pi/2)(1 - e^-y) sin(pi r / 2)
    double x = 0.5, y = 2.0;
    double r = x + std::exp(-y) * (1 - x);
    CHECK(volume_jacobian(EvaluableMap::sphere_wrap(), {x, y}) ==
          doctest::Approx(M_PI / 2 * (1 - std::exp(-y)) * std::sin(M_PI * r / 2)).epsilon(1e-6));
}

TEST_CASE("quasiregularity ratios") {
    auto samples = grid_samples({{-2, -2}, {2, 2}}, 40);
    auto id = quasiregularity_ratio(EvaluableMap::identity(2), samples);
    CHECK(id.sup == doctest::Approx(1).epsilon(1e-6));
    CHECK_FALSE(id.diverged);
    auto st = quasiregularity_ratio(EvaluableMap::radial_stretch(0.5), samples);
    CHECK(st.sup == doctest::Approx(1.5).epsilon(1e-4));
    auto sw = quasiregularity_ratio(EvaluableMap::sphere_wrap(), grid_samples({{-2, -5}, {6, 5}}, 60));
    CHECK(sw.used > 0);
    CHECK(sw.worst_point.size() == 2);
}

TEST_CASE("sphere wrap misses the poles and is orientation coherent") {
    auto sw = EvaluableMap::sphere_wrap();
    CHECK(min_excluded_locus_distance(sw, {{-2, -10}, {6, 10}}, 300) > 0);
    auto census = orientation_census(sw, {{-2, -10}, {6, 10}}, 200);
    CHECK(census.positive > 0);
    CHECK(census.negative == 0);
    auto fn = orientation_census(EvaluableMap::join_map(3), {{-2, -3, -1}, {6, 3, 1}}, 30);
    CHECK(fn.positive > 0);
    CHECK(fn.negative == 0);
}

TEST_CASE("join map has positive asymptotic degree") {
    auto rep = asymptotic_degree(EvaluableMap::join_map(3), {5, 10, 15}, 0.5);
    for (double v : rep.normalized) CHECK(v > 1);
    CHECK(rep.delimited().rfind("R,normalized", 0) == 0);
}
