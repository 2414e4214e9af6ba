#include "doctest.h"
#include "generators.hpp"

#include "ellip/error.hpp"
#include "ellip/geom2d.hpp"

#include <cmath>

using namespace ellip;

namespace {

Samples tabulate(double (*f)(double), double a, double b, int count, bool log_spaced) {
    Samples s;
    for (int i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        double r = log_spaced ? a * std::pow(b / a, t) : a + (b - a) * t;
        s.r.push_back(r);
        s.value.push_back(f(r));
    }
    return s;
}

LatticeLoop concat(const LatticeLoop& a, const std::vector<Step>& path, const LatticeLoop& b) {
    LatticeLoop g = a;
    g.steps.insert(g.steps.end(), path.begin(), path.end());
    g.steps.insert(g.steps.end(), b.steps.begin(), b.steps.end());
    for (auto it = path.rbegin(); it != path.rend(); ++it) g.steps.push_back(inverse(*it));
    return g;
}

std::pair<std::int64_t, std::int64_t> endpoint(const std::vector<Step>& path) {
    std::int64_t x = 0, y = 0;
    for (auto s : path) {
        x += s == Step::R ? 1 : s == Step::L ? -1 : 0;
        y += s == Step::U ? 1 : s == Step::D ? -1 : 0;
    }
    return {x, y};
}

template <class Map>
Map nonzero(Map m) {
    std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
    return m;
}

} // namespace

TEST_CASE("Ahlfors classification of built-in profiles") {
    CHECK(ahlfors_classify(RadialProfile::euclidean()).type == SurfaceType::Parabolic);
    CHECK(ahlfors_classify(RadialProfile::hyperbolic()).type == SurfaceType::Hyperbolic);
    CHECK(ahlfors_classify(RadialProfile::inverse_square()).type == SurfaceType::Hyperbolic);
    CHECK(ahlfors_classify(RadialProfile::power_log(0.5)).type == SurfaceType::Hyperbolic);
    CHECK(ahlfors_classify(RadialProfile::power_log(0)).type == SurfaceType::Parabolic);
    auto spiky = ahlfors_classify(RadialProfile::spiky_plane());
    CHECK(spiky.type == SurfaceType::Parabolic);
    CHECK_FALSE(spiky.analytic);
}

TEST_CASE("Ahlfors classification of tabulated samples") {
    auto plane = tabulate([](double r) { return 2 * M_PI * r; }, 1, std::ldexp(1.0, 30), 2000, true);
    CHECK(ahlfors_classify(RadialProfile::tabulated(plane)).type == SurfaceType::Parabolic);
    auto quad = tabulate([](double r) { return 2 * M_PI * r * r; }, 1, std::ldexp(1.0, 30), 2000, true);
    CHECK(ahlfors_classify(RadialProfile::tabulated(quad)).type == SurfaceType::Hyperbolic);
    auto short_range = tabulate([](double r) { return r; }, 1, 8, 100, true);
    CHECK(ahlfors_classify(RadialProfile::tabulated(short_range)).type == SurfaceType::Inconclusive);
    Samples bad{{1, 2, 3}, {1, -1, 1}};
    CHECK_THROWS_AS(ahlfors_classify(RadialProfile::tabulated(bad)), InvalidArgument);
}

TEST_CASE("Milnor classification") {
    auto zero = tabulate([](double) { return 0.0; }, 2, 1e9, 200, true);
    CHECK(milnor_classify(zero).type == SurfaceType::Parabolic);
    auto inv_sq = tabulate([](double r) { return -1 / (r * r); }, 3, 1e9, 200, true);
    CHECK(milnor_classify(inv_sq).type == SurfaceType::Hyperbolic);
    auto half = tabulate([](double r) { return -1 / (2 * r * r * std::log(r)); }, 3, 1e9, 200, true);
    CHECK(milnor_classify(half).type == SurfaceType::Parabolic);
    Samples at_one{{1.0, 2.0}, {0, 0}};
    CHECK_THROWS_AS(milnor_classify(at_one), InvalidArgument);
}

TEST_CASE("property: Ahlfors and Milnor agree on the closed-form families") {
    for (const auto& p : {RadialProfile::euclidean(), RadialProfile::hyperbolic(), RadialProfile::power_log(0.5),
                          RadialProfile::power_log(-0.5), RadialProfile::power_log(0), RadialProfile::inverse_square()}) {
        CAPTURE(p.name());
        CHECK(ahlfors_classify(p).type == milnor_classify(family_curvature_samples(p)).type);
    }
}

TEST_CASE("curvature from profile samples") {
    auto flat = curvature_from_profile(tabulate([](double r) { return r; }, 1, 2, 1001, false));
    for (double k : flat.value) CHECK(std::abs(k) < 1e-6);
    auto hyp = curvature_from_profile(tabulate([](double r) { return std::sinh(r); }, 1, 2, 1001, false));
    for (double k : hyp.value) CHECK(std::abs(k + 1) < 1e-4);
    auto sph = curvature_from_profile(tabulate([](double r) { return std::sin(r); }, 0.5, 1.5, 1001, false));
    for (double k : sph.value) CHECK(std::abs(k - 1) < 1e-4);
    CHECK_THROWS_AS(curvature_from_profile(tabulate([](double r) { return r; }, 1, 2, 11, false)), InvalidArgument);
}

TEST_CASE("volume of revolution") {
    auto cyl = tabulate([](double) { return 1.0; }, 0, 1, 101, false);
    CHECK(revolution_volume(cyl, 2, 0, 1) == doctest::Approx(2 * M_PI).epsilon(1e-9));
    auto cone = tabulate([](double t) { return t; }, 0, 1, 1001, false);
    CHECK(revolution_volume(cone, 2, 0, 1) == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("nodule profile") {
    NoduleProfile p(3);
    CHECK(p.minimum(2) == doctest::Approx(std::pow(2.0, -2.0)));
    CHECK(p.maximum(2) == doctest::Approx(std::pow(2.0, -1.0)));
    CHECK(p(2.0) == doctest::Approx(p.minimum(2)));
    CHECK(p(2.5) == doctest::Approx(p.maximum(2)));
    for (int n = 2; n <= 6; ++n) {
        NoduleProfile q(n);
        double total = 0, prev = q.nodule_volume(0);
        total += prev;
        for (int k = 1; k <= 10; ++k) {
            double v = q.nodule_volume(k);
            CHECK(v / prev == doctest::Approx(0.5).epsilon(0.2));
            total += v;
            prev = v;
        }
        CHECK(total < 3 * q.nodule_volume(0));
    }
}

TEST_CASE("loop reduction") {
    auto sq = LatticeLoop::parse("RULD");
    CHECK(reduce_loop(sq).to_string() == "RULD");
    CHECK(reduce_loop(LatticeLoop::parse("RRLL")).length() == 0);
    auto spur = reduce_loop(LatticeLoop::parse("RUDULD"));
    CHECK(spur.to_string() == "RULD");
    CHECK_THROWS_AS(LatticeLoop::parse("RUX"), InvalidArgument);
}

TEST_CASE("turning numbers") {
    CHECK(turning_number(LatticeLoop::parse("RULD")) == 1);
    CHECK(turning_number(LatticeLoop::parse("URDL")) == -1);
    CHECK(turning_number(LatticeLoop::parse("RRULLD")) == 1);
    CHECK(turning_number(LatticeLoop::parse("RRULULDD")) == 1);
    CHECK_THROWS_AS(turning_number(LatticeLoop::parse("RU")), PreconditionError);
    CHECK_THROWS_AS(turning_number(LatticeLoop::parse("RLRL")), PreconditionError);
    CHECK_THROWS_AS(turning_number(LatticeLoop{}), PreconditionError);
    // a loop around the square, far from it, is unchanged relative to it
    auto big = LatticeLoop::parse("RRRRRRUUUUUULLLLLLDDDDDD", -3, -3);
    CHECK(turning_number_rel_square(big, 1) == turning_number(big));
}

TEST_CASE("filling cycles") {
    LatticeChain1 z;
    z.add_loop(LatticeLoop::parse("RULD"));
    auto c = fill_cycle(z);
    CHECK(c.coeff.size() == 1);
    CHECK(c.coeff.at({0, 0}) == 1);
    CHECK(c.mass() == 1);
    LatticeChain1 twice;
    twice.add_loop(LatticeLoop::parse("RULD"), 2);
    CHECK(fill_cycle(twice).coeff.at({0, 0}) == 2);
    CHECK(fill_cycle(twice).mass() == 2);
    LatticeChain1 ell;
    ell.add_loop(LatticeLoop::parse("RRULULDD"));
    auto e = fill_cycle(ell);
    CHECK(e.coeff == std::map<Cell, std::int64_t>{{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}});
    LatticeChain1 open;
    open.add_loop(LatticeLoop::parse("RU"));
    CHECK_FALSE(open.is_cycle());
    CHECK_THROWS_AS(fill_cycle(open), PreconditionError);
}

TEST_CASE("property: turning number is at most a quarter of the length") {
    gen::Rng rng(51);
    for (int trial = 0; trial < 5000; ++trial) {
        auto l = reduce_loop(gen::closed_loop(rng, gen::uniform_int(rng, 1, 10)));
        if (l.length() == 0) continue;
        auto t = turning_number(l);
        CHECK(abs(t) * 4 <= static_cast<long>(l.length()));
    }
}

TEST_CASE("property: concatenation changes the turning number by at most one") {
    gen::Rng rng(52);
    int tested = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        auto a = reduce_loop(gen::closed_loop(rng, gen::uniform_int(rng, 2, 6)));
        auto path = gen::walk(rng, gen::uniform_int(rng, 0, 4));
        auto [x, y] = endpoint(path);
        auto b = reduce_loop(gen::closed_loop(rng, gen::uniform_int(rng, 2, 6)));
        if (a.length() == 0 || b.length() == 0 || a.x0 != 0 || a.y0 != 0 || b.x0 != 0 || b.y0 != 0) continue;
        b.x0 = x;
        b.y0 = y;
        auto g = reduce_loop(concat(a, path, b));
        if (g.length() == 0) continue;
        ++tested;
        CHECK(abs(turning_number(g) - turning_number(a) - turning_number(b)) <= 1);
    }
    CHECK(tested > 500);
}

TEST_CASE("property: fillings of random cycles") {
    gen::Rng rng(53);
    for (int trial = 0; trial < 500; ++trial) {
        LatticeChain1 z, w;
        int loops = gen::uniform_int(rng, 1, 3);
        for (int i = 0; i < loops; ++i)
            z.add_loop(gen::closed_loop(rng, gen::uniform_int(rng, 2, 12), gen::uniform_int(rng, -3, 3), gen::uniform_int(rng, -3, 3)),
                       gen::uniform_int(rng, 1, 2) * (gen::uniform_int(rng, 0, 1) ? 1 : -1));
        w.add_loop(gen::closed_loop(rng, 8));
        REQUIRE(z.is_cycle());
        auto c = fill_cycle(z);
        auto bz = c.boundary();
        CHECK(nonzero(bz.coeff) == nonzero(z.coeff));
        CHECK(static_cast<double>(z.mass()) + 1e-9 >= c.isoperimetric_bound());
        LatticeChain1 sum = z;
        sum += w;
        auto cs = fill_cycle(sum), cw = fill_cycle(w);
        for (const auto& [cell, v] : cw.coeff) c.coeff[cell] += v;
        CHECK(nonzero(cs.coeff) == nonzero(c.coeff));
    }
}
