#include "doctest.h"
#include "generators.hpp"

#include "ellip/error.hpp"
#include "ellip/quadform.hpp"

#include <cstdlib>

using namespace ellip;

namespace {

long squarefree(long a) {
    for (long d = 2; d * d <= std::labs(a); ++d)
        while (a % (d * d) == 0) a /= d * d;
    return a;
}

// Primitive solutions of z^2 = a x^2 + b y^2 modulo p^k, with a, b reduced
// to squarefree integers (k = 2 suffices for odd p, 6 is ample for p = 2).
int hilbert_oracle(long a, long b, long p) {
    a = squarefree(a);
    b = squarefree(b);
    const long k = p == 2 ? 6 : 2;
    long mod = 1;
    for (long i = 0; i < k; ++i) mod *= p;
    std::vector<char> square_any(static_cast<std::size_t>(mod)), square_unit(static_cast<std::size_t>(mod));
    for (long z = 0; z < mod; ++z) {
        square_any[static_cast<std::size_t>(z * z % mod)] = 1;
        if (z % p) square_unit[static_cast<std::size_t>(z * z % mod)] = 1;
    }
    auto md = [&](long v) { return ((v % mod) + mod) % mod; };
    for (long x = 0; x < mod; ++x)
        for (long y = 0; y < mod; ++y) {
            long t = md(md(a) * (x * x % mod) + md(b) * (y * y % mod));
            bool unit_xy = x % p || y % p;
            if (unit_xy ? square_any[static_cast<std::size_t>(t)] : square_unit[static_cast<std::size_t>(t)]) return 1;
        }
    return -1;
}

QuadraticForm cup_form_y() { return QuadraticForm::diagonal({2, 1, 1, -1, -1, -1}); }

Rational to_q(long v) { return Rational(v); }

} // namespace

TEST_CASE("diagonalization") {
    auto d = diagonalize(cup_form_y());
    CHECK(d.entries == std::vector<Rational>{2, 1, 1, -1, -1, -1});
    QuadraticForm h(Matrix::from_rows({{0, 1}, {1, 0}}, 2));
    auto dh = diagonalize(h);
    REQUIRE(dh.entries.size() == 2);
    CHECK(dh.entries[0] * dh.entries[1] < 0);
    CHECK(squarefree_part(-dh.entries[0] * dh.entries[1]) == 1);
    CHECK(dh.transform.transpose() * h.gram() * dh.transform == Matrix::from_rows({{dh.entries[0], 0}, {0, dh.entries[1]}}, 2));
    auto dz = diagonalize(QuadraticForm(Matrix(3, 3)));
    CHECK(dz.entries == std::vector<Rational>{0, 0, 0});
}

TEST_CASE("discriminant and signature") {
    CHECK(discriminant(cup_form_y()) == -2);
    CHECK(discriminant(wedge_pairing_form(4)) == -1);
    CHECK(discriminant(QuadraticForm(Matrix::identity(5))) == 1);
    CHECK(signature(cup_form_y()) == std::pair{3, 3});
    CHECK(signature(wedge_pairing_form(4)) == std::pair{3, 3});
    CHECK(signature(QuadraticForm(Matrix::identity(4))) == std::pair{4, 0});
    CHECK_THROWS_AS(discriminant(QuadraticForm(Matrix(2, 2))), DegenerateForm);
}

TEST_CASE("Hilbert symbols and Hasse invariants") {
    CHECK(hilbert_symbol(-1, -1, kInfinity) == -1);
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    CHECK(hilbert_symbol(-1, -1, 3) == 1);
    CHECK(hilbert_symbol(1, 7, 7) == 1);
    CHECK(hilbert_symbol(Rational(1, 3), -5, 5) == hilbert_symbol(3, -5, 5));
    CHECK(hasse_invariant(QuadraticForm::diagonal({1, 1}), 2) == 1);
    CHECK(hasse_invariant(QuadraticForm::diagonal({-1, -1}), kInfinity) == -1);
    const std::vector<long> d{2, 1, 1, -1, -1, -1};
    int expected = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) expected *= hilbert_oracle(d[i], d[j], 2);
    CHECK(hasse_invariant(cup_form_y(), 2) == expected);
}

TEST_CASE("rational equivalence") {
    CHECK_FALSE(rationally_equivalent(cup_form_y(), wedge_pairing_form(4)));
    CHECK(rationally_equivalent(cup_form_y(), cup_form_y()));
    CHECK(rationally_equivalent(QuadraticForm::diagonal({1, -1}), QuadraticForm(Matrix::from_rows({{0, 1}, {1, 0}}, 2))));
    CHECK_FALSE(rationally_equivalent(QuadraticForm::diagonal({1, 1}), QuadraticForm::diagonal({3, 3})) !=
                rationally_equivalent(QuadraticForm::diagonal({3, 3}), QuadraticForm::diagonal({1, 1})));
    CHECK_FALSE(rationally_equivalent(QuadraticForm::diagonal({1, 1}), QuadraticForm::diagonal({3, 3})));
    CHECK(rationally_equivalent(QuadraticForm::diagonal({1, 1}), QuadraticForm::diagonal({2, 2})));
}

TEST_CASE("wedge pairing forms") {
    CHECK(wedge_pairing_form(2).gram() == Matrix::from_rows({{0, 1}, {1, 0}}, 2));
    auto f4 = wedge_pairing_form(4);
    REQUIRE(f4.dimension() == 6);
    int nonzero = 0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (!is_zero(f4.gram()(i, j))) {
                ++nonzero;
                CHECK(i != j);
                CHECK(abs(f4.gram()(i, j)) == 1);
            }
    CHECK(nonzero == 6);
    auto f6 = wedge_pairing_form(6);
    CHECK(f6.dimension() == 20);
    CHECK(signature(f6) == std::pair{10, 10});
}

TEST_CASE("property: Hilbert symbol matches the mod p^k oracle") {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
        for (long a = -20; a <= 20; ++a)
            for (long b = -20; b <= 20; ++b) {
                if (a == 0 || b == 0) continue;
                if (hilbert_symbol(to_q(a), to_q(b), p) != hilbert_oracle(a, b, p)) {
                    FAIL_CHECK("mismatch at a=" << a << " b=" << b << " p=" << p);
                }
            }
}

TEST_CASE("property: Hilbert reciprocity") {
    gen::Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        Rational a = gen::nonzero_rational(rng, 30, 12), b = gen::nonzero_rational(rng, 30, 12);
        Integer m = 2 * a.get_num() * a.get_den() * b.get_num() * b.get_den();
        int product = hilbert_symbol(a, b, kInfinity);
        for (const auto& p : prime_factors(m)) product *= hilbert_symbol(a, b, p.get_si());
        CHECK(product == 1);
    }
}

TEST_CASE("property: discriminant, signature and Hasse invariants are congruence invariants") {
    gen::Rng rng(32);
    for (int trial = 0; trial < 80; ++trial) {
        std::size_t n = static_cast<std::size_t>(gen::uniform_int(rng, 1, 6));
        std::vector<Rational> diag;
        for (std::size_t i = 0; i < n; ++i) diag.push_back(gen::nonzero_rational(rng, 7, 3));
        QuadraticForm f = QuadraticForm::diagonal(diag);
        Matrix t = gen::unimodular(rng, n);
        QuadraticForm g(t.transpose() * f.gram() * t);
        CHECK(discriminant(f) == discriminant(g));
        CHECK(signature(f) == signature(g));
        for (Place v : {kInfinity, 2L, 3L, 5L, 7L}) CHECK(hasse_invariant(f, v) == hasse_invariant(g, v));
        CHECK(rationally_equivalent(f, g));
    }
}

TEST_CASE("property: rational equivalence is an equivalence relation") {
    gen::Rng rng(33);
    std::vector<QuadraticForm> forms;
    for (int i = 0; i < 24; ++i) {
        std::vector<Rational> diag;
        for (int j = 0; j < 3; ++j) diag.push_back(Rational(gen::uniform_int(rng, 1, 3) * (gen::uniform_int(rng, 0, 1) ? 1 : -1)));
        forms.push_back(QuadraticForm::diagonal(diag));
    }
    for (const auto& f : forms) CHECK(rationally_equivalent(f, f));
    for (const auto& f : forms)
        for (const auto& g : forms) {
            CHECK(rationally_equivalent(f, g) == rationally_equivalent(g, f));
            if (!rationally_equivalent(f, g)) continue;
            for (const auto& h : forms)
                if (rationally_equivalent(g, h)) CHECK(rationally_equivalent(f, h));
        }
}
