#include "doctest.h"
#include "generators.hpp"

#include "ellip/error.hpp"
#include "ellip/exterior.hpp"
#include "ellip/polynomial.hpp"

#include <algorithm>

using namespace ellip;

namespace {

// Sign of the permutation sorting the concatenation, by counting inversions.
int parity_oracle(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> all = a;
    all.insert(all.end(), b.begin(), b.end());
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j]) return 0;
    int inv = 0;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] > all[j]) ++inv;
    return inv % 2 ? -1 : 1;
}

// Wedge by expanding blade pairs with the inversion oracle.
Multivector wedge_oracle(const Multivector& a, const Multivector& b) {
    Multivector out(a.dimension());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            int s = parity_oracle(Blade(ma).indices(), Blade(mb).indices());
            if (s != 0) out.add_term(Blade(ma | mb), ca * cb * s);
        }
    return out;
}

} // namespace

TEST_CASE("wedge of basis vectors") {
    auto e1 = Multivector::blade(3, {1});
    auto e2 = Multivector::blade(3, {2});
    CHECK(wedge(e1, e2) == Multivector::blade(3, {1, 2}));
    CHECK(wedge(e1, e1).is_zero());
    CHECK(wedge(Multivector::blade(3, {1, 3}), e2) == Multivector::blade(3, {1, 2, 3}, -1));
}

TEST_CASE("top pairing") {
    CHECK(top_pairing(Multivector::blade(4, {1}), Multivector::blade(4, {2, 3, 4})) == 1);
    CHECK(top_pairing(Multivector::blade(4, {1}), Multivector::blade(4, {1, 3, 4})) == 0);
    auto w = Multivector::blade(4, {1, 2}) + Multivector::blade(4, {3, 4});
    CHECK(top_pairing(w, w) == 2);
}

TEST_CASE("graded dimension") {
    CHECK(graded_dimension(4, 2) == 6);
    CHECK(graded_dimension(7, 0) == 1);
    CHECK(graded_dimension(6, 3) == 20);
    CHECK_THROWS_AS(graded_dimension(3, 4), InvalidArgument);
    CHECK(blades_of_degree(5, 2).size() == 10);
}

TEST_CASE("polynomial evaluation") {
    auto table = std::make_shared<const GeneratorTable>(GeneratorTable{{"w", 2}});
    auto w = Multivector::blade(4, {1, 2}) + Multivector::blade(4, {3, 4});
    std::vector<Multivector> as{w};
    CHECK(evaluate_polynomial(parse_polynomial("w^2", table), as) == Multivector::blade(4, {1, 2, 3, 4}, 2));
    CHECK(evaluate_polynomial(parse_polynomial("w", table), as) == w);

    auto t2 = std::make_shared<const GeneratorTable>(GeneratorTable{{"a", 1}, {"b", 1}});
    std::vector<Multivector> same{Multivector::blade(3, {1}), Multivector::blade(3, {1})};
    CHECK(evaluate_polynomial(parse_polynomial("a*b", t2), same).is_zero());
    std::vector<Multivector> wrong{Multivector::blade(3, {1, 2}), Multivector::blade(3, {1})};
    CHECK_THROWS_AS(evaluate_polynomial(parse_polynomial("a*b", t2), wrong), DimensionMismatch);
}

TEST_CASE("blade indices are validated") {
    std::vector<int> bad{2, 1};
    CHECK_THROWS(Blade::from_indices(bad, 3));
    std::vector<int> out_of_range{1, 5};
    CHECK_THROWS(Blade::from_indices(out_of_range, 4));
}

TEST_CASE("property: wedge matches the permutation-sign oracle and graded commutativity") {
    gen::Rng rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        int n = gen::uniform_int(rng, 1, 6);
        int j = gen::uniform_int(rng, 0, n), k = gen::uniform_int(rng, 0, n);
        auto a = gen::homogeneous(rng, n, j), b = gen::homogeneous(rng, n, k);
        auto ab = wedge(a, b);
        CHECK(ab == wedge_oracle(a, b));
        CHECK(ab == wedge(b, a) * Rational((j * k) % 2 ? -1 : 1));
    }
}

TEST_CASE("property: wedge is associative") {
    gen::Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        int n = gen::uniform_int(rng, 1, 6);
        auto a = gen::homogeneous(rng, n, gen::uniform_int(rng, 0, n)) + gen::homogeneous(rng, n, gen::uniform_int(rng, 0, n));
        auto b = gen::homogeneous(rng, n, gen::uniform_int(rng, 0, n));
        auto c = gen::homogeneous(rng, n, gen::uniform_int(rng, 0, n));
        CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
    }
}

TEST_CASE("property: top pairing is a signed permutation on blade bases") {
    for (int n = 1; n <= 6; ++n)
        for (int k = 0; k <= n; ++k) {
            auto left = blades_of_degree(n, k), right = blades_of_degree(n, n - k);
            for (const auto& a : left) {
                int nonzero = 0;
                for (const auto& b : right) {
                    Rational p = top_pairing(Multivector::blade(n, a), Multivector::blade(n, b));
                    if (!is_zero(p)) {
                        ++nonzero;
                        CHECK(abs(p) == 1);
                        CHECK((a.mask() | b.mask()) == Blade::top(n).mask());
                    }
                }
                CHECK(nonzero == 1);
            }
        }
}
