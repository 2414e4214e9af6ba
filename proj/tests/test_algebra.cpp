#include "doctest.h"
#include "generators.hpp"

#include "ellip/algebra.hpp"
#include "ellip/error.hpp"

#include <map>

using namespace ellip;

namespace {

AlgebraPresentation genus2() {
    return AlgebraPresentation::make({{"x1", 1}, {"y1", 1}, {"x2", 1}, {"y2", 1}},
                                     {"x1*y1 - x2*y2", "x1*x2", "x1*y2", "y1*x2", "y1*y2"}, 2, "x1*y1");
}

AlgebraPresentation connected_sum_s2xs2(int r) {
    GeneratorTable t;
    std::vector<std::string> rel;
    for (int i = 1; i <= r; ++i) {
        t.push_back({"a" + std::to_string(i), 2});
        t.push_back({"b" + std::to_string(i), 2});
    }
    for (int i = 1; i <= r; ++i) {
        rel.push_back("a" + std::to_string(i) + "^2");
        rel.push_back("b" + std::to_string(i) + "^2");
        if (i > 1) rel.push_back("a" + std::to_string(i) + "*b" + std::to_string(i) + " - a1*b1");
        for (int j = i + 1; j <= r; ++j)
            for (const char* p : {"a", "b"})
                for (const char* q : {"a", "b"})
                    rel.push_back(std::string(p) + std::to_string(i) + "*" + q + std::to_string(j));
    }
    return AlgebraPresentation::make(t, rel, 4, "a1*b1");
}

// Ranks by growing the ideal one generator at a time:
// I_k = span(relations of degree k, g * I_(k - deg g)).
std::vector<std::size_t> ranks_oracle(const AlgebraPresentation& a) {
    const auto& table = a.generators;
    std::vector<std::vector<GradedPolynomial>> ideal(static_cast<std::size_t>(a.n) + 1);
    std::vector<std::size_t> out;
    for (int k = 0; k <= a.n; ++k) {
        auto monos = monomials_of_degree(k, *table);
        std::map<Monomial, std::size_t> index;
        for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
        std::vector<GradedPolynomial> span;
        for (const auto& r : a.relations)
            if (r.degree() == k) span.push_back(r);
        for (std::size_t g = 0; g < table->size(); ++g) {
            int d = (*table)[g].degree;
            if (d > k) continue;
            for (const auto& p : ideal[static_cast<std::size_t>(k - d)])
                span.push_back(GradedPolynomial::generator(table, g) * p);
        }
        std::vector<std::vector<Rational>> rows;
        for (const auto& p : span) {
            std::vector<Rational> row(monos.size());
            for (const auto& [m, c] : p.terms()) row[index.at(m)] = c;
            rows.push_back(row);
        }
        ideal[static_cast<std::size_t>(k)] = span;
        out.push_back(monos.size() - row_echelon(rows, monos.size()).rank());
    }
    return out;
}

GradedPolynomial random_homogeneous(gen::Rng& rng, const std::shared_ptr<const GeneratorTable>& t, int k) {
    GradedPolynomial p(t);
    auto monos = monomials_of_degree(k, *t);
    if (monos.empty()) return p;
    int terms = gen::uniform_int(rng, 1, 3);
    for (int i = 0; i < terms; ++i)
        p.add_term(monos[static_cast<std::size_t>(gen::uniform_int(rng, 0, static_cast<int>(monos.size()) - 1))],
                   gen::small_rational(rng, 3, 2));
    return p;
}

} // namespace

TEST_CASE("ranks of small presentations") {
    auto s2 = AlgebraPresentation::make({{"w", 2}}, {}, 2);
    CHECK(basis_and_dims(s2).ranks() == std::vector<std::size_t>{1, 0, 1});
    auto t2 = AlgebraPresentation::make({{"x", 1}, {"y", 1}}, {}, 2);
    CHECK(basis_and_dims(t2).ranks() == std::vector<std::size_t>{1, 2, 1});
    auto cp2 = AlgebraPresentation::make({{"w", 2}}, {}, 4);
    CHECK(basis_and_dims(cp2).ranks() == std::vector<std::size_t>{1, 0, 1, 0, 1});
    CHECK(basis_and_dims(genus2()).ranks() == std::vector<std::size_t>{1, 4, 1});
}

TEST_CASE("Euler characteristic") {
    CHECK(euler_characteristic(AlgebraPresentation::make({{"x", 1}, {"y", 1}}, {}, 2)) == 0);
    CHECK(euler_characteristic(genus2()) == -2);
    CHECK(euler_characteristic(AlgebraPresentation::make({{"w", 2}}, {}, 4)) == 3);
}

TEST_CASE("Poincare duality") {
    CHECK(check_poincare_duality(AlgebraPresentation::make({{"x", 1}, {"y", 1}}, {}, 2)).holds);
    auto bad = check_poincare_duality(AlgebraPresentation::make({{"x", 1}}, {}, 2));
    CHECK_FALSE(bad.holds);
    CHECK(bad.failing_degree == 1);
    CHECK(check_poincare_duality(connected_sum_s2xs2(3)).holds);
    CHECK(basis_and_dims(connected_sum_s2xs2(3)).ranks() == std::vector<std::size_t>{1, 0, 6, 0, 1});
}

TEST_CASE("fundamental class in the ideal is rejected") {
    CHECK_THROWS_AS(basis_and_dims(AlgebraPresentation::make({{"w", 2}}, {"w^2"}, 4, "w^2")), DegeneratePresentation);
}

TEST_CASE("quotient by a degree-1 element") {
    auto full3 = ConcreteSubalgebra::generated_by(
        3, {Multivector::blade(3, {1}), Multivector::blade(3, {2}), Multivector::blade(3, {3})});
    auto q = quotient_by_degree1(full3, Multivector::blade(3, {1}));
    CHECK(q.dim_quotient == 4);
    CHECK(q.dim_ideal == 4);
    CHECK(q.quotient_duality.holds);

    auto full1 = ConcreteSubalgebra::generated_by(1, {Multivector::blade(1, {1})});
    auto q1 = quotient_by_degree1(full1, Multivector::blade(1, {1}));
    CHECK(q1.dim_quotient == 1);
    CHECK(q1.dim_ideal == 1);

    auto small = ConcreteSubalgebra::from_span(4, {Multivector::scalar(4, 1), Multivector::blade(4, {1}),
                                                    Multivector::blade(4, {2}), Multivector::blade(4, {1, 2})});
    auto q2 = quotient_by_degree1(small, Multivector::blade(4, {1}));
    CHECK(q2.dim_quotient == 2);
    CHECK(q2.dim_ideal == 2);

    CHECK_THROWS_AS(quotient_by_degree1(full3, Multivector(3)), InvalidArgument);
    CHECK_THROWS_AS(quotient_by_degree1(full3, Multivector::blade(3, {1, 2})), PreconditionError);
}

TEST_CASE("from_span rejects non-subalgebras") {
    CHECK_THROWS_AS(ConcreteSubalgebra::from_span(3, {Multivector::scalar(3, 1), Multivector::blade(3, {1}),
                                                       Multivector::blade(3, {2})}),
                    PreconditionError);
}

TEST_CASE("property: basis_and_dims agrees with the ideal-closure oracle") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 150; ++trial) {
        int n = gen::uniform_int(rng, 1, 6);
        int r = gen::uniform_int(rng, 1, 4);
        auto table = std::make_shared<GeneratorTable>();
        for (int i = 0; i < r; ++i) table->push_back({"g" + std::to_string(i), gen::uniform_int(rng, 1, std::min(3, n))});
        AlgebraPresentation a;
        a.generators = table;
        a.n = n;
        int rels = gen::uniform_int(rng, 0, 3);
        for (int i = 0; i < rels; ++i) {
            auto p = random_homogeneous(rng, a.generators, gen::uniform_int(rng, 1, n));
            if (!p.is_zero()) a.relations.push_back(p);
        }
        CHECK(basis_and_dims(a).ranks() == ranks_oracle(a));
    }
}

TEST_CASE("property: quotients of PD subalgebras by degree-1 elements") {
    gen::Rng rng(22);
    for (int trial = 0; trial < 120; ++trial) {
        int n = gen::uniform_int(rng, 1, 5);
        auto a = ConcreteSubalgebra::generated_by(n, gen::pd_subalgebra_generators(rng, n));
        REQUIRE(a.check_poincare_duality().holds);
        REQUIRE(a.dim(1) > 0);
        CHECK(a.euler_characteristic() == 0);
        Multivector x(n);
        while (x.is_zero())
            for (const auto& b : a.basis(1)) x += b * gen::small_rational(rng, 2, 1);
        auto q = quotient_by_degree1(a, x);
        CHECK(q.dim_quotient == q.dim_ideal);
        CHECK(q.dim_quotient + q.dim_ideal == a.total_dim());
        CHECK(q.quotient_duality.holds);
    }
}
