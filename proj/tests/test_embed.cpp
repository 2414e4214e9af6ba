#include "doctest.h"

#include "ellip/embed.hpp"
#include "ellip/error.hpp"
#include "ellip/nilcoh.hpp"

using namespace ellip;

namespace {

AlgebraPresentation torus(int k) {
    GeneratorTable t;
    std::string top;
    for (int i = 1; i <= k; ++i) {
        t.push_back({"x" + std::to_string(i), 1});
        top += (i > 1 ? "*x" : "x") + std::to_string(i);
    }
    return AlgebraPresentation::make(t, {}, k, top);
}

AlgebraPresentation genus2() {
    return AlgebraPresentation::make({{"x1", 1}, {"y1", 1}, {"x2", 1}, {"y2", 1}},
                                     {"x1*y1 - x2*y2", "x1*x2", "x1*y2", "y1*x2", "y1*y2"}, 2, "x1*y1");
}

RingMorphism morphism(const AlgebraPresentation& a, int n, std::vector<Multivector> images) {
    return RingMorphism{a, n, std::move(images)};
}

void check_sound(const SearchResult& r) {
    REQUIRE(r.witness);
    CHECK(verify_morphism(*r.witness));
    CHECK(certify_injective(*r.witness));
    auto padded = r.witness->padded(r.witness->n + 1);
    CHECK(verify_morphism(padded));
    CHECK(certify_injective(padded));
}

} // namespace

TEST_CASE("verify_morphism and certify_injective") {
    auto s2 = AlgebraPresentation::make({{"w", 2}}, {}, 2, "w");
    CHECK(verify_morphism(morphism(s2, 2, {Multivector::blade(2, {1, 2})})));
    CHECK(certify_injective(morphism(s2, 2, {Multivector::blade(2, {1, 2})})));
    CHECK_FALSE(certify_injective(morphism(s2, 2, {Multivector(2)})));

    auto cp2 = AlgebraPresentation::make({{"w", 2}}, {}, 4, "w^2");
    auto w = Multivector::blade(4, {1, 2}) + Multivector::blade(4, {3, 4});
    CHECK(verify_morphism(morphism(cp2, 4, {w})));
    CHECK(certify_injective(morphism(cp2, 4, {w})));

    auto t3 = torus(3);
    auto degenerate = morphism(t3, 3, {Multivector::blade(3, {1}), Multivector::blade(3, {2}), Multivector::blade(3, {1})});
    CHECK(verify_morphism(degenerate));
    CHECK_FALSE(certify_injective(degenerate));

    CHECK_THROWS_AS(verify_morphism(morphism(s2, 2, {Multivector::blade(2, {1})})), DimensionMismatch);
}

TEST_CASE("degree-1 checks") {
    CHECK(torus_subalgebra_check(torus(3)).verdict == Verdict::Pass);
    auto t3 = basis_and_dims(torus(3));
    CHECK(rank_check(t3).verdict == Verdict::Pass);
    CHECK(rank_check(t3, 2).verdict == Verdict::Fail);
    CHECK(rank_check(t3, 5).verdict == Verdict::Pass);
    auto heis = lie_cohomology_presentation(NilLieAlgebra::heisenberg());
    CHECK(rank_check(basis_and_dims(heis)).verdict == Verdict::Fail);
    CHECK(torus_subalgebra_check(heis).verdict == Verdict::Fail);
    CHECK(exterior_subalgebra_check(basis_and_dims(heis)).verdict == Verdict::Fail);
}

TEST_CASE("Euler obstruction") {
    auto g = euler_obstruction(genus2());
    CHECK(g.verdict == Verdict::Fail);
    CHECK_FALSE(g.citation.empty());
    CHECK(euler_obstruction(torus(4)).verdict == Verdict::Pass);
    auto s2s2 = AlgebraPresentation::make({{"a", 2}, {"b", 2}}, {"a^2", "b^2"}, 4, "a*b");
    CHECK(euler_obstruction(s2s2).verdict == Verdict::Pass);
}

TEST_CASE("four-manifold battery") {
    CHECK(fourmanifold_battery(3, 3, Pi1Class::Trivial).verdict == Verdict::Pass);
    CHECK(fourmanifold_battery(4, 0, Pi1Class::Trivial).verdict == Verdict::Fail);
    CHECK(fourmanifold_battery(0, 4, Pi1Class::Finite).verdict == Verdict::Fail);
    auto t2s2 = fourmanifold_battery(1, 1, Pi1Class::Z2);
    CHECK(t2s2.verdict == Verdict::Pass);
    CHECK(t2s2.label.find("T^2") != std::string::npos);
    CHECK(fourmanifold_battery(0, 0, Pi1Class::Z3).verdict == Verdict::Fail);
    CHECK_THROWS_AS(fourmanifold_battery(-1, 0, Pi1Class::Trivial), InvalidArgument);
}

TEST_CASE("embedding search") {
    auto cp3 = AlgebraPresentation::make({{"w", 2}}, {}, 6, "w^3");
    auto r = search_embedding(cp3, 6);
    CHECK(r.status == SearchStatus::Certified);
    check_sound(r);
    std::vector<Multivector> imgs{r.witness->assignment[0]};
    auto top = wedge(wedge(imgs[0], imgs[0]), imgs[0]);
    CHECK(top.degree() == 6);

    auto g = search_embedding(genus2(), 2);
    CHECK(g.status == SearchStatus::Obstructed);
    REQUIRE(g.obstruction);
    CHECK_FALSE(g.witness);
}

TEST_CASE("property: search is sound and detects tori exactly") {
    for (int k = 1; k <= 4; ++k)
        for (int n = 1; n <= 5; ++n) {
            auto r = search_embedding(torus(k), n);
            if (k <= n) {
                CHECK(r.status == SearchStatus::Certified);
                check_sound(r);
            } else {
                CHECK(r.status != SearchStatus::Certified);
                CHECK_FALSE(r.witness);
            }
        }
}

TEST_CASE("property: failing necessary conditions never yield a certified embedding") {
    std::vector<AlgebraPresentation> failing{genus2(), lie_cohomology_presentation(NilLieAlgebra::heisenberg()),
                                             lie_cohomology_presentation(NilLieAlgebra::filiform(4)), torus(3)};
    std::vector<int> dims{2, 3, 4, 2};
    for (std::size_t i = 0; i < failing.size(); ++i) {
        SearchOptions opt;
        opt.budget = 4;
        auto r = search_embedding(failing[i], dims[i], opt);
        CHECK(r.status != SearchStatus::Certified);
        CHECK(r.status != SearchStatus::Numerical);
    }
}
