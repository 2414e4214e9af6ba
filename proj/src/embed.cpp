#include "ellip/embed.hpp"

#include "ellip/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace ellip {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Info: return "info";
    }
    return "?";
}

std::string_view to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Certified: return "found (certified)";
    case SearchStatus::Numerical: return "numerical (uncertified)";
    case SearchStatus::NotFound: return "not found";
    case SearchStatus::Obstructed: return "obstructed";
    }
    return "?";
}

std::string RingMorphism::to_string() const {
    std::string out;
    const auto& table = *source.generators;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (i)
            out += "; ";
        out += table[i].name + " -> " + (i < assignment.size() ? assignment[i].to_string() : "?");
    }
    return out;
}

RingMorphism RingMorphism::padded(int m) const {
    RingMorphism r{source, m, {}};
    for (const auto& v : assignment)
        r.assignment.push_back(v.embedded(m));
    return r;
}

namespace {

int max_generator_degree(const GeneratorTable& t) {
    int d = 0;
    for (const auto& g : t)
        d = std::max(d, g.degree);
    return d;
}

void check_shape(const AlgebraPresentation& a, int n, std::size_t count) {
    if (count != a.generator_count())
        throw DimensionMismatch(fmt::format("morphism assigns {} images to {} generators", count, a.generator_count()));
    if (n < 0 || n > kMaxExteriorDimension)
        throw DimensionMismatch("target dimension out of range");
}

} // namespace

bool verify_morphism(const RingMorphism& m) {
    const auto& a = m.source;
    check_shape(a, m.n, m.assignment.size());
    const auto& table = *a.generators;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (m.assignment[i].dimension() != m.n)
            throw DimensionMismatch("image of '" + table[i].name + "' lives in the wrong exterior algebra");
        if (!m.assignment[i].is_homogeneous(table[i].degree))
            throw DimensionMismatch("image of '" + table[i].name + "' has the wrong degree");
    }
    for (const auto& r : a.relations)
        if (!evaluate_polynomial(r, m.assignment).is_zero())
            return false;
    if (a.truncate_above_n && m.n > a.n) {
        const int hi = std::min(m.n, a.n + max_generator_degree(table));
        for (int k = a.n + 1; k <= hi; ++k)
            for (const auto& mono : monomials_of_degree(k, table))
                if (!evaluate_polynomial(GradedPolynomial::monomial(a.generators, mono), m.assignment).is_zero())
                    return false;
    }
    return true;
}

bool certify_injective(const RingMorphism& m) {
    const GradedBasis basis = basis_and_dims(m.source);
    const auto pd = check_poincare_duality(basis);
    if (!pd.holds)
        throw PreconditionError("source fails Poincare duality: " + pd.detail);
    if (!verify_morphism(m))
        throw PreconditionError("assignment does not define a ring homomorphism");
    return !evaluate_polynomial(*basis.fundamental_class(), m.assignment).is_zero();
}

// ---------------------------------------------------------------------------
// Necessary conditions

CheckResult rank_check(const GradedBasis& a, std::optional<int> target) {
    const int n = target.value_or(a.top_degree());
    const int k = static_cast<int>(a.rank(1));
    CheckResult r;
    r.id = "rank";
    r.citation = "corollary: rank of pi1 is never n-1";
    r.witness.emplace_back("b1", std::to_string(k));
    r.witness.emplace_back("n", std::to_string(n));
    if (k > n) {
        r.verdict = Verdict::Fail;
        r.summary = fmt::format("{} independent degree-1 classes cannot be independent in Lambda^1 R^{}", k, n);
        r.citation = "theorem: injective ring map into Lambda R^n";
    } else if (k == n - 1 && k >= 1 && n == a.top_degree()) {
        r.verdict = Verdict::Fail;
        r.summary = fmt::format("b1 = n - 1 = {}: the wedge of the degree-1 images must pair nontrivially with a "
                                "1-form, which would need the missing coordinate",
                                k);
    } else {
        r.verdict = Verdict::Pass;
        r.summary = fmt::format("b1 = {} with n = {}", k, n);
    }
    return r;
}

CheckResult exterior_subalgebra_check(const GradedBasis& a) {
    const int k = static_cast<int>(a.rank(1));
    CheckResult r;
    r.id = "torus_subalgebra";
    r.citation = "corollary: essential map to the Albanese torus";
    r.verdict = Verdict::Pass;
    r.summary = fmt::format("H^1 (rank {}) generates an exterior algebra", k);
    if (k < 2)
        return r;
    const auto table = a.generators();
    std::vector<GradedPolynomial> ones;
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i)
        ones.push_back(a.representative(1, i));

    std::vector<std::vector<int>> subsets{{}};
    for (int j = 1; j <= k; ++j) {
        std::vector<std::vector<int>> next;
        for (const auto& s : subsets)
            for (int i = s.empty() ? 0 : s.back() + 1; i < k; ++i) {
                auto t = s;
                t.push_back(i);
                next.push_back(std::move(t));
            }
        subsets = std::move(next);
        if (j < 2)
            continue;
        std::vector<GradedPolynomial> products;
        Matrix coords;
        for (const auto& s : subsets) {
            GradedPolynomial p = GradedPolynomial::constant(table, 1);
            for (int i : s)
                p = p * ones[static_cast<std::size_t>(i)];
            products.push_back(p);
            auto c = a.coordinates(p);
            if (c.empty())
                c.assign(a.rank(j), Rational(0));
            if (a.rank(j) == 0)
                c.assign(1, Rational(0));
            coords.append_row(c);
        }
        const std::size_t rk = rank(coords);
        if (rk < subsets.size()) {
            const auto kernel = nullspace(coords.transpose());
            GradedPolynomial w(table);
            for (std::size_t i = 0; i < products.size(); ++i)
                if (!is_zero(kernel.front()[i]))
                    w += products[i] * kernel.front()[i];
            r.verdict = Verdict::Fail;
            r.summary = fmt::format("products of {} degree-1 classes span {} < binomial({}, {}) = {} dimensions", j,
                                    rk, k, j, subsets.size());
            r.witness.emplace_back("degree", std::to_string(j));
            r.witness.emplace_back("rank", std::to_string(rk));
            r.witness.emplace_back("expected", std::to_string(subsets.size()));
            r.witness.emplace_back("kernel_element", w.to_string() + " = 0");
            return r;
        }
    }
    return r;
}

CheckResult torus_subalgebra_check(const GradedBasis& a, std::optional<int> target) {
    auto r = rank_check(a, target);
    if (r.verdict == Verdict::Fail) {
        r.id = "torus_subalgebra";
        return r;
    }
    return exterior_subalgebra_check(a);
}

CheckResult torus_subalgebra_check(const AlgebraPresentation& a) { return torus_subalgebra_check(basis_and_dims(a)); }

CheckResult euler_obstruction(const GradedBasis& a) {
    const long chi = euler_characteristic(a);
    const auto b1 = a.rank(1);
    CheckResult r;
    r.id = "euler";
    r.citation = "corollary: infinite pi1 forces Euler characteristic zero";
    r.witness.emplace_back("chi", std::to_string(chi));
    r.witness.emplace_back("b1", std::to_string(b1));
    if (b1 >= 1 && chi != 0) {
        r.verdict = Verdict::Fail;
        r.summary = fmt::format("chi = {} != 0 while b1 = {}", chi, b1);
    } else {
        r.verdict = Verdict::Pass;
        r.summary = b1 == 0 ? "b1 = 0, check vacuous" : fmt::format("chi = 0 with b1 = {}", b1);
    }
    return r;
}

CheckResult euler_obstruction(const AlgebraPresentation& a) { return euler_obstruction(basis_and_dims(a)); }

Pi1Class pi1_class_from_rank(int rank) {
    switch (rank) {
    case 0: return Pi1Class::Finite;
    case 1: return Pi1Class::Z;
    case 2: return Pi1Class::Z2;
    case 3: return Pi1Class::Z3;
    case 4: return Pi1Class::Z4;
    default: return Pi1Class::Other;
    }
}

FourManifoldVerdict fourmanifold_battery(int b_plus, int b_minus, Pi1Class pi1) {
    if (b_plus < 0 || b_minus < 0)
        throw InvalidArgument("Betti numbers must be nonnegative");
    FourManifoldVerdict v;
    auto infinite = [&](int rank, int want_plus, int want_minus, const char* label) {
        const int chi = 2 - 2 * rank + b_plus + b_minus;
        if (chi != 0) {
            v.verdict = Verdict::Fail;
            v.reason = fmt::format("pi1 rank {} with chi = {} != 0", rank, chi);
        } else if (b_plus != want_plus || b_minus != want_minus) {
            v.verdict = Verdict::Fail;
            v.reason = fmt::format("form ({}, {}) differs from the cover {} ({}, {})", b_plus, b_minus, label,
                                   want_plus, want_minus);
        } else {
            v.verdict = Verdict::Pass;
            v.label = label;
            v.reason = fmt::format("finitely covered by {}", label);
        }
    };
    switch (pi1) {
    case Pi1Class::Trivial:
    case Pi1Class::Finite:
        if (b_plus <= 3 && b_minus <= 3) {
            v.verdict = Verdict::Pass;
            v.label = "simply connected cover";
            v.reason = fmt::format("({}, {}) embeds in the (3, 3) wedge form on Lambda^2 R^4", b_plus, b_minus);
        } else {
            v.verdict = Verdict::Fail;
            v.reason = fmt::format("({}, {}) does not embed in the (3, 3) wedge form on Lambda^2 R^4", b_plus, b_minus);
        }
        break;
    case Pi1Class::Z: infinite(1, 0, 0, "S^1 x S^3"); break;
    case Pi1Class::Z2: infinite(2, 1, 1, "T^2 x S^2"); break;
    case Pi1Class::Z4: infinite(4, 3, 3, "T^4"); break;
    case Pi1Class::Z3:
        v.verdict = Verdict::Fail;
        v.reason = "pi1 rank 3 = n - 1";
        break;
    case Pi1Class::Other: throw InvalidArgument("unsupported pi1 descriptor for the 4-manifold battery");
    }
    return v;
}

} // namespace ellip
