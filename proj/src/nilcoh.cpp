#include "ellip/nilcoh.hpp"

#include "ellip/error.hpp"

#include <fmt/format.h>

namespace ellip {

NilLieAlgebra::NilLieAlgebra(int m) : m_(m) {
    if (m < 0 || m > kMaxExteriorDimension)
        throw InvalidArgument("Lie algebra dimension out of range");
    c_.resize(static_cast<std::size_t>(m) * m * m);
}

void NilLieAlgebra::set(int i, int j, int k, const Rational& v) {
    c_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k] = v;
    c_[(static_cast<std::size_t>(j) * m_ + i) * m_ + k] = -v;
}

NilLieAlgebra NilLieAlgebra::from_brackets(int m, const std::vector<BracketTerm>& terms) {
    NilLieAlgebra g(m);
    for (const auto& t : terms) {
        if (t.i < 1 || t.i > m || t.j < 1 || t.j > m || t.k < 1 || t.k > m)
            throw InvalidArgument(fmt::format("bracket index out of range in [X{}, X{}] -> X{}", t.i, t.j, t.k));
        if (t.i == t.j)
            throw InvalidArgument(fmt::format("bracket [X{0}, X{0}] must vanish", t.i));
        const int i = t.i - 1, j = t.j - 1, k = t.k - 1;
        g.set(i, j, k, g.structure(i, j, k) + t.c);
    }
    return g;
}

NilLieAlgebra NilLieAlgebra::heisenberg() { return from_brackets(3, {{1, 2, 3, 1}}); }

NilLieAlgebra NilLieAlgebra::filiform(int m) {
    std::vector<BracketTerm> terms;
    for (int i = 2; i < m; ++i)
        terms.push_back({1, i, i + 1, 1});
    return from_brackets(m, terms);
}

std::vector<Rational> NilLieAlgebra::bracket(const std::vector<Rational>& x, const std::vector<Rational>& y) const {
    std::vector<Rational> out(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
        if (is_zero(x[i]))
            continue;
        for (int j = 0; j < m_; ++j) {
            if (i == j || is_zero(y[j]))
                continue;
            const Rational s = x[i] * y[j];
            for (int k = 0; k < m_; ++k)
                if (!is_zero(structure(i, j, k)))
                    out[k] += s * structure(i, j, k);
        }
    }
    return out;
}

bool NilLieAlgebra::is_abelian() const {
    for (const auto& v : c_)
        if (!is_zero(v))
            return false;
    return true;
}

std::vector<BracketTerm> NilLieAlgebra::terms() const {
    std::vector<BracketTerm> out;
    for (int i = 0; i < m_; ++i)
        for (int j = i + 1; j < m_; ++j)
            for (int k = 0; k < m_; ++k)
                if (!is_zero(structure(i, j, k)))
                    out.push_back({i + 1, j + 1, k + 1, structure(i, j, k)});
    return out;
}

NilLieAlgebra NilLieAlgebra::change_basis(const Matrix& a) const {
    if (a.rows() != static_cast<std::size_t>(m_) || a.cols() != a.rows())
        throw DimensionMismatch("change of basis has the wrong size");
    const Matrix inv = inverse(a);
    auto column = [&](int c) {
        std::vector<Rational> v(static_cast<std::size_t>(m_));
        for (int r = 0; r < m_; ++r)
            v[r] = a(r, c);
        return v;
    };
    NilLieAlgebra g(m_);
    for (int i = 0; i < m_; ++i)
        for (int j = i + 1; j < m_; ++j) {
            const auto v = bracket(column(i), column(j));
            for (int k = 0; k < m_; ++k) {
                Rational s = 0;
                for (int l = 0; l < m_; ++l)
                    s += inv(k, l) * v[l];
                if (!is_zero(s))
                    g.set(i, j, k, s);
            }
        }
    return g;
}

namespace {

std::vector<Rational> unit(int m, int i) {
    std::vector<Rational> v(static_cast<std::size_t>(m));
    v[i] = 1;
    return v;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n)
        return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace

bool jacobi_check(const NilLieAlgebra& g) {
    const int m = g.dimension();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int l = j + 1; l < m; ++l) {
                const auto x = unit(m, i), y = unit(m, j), z = unit(m, l);
                auto s = g.bracket(g.bracket(x, y), z);
                const auto b = g.bracket(g.bracket(y, z), x);
                const auto c = g.bracket(g.bracket(z, x), y);
                for (int k = 0; k < m; ++k)
                    if (!is_zero(s[k] + b[k] + c[k]))
                        return false;
            }
    return true;
}

CentralSeries lower_central_series(const NilLieAlgebra& g) {
    if (!jacobi_check(g))
        throw PreconditionError("structure constants violate the Jacobi identity");
    const int m = g.dimension();
    CentralSeries s;
    std::vector<std::vector<Rational>> current;
    for (int i = 0; i < m; ++i)
        current.push_back(unit(m, i));
    Echelon e = row_echelon(current, static_cast<std::size_t>(m));
    while (true) {
        s.dims.push_back(e.rank());
        s.spans.push_back(e);
        if (e.rank() == 0)
            break;
        std::vector<std::vector<Rational>> next;
        for (const auto& x : e.rows)
            for (int j = 0; j < m; ++j)
                next.push_back(g.bracket(x, unit(m, j)));
        Echelon n = row_echelon(next, static_cast<std::size_t>(m));
        if (n.rank() == e.rank())
            throw NotNilpotent(fmt::format("lower central series stabilizes at dimension {}", n.rank()));
        e = std::move(n);
    }
    return s;
}

Multivector CEComplex::apply(const Multivector& form) const {
    Multivector out(m);
    for (int k = 0; k < m; ++k) {
        const auto part = form.component(k);
        if (part.is_zero())
            continue;
        const auto& src = basis[static_cast<std::size_t>(k)];
        const auto& dst = basis[static_cast<std::size_t>(k) + 1];
        const Matrix& dk = d[static_cast<std::size_t>(k)];
        for (std::size_t c = 0; c < src.size(); ++c) {
            const Rational coeff = part.coefficient(src[c]);
            if (is_zero(coeff))
                continue;
            for (std::size_t r = 0; r < dst.size(); ++r)
                if (!is_zero(dk(r, c)))
                    out.add_term(dst[r], coeff * dk(r, c));
        }
    }
    return out;
}

CEComplex ce_differential(const NilLieAlgebra& g) {
    const int m = g.dimension();
    CEComplex ce;
    ce.m = m;
    for (int k = 0; k <= m; ++k)
        ce.basis.push_back(blades_of_degree(m, k));

    std::vector<Multivector> d1;
    for (int k = 0; k < m; ++k) {
        Multivector v(m);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (!is_zero(g.structure(i, j, k)))
                    v.add_term(Blade((1u << i) | (1u << j)), -g.structure(i, j, k));
        d1.push_back(std::move(v));
    }

    for (int k = 0; k < m; ++k) {
        const auto& src = ce.basis[static_cast<std::size_t>(k)];
        const auto& dst = ce.basis[static_cast<std::size_t>(k) + 1];
        Matrix dk(dst.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            const auto idx = src[c].indices();
            Multivector image(m);
            for (std::size_t s = 0; s < idx.size(); ++s) {
                Multivector term = Multivector::scalar(m, s % 2 == 0 ? 1 : -1);
                for (std::size_t t = 0; t < idx.size(); ++t)
                    term = wedge(term, t == s ? d1[static_cast<std::size_t>(idx[t] - 1)]
                                              : Multivector::blade(m, {idx[t]}));
                image += term;
            }
            for (std::size_t r = 0; r < dst.size(); ++r)
                dk(r, c) = image.coefficient(dst[r]);
        }
        ce.d.push_back(std::move(dk));
    }
    for (int k = 0; k + 1 < m; ++k)
        if (!(ce.d[static_cast<std::size_t>(k) + 1] * ce.d[static_cast<std::size_t>(k)]).is_zero())
            throw ConsistencyError(fmt::format("d^2 != 0 on forms of degree {}", k));
    return ce;
}

std::vector<std::size_t> lie_cohomology_dims(const CEComplex& ce) {
    std::vector<std::size_t> ranks;
    for (const auto& dk : ce.d)
        ranks.push_back(rank(dk));
    std::vector<std::size_t> b;
    for (int k = 0; k <= ce.m; ++k) {
        std::size_t v = ce.basis[static_cast<std::size_t>(k)].size();
        if (k < ce.m)
            v -= ranks[static_cast<std::size_t>(k)];
        if (k > 0)
            v -= ranks[static_cast<std::size_t>(k) - 1];
        b.push_back(v);
    }
    return b;
}

std::vector<std::size_t> lie_cohomology_dims(const NilLieAlgebra& g) {
    return lie_cohomology_dims(ce_differential(g));
}

NilLieAlgebra quotient_algebra(const NilLieAlgebra& g, const Echelon& ideal) {
    const int m = g.dimension();
    const auto free = ideal.free_columns();
    const int r = static_cast<int>(free.size());
    std::vector<BracketTerm> terms;
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            const auto v = ideal.reduce(g.bracket(unit(m, static_cast<int>(free[a])),
                                                  unit(m, static_cast<int>(free[b]))));
            for (int c = 0; c < r; ++c)
                if (!is_zero(v[free[c]]))
                    terms.push_back({a + 1, b + 1, c + 1, v[free[c]]});
        }
    return NilLieAlgebra::from_brackets(r, terms);
}

NomizuReport nomizu_kernel(const NilLieAlgebra& g) {
    const auto series = lower_central_series(g);
    NomizuReport report;
    const int m = g.dimension();
    if (g.is_abelian()) {
        report.abelian = true;
        report.dim_q1 = report.dim_q2 = static_cast<std::size_t>(m);
        return report;
    }
    const Echelon& gamma2 = series.spans.at(1);
    const Echelon& gamma3 = series.spans.at(2);
    const NilLieAlgebra q2 = quotient_algebra(g, gamma3);
    const auto free1 = gamma2.free_columns();
    const auto free2 = gamma3.free_columns();
    const int r1 = static_cast<int>(free1.size());
    const int r2 = static_cast<int>(free2.size());
    report.dim_q1 = free1.size();
    report.dim_q2 = free2.size();

    // Projection q2 -> q1 in the chosen bases; its transpose pulls back 1-forms.
    Matrix p(free1.size(), free2.size());
    for (int a = 0; a < r2; ++a) {
        const auto v = gamma2.reduce(unit(m, static_cast<int>(free2[a])));
        for (int c = 0; c < r1; ++c)
            p(c, a) = v[free1[c]];
    }
    auto pullback = [&](int c) {
        Multivector f(r2);
        for (int a = 0; a < r2; ++a)
            if (!is_zero(p(c, a)))
                f.add_term(Blade(1u << a), p(c, a));
        return f;
    };

    const auto blades2 = blades_of_degree(r2, 2);
    auto coords = [&](const Multivector& f) {
        std::vector<Rational> v(blades2.size());
        for (std::size_t i = 0; i < blades2.size(); ++i)
            v[i] = f.coefficient(blades2[i]);
        return v;
    };
    std::vector<std::vector<Rational>> pulled, exact;
    for (int c = 0; c < r1; ++c)
        for (int e = c + 1; e < r1; ++e)
            pulled.push_back(coords(wedge(pullback(c), pullback(e))));
    const CEComplex ce = ce_differential(q2);
    for (int a = 0; a < r2; ++a)
        exact.push_back(coords(ce.apply(Multivector::blade(r2, {a + 1}))));
    auto combined = pulled;
    combined.insert(combined.end(), exact.begin(), exact.end());
    const std::size_t cols = blades2.size();
    const std::size_t rank_pulled = row_echelon(pulled, cols).rank();
    const std::size_t rank_exact = row_echelon(exact, cols).rank();
    const std::size_t rank_both = row_echelon(combined, cols).rank();
    if (rank_pulled != binomial(free1.size(), 2))
        throw ConsistencyError("pullback H^2(q1) -> Lambda^2 q2* is not injective");
    report.kernel = rank_pulled + rank_exact - rank_both;
    if (report.kernel != report.dim_q2 - report.dim_q1)
        throw ConsistencyError(fmt::format("kernel of H^2(q1) -> H^2(q2) has dimension {}, expected {}", report.kernel,
                                           report.dim_q2 - report.dim_q1));
    return report;
}

int bass_growth_degree(const NilLieAlgebra& g) {
    const auto s = lower_central_series(g);
    int degree = 0;
    for (std::size_t k = 0; k + 1 < s.dims.size(); ++k)
        degree += static_cast<int>(k + 1) * static_cast<int>(s.dims[k] - s.dims[k + 1]);
    return degree;
}

std::vector<std::size_t> degree1_subalgebra_ranks(const NilLieAlgebra& g) {
    const int m = g.dimension();
    const CEComplex ce = ce_differential(g);
    std::vector<Multivector> closed;
    if (m == 1)
        closed = {Multivector::blade(1, {1})};
    else if (m >= 2)
        for (const auto& v : nullspace(ce.d[1])) {
            Multivector f(m);
            for (int i = 0; i < m; ++i)
                if (!is_zero(v[i]))
                    f.add_term(Blade(1u << i), v[i]);
            closed.push_back(f);
        }

    std::vector<std::size_t> ranks{1};
    std::vector<Multivector> products{Multivector::scalar(m, 1)};
    for (int j = 1; j <= m; ++j) {
        const auto& blades = ce.basis[static_cast<std::size_t>(j)];
        auto coords = [&](const Multivector& f) {
            std::vector<Rational> v(blades.size());
            for (std::size_t i = 0; i < blades.size(); ++i)
                v[i] = f.coefficient(blades[i]);
            return v;
        };
        std::vector<Multivector> next;
        for (const auto& p : products)
            for (const auto& c : closed) {
                const auto w = wedge(p, c);
                if (!w.is_zero())
                    next.push_back(w);
            }
        std::vector<std::vector<Rational>> exact, both;
        const Matrix& dprev = ce.d[static_cast<std::size_t>(j) - 1];
        for (std::size_t c = 0; c < dprev.cols(); ++c) {
            std::vector<Rational> v(dprev.rows());
            for (std::size_t r = 0; r < dprev.rows(); ++r)
                v[r] = dprev(r, c);
            exact.push_back(std::move(v));
        }
        both = exact;
        for (const auto& w : next)
            both.push_back(coords(w));
        ranks.push_back(row_echelon(both, blades.size()).rank() - row_echelon(exact, blades.size()).rank());
        // Keep a basis of the product span to bound the work.
        std::vector<Multivector> kept;
        Echelon e = row_echelon(std::vector<std::vector<Rational>>{}, blades.size());
        for (const auto& w : next) {
            const auto v = coords(w);
            if (e.contains(v))
                continue;
            auto rows = e.rows;
            rows.push_back(v);
            e = row_echelon(rows, blades.size());
            kept.push_back(w);
        }
        products = std::move(kept);
    }
    return ranks;
}

Pi1Verdict pi1_verdict(const NilLieAlgebra& g, int n) {
    Pi1Verdict v;
    const auto series = lower_central_series(g);
    v.growth_degree = bass_growth_degree(g);
    v.nilpotency_class = series.nilpotency_class();
    v.abelian = g.is_abelian();
    if (v.growth_degree > n) {
        v.reason = fmt::format("growth degree {} exceeds n = {}", v.growth_degree, n);
        return v;
    }
    if (!v.abelian) {
        v.reason = fmt::format("nonabelian nilpotent fundamental group (class {})", v.nilpotency_class);
        return v;
    }
    v.pass = true;
    v.reason = fmt::format("abelian of rank {} <= n = {}", g.dimension(), n);
    return v;
}

NilLieAlgebra random_nilpotent_algebra(int m, std::mt19937_64& rng) {
    if (m < 3 || m > 10)
        throw InvalidArgument("random nilpotent algebras are generated in dimensions 3..10");
    std::uniform_int_distribution<int> coeff(-2, 2);
    while (true) {
        const int start = std::uniform_int_distribution<int>(2, m - 1)(rng);
        NilLieAlgebra g = NilLieAlgebra::abelian(start);
        for (int t = start; t < m; ++t) {
            const CEComplex ce = ce_differential(g);
            // Every 2-form is closed when t = 2.
            const auto cocycles = t >= 3 ? nullspace(ce.d[2]) : nullspace(Matrix(0, 1));
            std::vector<Rational> omega(ce.basis[2].size());
            for (const auto& z : cocycles) {
                const int a = coeff(rng);
                for (std::size_t i = 0; i < omega.size(); ++i)
                    omega[i] += a * z[i];
            }
            std::vector<BracketTerm> terms = g.terms();
            for (std::size_t b = 0; b < omega.size(); ++b) {
                if (is_zero(omega[b]))
                    continue;
                const auto idx = ce.basis[2][b].indices();
                terms.push_back({idx[0], idx[1], t + 1, omega[b]});
            }
            g = NilLieAlgebra::from_brackets(t + 1, terms);
        }
        if (g.is_abelian())
            continue;
        std::uniform_int_distribution<int> entry(-1, 1);
        while (true) {
            Matrix a = Matrix::identity(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    a(i, j) += entry(rng);
            if (!is_zero(determinant(a)))
                return g.change_basis(a);
        }
    }
}

AlgebraPresentation lie_cohomology_presentation(const NilLieAlgebra& g) {
    const int m = g.dimension();
    if (m < 1)
        throw InvalidArgument("Lie algebra must have positive dimension");
    const CEComplex ce = ce_differential(g);

    // Per degree: exact forms (echelon), representative cocycles.
    std::vector<Echelon> exact(static_cast<std::size_t>(m) + 1);
    std::vector<std::vector<std::vector<Rational>>> reps(static_cast<std::size_t>(m) + 1);
    for (int k = 1; k <= m; ++k) {
        const std::size_t dim = ce.basis[static_cast<std::size_t>(k)].size();
        exact[k] = row_echelon(ce.d[static_cast<std::size_t>(k) - 1].transpose());
        exact[k].cols = dim;
        std::vector<std::vector<Rational>> cocycles =
            k < m ? nullspace(ce.d[static_cast<std::size_t>(k)]) : nullspace(Matrix(1, dim));
        std::vector<std::vector<Rational>> span = exact[k].rows;
        for (auto& z : cocycles) {
            auto trial = span;
            trial.push_back(z);
            if (row_echelon(trial, dim).rank() > span.size()) {
                span.push_back(z);
                reps[k].push_back(z);
            }
        }
    }

    auto to_form = [&](int k, const std::vector<Rational>& v) {
        Multivector f(m);
        const auto& blades = ce.basis[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!is_zero(v[i]))
                f.add_term(blades[i], v[i]);
        return f;
    };
    // Class coordinates of a closed k-form against reps[k].
    auto class_of = [&](int k, const Multivector& f) {
        const auto& blades = ce.basis[static_cast<std::size_t>(k)];
        const auto& ex = exact[static_cast<std::size_t>(k)];
        const auto& rk = reps[static_cast<std::size_t>(k)];
        Matrix a(blades.size(), ex.rank() + rk.size() + 1);
        for (std::size_t r = 0; r < blades.size(); ++r) {
            for (std::size_t c = 0; c < ex.rank(); ++c)
                a(r, c) = ex.rows[c][r];
            for (std::size_t c = 0; c < rk.size(); ++c)
                a(r, ex.rank() + c) = rk[c][r];
            a(r, a.cols() - 1) = f.coefficient(blades[r]);
        }
        auto ns = nullspace(a);
        if (ns.size() != 1 || is_zero(ns[0].back()))
            throw ConsistencyError("product of cocycles is not a cocycle");
        std::vector<Rational> out(rk.size());
        for (std::size_t c = 0; c < rk.size(); ++c)
            out[c] = -ns[0][ex.rank() + c] / ns[0].back();
        return out;
    };

    GeneratorTable table;
    std::vector<std::pair<int, std::size_t>> origin;
    for (int k = 1; k <= m; ++k)
        for (std::size_t i = 0; i < reps[static_cast<std::size_t>(k)].size(); ++i) {
            table.push_back({fmt::format("c{}_{}", k, i + 1), k});
            origin.emplace_back(k, i);
        }
    AlgebraPresentation a;
    a.generators = std::make_shared<const GeneratorTable>(table);
    a.n = m;
    const std::size_t r = table.size();
    auto unit_monomial = [&](std::size_t i, int e) {
        Monomial mono(r, 0);
        mono[i] = e;
        return mono;
    };
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
            const int ki = origin[i].first, kj = origin[j].first;
            if (ki + kj > m || (i == j && ki % 2 == 1))
                continue;
            Multivector prod = wedge(to_form(ki, reps[ki][origin[i].second]), to_form(kj, reps[kj][origin[j].second]));
            auto coords = class_of(ki + kj, prod);
            Monomial mono(r, 0);
            mono[i] += 1;
            mono[j] += 1;
            GradedPolynomial rel = GradedPolynomial::monomial(a.generators, mono);
            std::size_t base = 0;
            while (origin[base].first != ki + kj)
                ++base;
            for (std::size_t c = 0; c < coords.size(); ++c)
                if (!is_zero(coords[c]))
                    rel.add_term(unit_monomial(base + c, 1), -coords[c]);
            a.relations.push_back(std::move(rel));
        }
    a.fundamental_class = GradedPolynomial::monomial(a.generators, unit_monomial(r - 1, 1));
    return a;
}

} // namespace ellip
