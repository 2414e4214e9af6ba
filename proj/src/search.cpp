#include "ellip/embed.hpp"

#include "ellip/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace ellip {

namespace {

// ---------------------------------------------------------------------------
// Dense floating evaluation of polynomials on graded multivectors, with an
// analytic Jacobian with respect to the generator coefficients.

using Dense = std::vector<double>; // indexed by blade mask
using Triplets = std::vector<Eigen::Triplet<double>>;

struct Factorized {
    double coeff;
    std::vector<int> factors; // generator indices, table order, with repetition
};

struct FloatPolynomial {
    int degree = 0;
    std::vector<Factorized> terms;
};

FloatPolynomial factorize(const GradedPolynomial& p) {
    FloatPolynomial f;
    f.degree = p.degree();
    for (const auto& [mono, c] : p.terms()) {
        Factorized t{c.get_d(), {}};
        for (std::size_t i = 0; i < mono.size(); ++i)
            for (int e = 0; e < mono[i]; ++e)
                t.factors.push_back(static_cast<int>(i));
        f.terms.push_back(std::move(t));
    }
    return f;
}

class FloatSystem {
public:
    FloatSystem(const AlgebraPresentation& a, int n) : n_(n) {
        const auto& table = *a.generators;
        for (int k = 0; k <= n; ++k) {
            std::vector<std::uint32_t> masks;
            for (const auto& b : blades_of_degree(n, k))
                masks.push_back(b.mask());
            masks_.push_back(std::move(masks));
        }
        for (const auto& g : table) {
            offset_.push_back(vars_);
            degree_.push_back(g.degree);
            vars_ += g.degree <= n ? masks_[static_cast<std::size_t>(g.degree)].size() : 0;
        }
        for (const auto& r : a.relations)
            if (r.degree() <= n)
                constraints_.push_back(factorize(r));
        if (a.truncate_above_n && n > a.n) {
            const int hi = std::min(n, a.n + [&] {
                int d = 0;
                for (const auto& g : table)
                    d = std::max(d, g.degree);
                return d;
            }());
            for (int k = a.n + 1; k <= hi; ++k)
                for (const auto& m : monomials_of_degree(k, table))
                    constraints_.push_back(factorize(GradedPolynomial::monomial(a.generators, m)));
        }
        for (const auto& c : constraints_)
            relation_rows_ += masks_[static_cast<std::size_t>(c.degree)].size();
        if (a.n <= n)
            fundamental_ = factorize(*basis_and_dims(a).fundamental_class());
    }

    std::size_t variables() const { return vars_; }
    std::size_t rows() const { return relation_rows_ + 1; }
    std::size_t relation_rows() const { return relation_rows_; }

    std::vector<Dense> images(const Eigen::VectorXd& x) const {
        std::vector<Dense> out;
        for (std::size_t g = 0; g < degree_.size(); ++g) {
            Dense d(std::size_t{1} << n_, 0.0);
            if (degree_[g] <= n_) {
                const auto& masks = masks_[static_cast<std::size_t>(degree_[g])];
                for (std::size_t b = 0; b < masks.size(); ++b)
                    d[masks[b]] = x[static_cast<Eigen::Index>(offset_[g] + b)];
            }
            out.push_back(std::move(d));
        }
        return out;
    }

    /// Residuals: relation coefficients, then |F|^2 - 1. Fills jac if given.
    Eigen::VectorXd residual(const Eigen::VectorXd& x, Triplets* jac) const {
        const auto img = images(x);
        Eigen::VectorXd r(static_cast<Eigen::Index>(rows()));
        if (jac)
            jac->clear();
        std::size_t row = 0;
        for (const auto& c : constraints_) {
            Dense val(std::size_t{1} << n_, 0.0);
            accumulate(c, img, val, jac, row, 1.0, nullptr);
            for (auto m : masks_[static_cast<std::size_t>(c.degree)])
                r[static_cast<Eigen::Index>(row++)] = val[m];
        }
        Dense fund(std::size_t{1} << n_, 0.0);
        if (fundamental_.terms.empty()) {
            r[static_cast<Eigen::Index>(row)] = -1.0;
            return r;
        }
        accumulate(fundamental_, img, fund, nullptr, 0, 1.0, nullptr);
        double norm2 = 0;
        for (auto m : masks_[static_cast<std::size_t>(fundamental_.degree)])
            norm2 += fund[m] * fund[m];
        r[static_cast<Eigen::Index>(row)] = norm2 - 1.0;
        if (jac)
            accumulate(fundamental_, img, fund, jac, row, 2.0, &fund);
        return r;
    }

    double fundamental_norm(const Eigen::VectorXd& x) const {
        const auto img = images(x);
        Dense fund(std::size_t{1} << n_, 0.0);
        if (fundamental_.terms.empty())
            return 0.0;
        accumulate(fundamental_, img, fund, nullptr, 0, 1.0, nullptr);
        double s = 0;
        for (auto m : masks_[static_cast<std::size_t>(fundamental_.degree)])
            s += fund[m] * fund[m];
        return std::sqrt(s);
    }

    RingMorphism round(const AlgebraPresentation& a, const Eigen::VectorXd& x, std::int64_t max_den) const {
        RingMorphism m{a, n_, {}};
        for (std::size_t g = 0; g < degree_.size(); ++g) {
            Multivector v(n_);
            if (degree_[g] <= n_) {
                const auto& masks = masks_[static_cast<std::size_t>(degree_[g])];
                for (std::size_t b = 0; b < masks.size(); ++b)
                    v.add_term(Blade(masks[b]),
                               rational_approximation(x[static_cast<Eigen::Index>(offset_[g] + b)], max_den));
            }
            m.assignment.push_back(std::move(v));
        }
        return m;
    }

    FloatMorphism as_float(const AlgebraPresentation& a, const Eigen::VectorXd& x) const {
        FloatMorphism m{a, n_, {}};
        for (std::size_t g = 0; g < degree_.size(); ++g) {
            std::vector<double> c;
            if (degree_[g] <= n_)
                for (std::size_t b = 0; b < masks_[static_cast<std::size_t>(degree_[g])].size(); ++b)
                    c.push_back(x[static_cast<Eigen::Index>(offset_[g] + b)]);
            m.coefficients.push_back(std::move(c));
        }
        return m;
    }

    Eigen::VectorXd from_float(const FloatMorphism& m) const {
        Eigen::VectorXd x(static_cast<Eigen::Index>(vars_));
        for (std::size_t g = 0; g < degree_.size(); ++g) {
            const std::size_t want = degree_[g] <= n_ ? masks_[static_cast<std::size_t>(degree_[g])].size() : 0;
            if (m.coefficients.at(g).size() != want)
                throw DimensionMismatch("floating morphism has the wrong number of coefficients");
            for (std::size_t b = 0; b < want; ++b)
                x[static_cast<Eigen::Index>(offset_[g] + b)] = m.coefficients[g][b];
        }
        return x;
    }

private:
    // out += scale * value(p). With jac, adds the derivative of the rows
    // starting at row0 (one per blade of p's degree); when weights is given,
    // the single row row0 receives sum_B weights[B] * d(value_B).
    void accumulate(const FloatPolynomial& p, const std::vector<Dense>& img, Dense& out, Triplets* jac,
                    std::size_t row0, double scale, const Dense* weights) const {
        const std::size_t size = std::size_t{1} << n_;
        std::vector<std::size_t> row_of;
        if (jac && !weights) {
            row_of.assign(size, 0);
            const auto& masks = masks_[static_cast<std::size_t>(p.degree)];
            for (std::size_t i = 0; i < masks.size(); ++i)
                row_of[masks[i]] = row0 + i;
        }
        for (const auto& t : p.terms) {
            const std::size_t k = t.factors.size();
            // prefix[s] = f_1 ... f_s, suffix[s] = f_{s+1} ... f_k
            std::vector<Dense> prefix(k + 1), suffix(k + 1);
            std::vector<int> pdeg(k + 1, 0), sdeg(k + 1, 0);
            prefix[0].assign(size, 0.0);
            prefix[0][0] = 1.0;
            for (std::size_t s = 0; s < k; ++s) {
                const int d = degree_[static_cast<std::size_t>(t.factors[s])];
                pdeg[s + 1] = pdeg[s] + d;
                prefix[s + 1] = wedge(prefix[s], pdeg[s], img[static_cast<std::size_t>(t.factors[s])], d);
            }
            if (!jac) {
                for (std::size_t m = 0; m < size; ++m)
                    out[m] += t.coeff * prefix[k][m];
                continue;
            }
            suffix[k].assign(size, 0.0);
            suffix[k][0] = 1.0;
            for (std::size_t s = k; s-- > 0;) {
                const int d = degree_[static_cast<std::size_t>(t.factors[s])];
                sdeg[s] = sdeg[s + 1] + d;
                suffix[s] = wedge(img[static_cast<std::size_t>(t.factors[s])], d, suffix[s + 1], sdeg[s + 1]);
            }
            for (std::size_t s = 0; s < k; ++s) {
                const auto g = static_cast<std::size_t>(t.factors[s]);
                if (degree_[g] > n_)
                    continue;
                const auto& masks = masks_[static_cast<std::size_t>(degree_[g])];
                for (std::size_t b = 0; b < masks.size(); ++b) {
                    const std::uint32_t e = masks[b];
                    const auto col = static_cast<Eigen::Index>(offset_[g] + b);
                    // prefix[s] ^ e_B ^ suffix[s+1]
                    if (pdeg[s] > n_ || sdeg[s + 1] > n_)
                        continue;
                    for (const std::uint32_t pm : masks_[static_cast<std::size_t>(pdeg[s])]) {
                        const double pv = prefix[s][pm];
                        if (pv == 0.0 || (pm & e))
                            continue;
                        const std::uint32_t left = pm | e;
                        const double lv = pv * wedge_sign(pm, e);
                        for (const std::uint32_t sm : masks_[static_cast<std::size_t>(sdeg[s + 1])]) {
                            const double sv = suffix[s + 1][sm];
                            if (sv == 0.0 || (left & sm))
                                continue;
                            const std::uint32_t full = left | sm;
                            const double v = scale * t.coeff * lv * sv * wedge_sign(left, sm);
                            if (weights)
                                jac->emplace_back(static_cast<Eigen::Index>(row0), col, (*weights)[full] * v);
                            else
                                jac->emplace_back(static_cast<Eigen::Index>(row_of[full]), col, v);
                        }
                    }
                }
            }
            if (!weights)
                for (std::size_t m = 0; m < size; ++m)
                    out[m] += t.coeff * prefix[k][m];
        }
    }

    Dense wedge(const Dense& a, int da, const Dense& b, int db) const {
        Dense out(a.size(), 0.0);
        if (da + db > n_)
            return out;
        for (const std::uint32_t i : masks_[static_cast<std::size_t>(da)]) {
            if (a[i] == 0.0)
                continue;
            for (const std::uint32_t j : masks_[static_cast<std::size_t>(db)]) {
                if (b[j] == 0.0 || (i & j))
                    continue;
                out[i | j] += a[i] * b[j] * wedge_sign(i, j);
            }
        }
        return out;
    }

    int n_;
    std::size_t vars_ = 0;
    std::vector<std::size_t> offset_;
    std::vector<int> degree_;
    std::vector<std::vector<std::uint32_t>> masks_;
    std::vector<FloatPolynomial> constraints_;
    std::size_t relation_rows_ = 0;
    FloatPolynomial fundamental_;
};

double max_abs(const Eigen::VectorXd& r, std::size_t count) {
    double m = 0;
    for (std::size_t i = 0; i < count; ++i)
        m = std::max(m, std::abs(r[static_cast<Eigen::Index>(i)]));
    return m;
}

// Levenberg-Marquardt on the full residual vector.
Eigen::VectorXd levenberg_marquardt(const FloatSystem& sys, Eigen::VectorXd x, int max_iter, double tol) {
    double lambda = 1e-3;
    Triplets triplets;
    const auto rows = static_cast<Eigen::Index>(sys.rows());
    const auto cols = static_cast<Eigen::Index>(sys.variables());
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd r = sys.residual(x, &triplets);
        const double cost = r.squaredNorm();
        if (max_abs(r, sys.rows()) <= tol * 1e-2)
            break;
        Eigen::SparseMatrix<double> jac(rows, cols);
        jac.setFromTriplets(triplets.begin(), triplets.end());
        const Eigen::SparseMatrix<double> jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        bool accepted = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Eigen::SparseMatrix<double> damped = jtj;
            for (Eigen::Index i = 0; i < cols; ++i)
                damped.coeffRef(i, i) += lambda * std::max(jtj.coeff(i, i), 1e-9);
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(damped);
            if (solver.info() != Eigen::Success) {
                lambda *= 4.0;
                continue;
            }
            const Eigen::VectorXd step = solver.solve(-grad);
            const Eigen::VectorXd trial = x + step;
            const double trial_cost = sys.residual(trial, nullptr).squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost < cost) {
                x = trial;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted)
            break;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Exact structured ansatz: each generator goes to a signed sum of pairwise
// disjoint blades of its degree; degree-1 generators go to fresh basis
// vectors (no loss of generality up to a coordinate permutation).

std::vector<Multivector> disjoint_blade_pool(int n, int d, std::size_t limit) {
    std::vector<Multivector> pool;
    if (d > n) {
        pool.emplace_back(n);
        return pool;
    }
    const auto blades = blades_of_degree(n, d);
    // Sets of disjoint blades, grouped by size.
    std::vector<std::vector<std::size_t>> level{{}};
    for (int size = 1; size * d <= n && pool.size() < limit; ++size) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& s : level) {
            std::uint32_t used = 0;
            for (auto i : s)
                used |= blades[i].mask();
            for (std::size_t i = s.empty() ? 0 : s.back() + 1; i < blades.size(); ++i)
                if (!(blades[i].mask() & used)) {
                    auto t = s;
                    t.push_back(i);
                    next.push_back(std::move(t));
                }
        }
        for (const auto& s : next) {
            for (std::uint32_t signs = 0; signs < (1u << s.size()) && pool.size() < limit; ++signs) {
                Multivector v(n);
                for (std::size_t j = 0; j < s.size(); ++j)
                    v.add_term(blades[s[j]], (signs >> j) & 1u ? -1 : 1);
                pool.push_back(std::move(v));
            }
            if (pool.size() >= limit)
                break;
        }
        level = std::move(next);
    }
    return pool;
}

struct ExactSearch {
    const AlgebraPresentation& a;
    int n;
    const SearchOptions& opt;
    GradedPolynomial fundamental;
    std::vector<std::size_t> order;                    // DFS position -> generator
    std::vector<std::vector<Multivector>> pools;       // by generator
    std::vector<std::vector<GradedPolynomial>> ready;  // checks completing at each position
    std::vector<Multivector> assignment;
    std::size_t nodes = 0;
    bool exhausted = false;

    bool run() { return dfs(0, 0); }

    bool dfs(std::size_t pos, int fresh) {
        if (pos == order.size())
            return !evaluate_polynomial(fundamental, assignment).is_zero();
        const std::size_t g = order[pos];
        const int deg = (*a.generators)[g].degree;
        auto try_value = [&](const Multivector& v, int next_fresh) {
            if (++nodes > opt.exact_node_limit) {
                exhausted = true;
                return false;
            }
            assignment[g] = v;
            for (const auto& p : ready[pos])
                if (!evaluate_polynomial(p, assignment).is_zero())
                    return false;
            return dfs(pos + 1, next_fresh);
        };
        if (deg == 1) {
            for (int i = 1; i <= std::min(n, fresh + 1); ++i) {
                if (try_value(Multivector::blade(n, {i}), std::max(fresh, i)))
                    return true;
                if (exhausted)
                    return false;
            }
        } else {
            for (const auto& v : pools[g]) {
                if (try_value(v, fresh))
                    return true;
                if (exhausted)
                    return false;
            }
        }
        assignment[g] = Multivector(n);
        return false;
    }
};

std::optional<RingMorphism> exact_ansatz(const AlgebraPresentation& a, int n, const SearchOptions& opt,
                                         const GradedPolynomial& fundamental, std::size_t& nodes) {
    const auto& table = *a.generators;
    ExactSearch s{a, n, opt, fundamental, {}, {}, {}, {}, 0, false};
    for (std::size_t i = 0; i < table.size(); ++i)
        s.order.push_back(i);
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](std::size_t x, std::size_t y) { return table[x].degree < table[y].degree; });
    std::vector<std::size_t> position(table.size());
    for (std::size_t p = 0; p < s.order.size(); ++p)
        position[s.order[p]] = p;
    for (const auto& g : table)
        s.pools.push_back(g.degree == 1 ? std::vector<Multivector>{}
                                        : disjoint_blade_pool(n, g.degree, opt.exact_pool_limit));
    s.ready.resize(table.size());
    auto schedule = [&](const GradedPolynomial& p) {
        std::size_t last = 0;
        for (const auto& [mono, c] : p.terms())
            for (std::size_t i = 0; i < mono.size(); ++i)
                if (mono[i] > 0)
                    last = std::max(last, position[i]);
        if (!table.empty())
            s.ready[last].push_back(p);
    };
    for (const auto& r : a.relations)
        schedule(r);
    if (a.truncate_above_n && n > a.n) {
        int dmax = 0;
        for (const auto& g : table)
            dmax = std::max(dmax, g.degree);
        for (int k = a.n + 1; k <= std::min(n, a.n + dmax); ++k)
            for (const auto& m : monomials_of_degree(k, table))
                schedule(GradedPolynomial::monomial(a.generators, m));
    }
    s.assignment.assign(table.size(), Multivector(n));
    const bool found = s.run();
    nodes = s.nodes;
    if (!found)
        return std::nullopt;
    return RingMorphism{a, n, s.assignment};
}

} // namespace

bool verify_morphism(const FloatMorphism& m, double tol) {
    if (m.coefficients.size() != m.source.generator_count())
        throw DimensionMismatch("floating morphism has the wrong number of generators");
    return relation_residual(m) <= tol;
}

double relation_residual(const FloatMorphism& m) {
    const FloatSystem sys(m.source, m.n);
    const auto r = sys.residual(sys.from_float(m), nullptr);
    return max_abs(r, sys.relation_rows());
}

SearchResult search_embedding(const AlgebraPresentation& a, int n, const SearchOptions& opt) {
    SearchResult result;
    if (n < 0 || n > kMaxExteriorDimension)
        throw InvalidArgument("target dimension out of range");
    const GradedBasis basis = basis_and_dims(a);
    auto obstructed = [&](CheckResult c) {
        result.status = SearchStatus::Obstructed;
        result.obstruction = std::move(c);
        return result;
    };
    const auto pd = check_poincare_duality(basis);
    if (!pd.holds) {
        CheckResult c;
        c.id = "poincare_duality";
        c.verdict = Verdict::Fail;
        c.citation = "closed orientable manifolds satisfy Poincare duality";
        c.summary = pd.detail;
        if (pd.failing_degree)
            c.witness.emplace_back("degree", std::to_string(*pd.failing_degree));
        return obstructed(c);
    }
    if (a.n > n) {
        CheckResult c;
        c.id = "dimension";
        c.verdict = Verdict::Fail;
        c.citation = "theorem: injective ring map into Lambda R^n";
        c.summary = fmt::format("the fundamental class has degree {} > {}", a.n, n);
        return obstructed(c);
    }
    if (n == a.n)
        if (auto c = euler_obstruction(basis); c.verdict == Verdict::Fail)
            return obstructed(c);
    if (auto c = rank_check(basis, n); c.verdict == Verdict::Fail)
        return obstructed(c);
    if (auto c = exterior_subalgebra_check(basis); c.verdict == Verdict::Fail)
        return obstructed(c);

    const GradedPolynomial& fundamental = *basis.fundamental_class();
    if (opt.run_exact) {
        auto m = exact_ansatz(a, n, opt, fundamental, result.exact_nodes);
        if (m) {
            result.status = SearchStatus::Certified;
            result.method = "exact-ansatz";
            result.witness = std::move(m);
            return result;
        }
    }
    if (!opt.run_floating || n > 12)
        return result;

    const FloatSystem sys(a, n);
    std::optional<std::pair<int, Eigen::VectorXd>> numeric;
    for (int t = 0; t < opt.budget; ++t) {
        std::mt19937_64 rng(opt.seed * 1000003ULL + static_cast<std::uint64_t>(t));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd x(static_cast<Eigen::Index>(sys.variables()));
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = normal(rng);
        x = levenberg_marquardt(sys, x, opt.max_iterations, opt.tolerance);
        const Eigen::VectorXd r = sys.residual(x, nullptr);
        const double res = max_abs(r, sys.relation_rows());
        if (result.residual < 0 || res < result.residual)
            result.residual = res;
        if (res > opt.tolerance || sys.fundamental_norm(x) < opt.fundamental_floor)
            continue;
        const RingMorphism rounded = sys.round(a, x, opt.max_denominator);
        if (verify_morphism(rounded) && !evaluate_polynomial(fundamental, rounded.assignment).is_zero()) {
            result.status = SearchStatus::Certified;
            result.method = "least-squares";
            result.trial = t;
            result.residual = res;
            result.witness = rounded;
            return result;
        }
        // Lowest-index success wins; an irrational solution ends the search.
        numeric.emplace(t, x);
        break;
    }
    if (numeric) {
        result.status = SearchStatus::Numerical;
        result.method = "least-squares";
        result.trial = numeric->first;
        result.numeric = sys.as_float(a, numeric->second);
        result.residual = max_abs(sys.residual(numeric->second, nullptr), sys.relation_rows());
    }
    return result;
}

} // namespace ellip
