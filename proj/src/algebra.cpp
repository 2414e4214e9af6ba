#include "ellip/algebra.hpp"

#include "ellip/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>

namespace ellip {

AlgebraPresentation AlgebraPresentation::make(GeneratorTable generators, const std::vector<std::string>& relations,
                                              int n, std::optional<std::string> fundamental) {
    AlgebraPresentation a;
    a.generators = std::make_shared<const GeneratorTable>(std::move(generators));
    a.n = n;
    for (const auto& r : relations)
        a.relations.push_back(a.parse(r));
    if (fundamental)
        a.fundamental_class = a.parse(*fundamental);
    return a;
}

namespace {

std::vector<Rational> monomial_vector(const GradedPolynomial& p, const std::map<Monomial, std::size_t>& index,
                                      std::size_t size) {
    std::vector<Rational> v(size);
    for (const auto& [m, c] : p.terms())
        v[index.at(m)] = c;
    return v;
}

void validate(const AlgebraPresentation& a) {
    if (!a.generators)
        throw InvalidArgument("presentation has no generator table");
    if (a.n < 1)
        throw InvalidArgument("formal dimension must be at least 1");
    for (const auto& g : *a.generators)
        if (g.degree < 1)
            throw InvalidArgument("generator '" + g.name + "' must have degree >= 1");
    for (const auto& r : a.relations) {
        if (!r.is_homogeneous())
            throw InvalidArgument("relation '" + r.to_string() + "' is not homogeneous");
        if (a.truncate_above_n && r.degree() > a.n)
            throw InvalidArgument("relation '" + r.to_string() + "' has degree above n (implied by truncation)");
    }
    if (a.fundamental_class) {
        if (!a.fundamental_class->is_homogeneous() || a.fundamental_class->degree() != a.n)
            throw InvalidArgument("fundamental class must be homogeneous of degree n");
    }
}

// Index of each monomial of one degree.
std::map<Monomial, std::size_t> monomial_index(const std::vector<Monomial>& monomials) {
    std::map<Monomial, std::size_t> index;
    for (std::size_t i = 0; i < monomials.size(); ++i)
        index.emplace(monomials[i], i);
    return index;
}

// Rows of w_g * I_(k - d_g) expressed over the degree-k monomials, where the
// lower ideal is given by rows over lower_monomials. Uses
// I_k = sum_g w_g I_(k - d_g) + span(relations of degree k).
template <class Row, class Emit>
void multiply_rows(const GeneratorTable& table, std::size_t g, const std::vector<Monomial>& lower_monomials,
                   const std::vector<Row>& lower_rows, const std::map<Monomial, std::size_t>& index, Emit emit) {
    Monomial unit_g(table.size(), 0);
    unit_g[g] = 1;
    std::vector<std::pair<std::size_t, int>> target(lower_monomials.size(), {0, 0});
    for (std::size_t i = 0; i < lower_monomials.size(); ++i) {
        const int sign = monomial_product_sign(unit_g, lower_monomials[i], table);
        if (sign == 0)
            continue;
        Monomial m = lower_monomials[i];
        ++m[g];
        target[i] = {index.at(m), sign};
    }
    for (const auto& row : lower_rows)
        emit(row, target);
}

DegreeComponent build_component(int k, const GeneratorTable& table, const std::vector<GradedPolynomial>& relations,
                                const std::vector<DegreeComponent>& lower) {
    DegreeComponent comp;
    comp.degree = k;
    comp.monomials = monomials_of_degree(k, table);
    const auto index = monomial_index(comp.monomials);
    const std::size_t cols = comp.monomials.size();
    std::vector<std::vector<Rational>> rows;
    for (std::size_t g = 0; g < table.size(); ++g) {
        const int j = k - table[g].degree;
        if (j < 1)
            continue;
        const auto& low = lower[static_cast<std::size_t>(j)];
        multiply_rows(table, g, low.monomials, low.ideal.rows, index,
                      [&](const std::vector<Rational>& row, const std::vector<std::pair<std::size_t, int>>& target) {
                          std::vector<Rational> v(cols);
                          bool nonzero = false;
                          for (std::size_t i = 0; i < row.size(); ++i)
                              if (!is_zero(row[i]) && target[i].second != 0) {
                                  v[target[i].first] += target[i].second * row[i];
                                  nonzero = true;
                              }
                          if (nonzero)
                              rows.push_back(std::move(v));
                      });
    }
    for (const auto& rel : relations)
        if (rel.degree() == k)
            rows.push_back(monomial_vector(rel, index, cols));
    comp.ideal = row_echelon(rows, cols);
    comp.free_columns = comp.ideal.free_columns();
    for (auto c : comp.free_columns)
        comp.representatives.push_back(comp.monomials[c]);
    return comp;
}

// Row space over Z/p, p = 2^61 - 1, grown one row at a time. Used only to
// detect whether relations force vanishing above the formal dimension; a full
// rank mod p implies full rank over Q.
class ModEchelon {
public:
    static constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

    explicit ModEchelon(std::size_t cols) : cols_(cols) {}
    std::size_t rank() const { return rows_.size(); }
    const std::vector<std::vector<std::uint64_t>>& rows() const { return rows_; }

    static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
        const unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
        std::uint64_t r = static_cast<std::uint64_t>(x & kP) + static_cast<std::uint64_t>(x >> 61);
        return r >= kP ? r - kP : r;
    }
    static std::uint64_t inv(std::uint64_t a) {
        std::uint64_t result = 1, e = kP - 2;
        while (e) {
            if (e & 1)
                result = mul(result, a);
            a = mul(a, a);
            e >>= 1;
        }
        return result;
    }
    static std::uint64_t from(const Rational& q) {
        const Integer p(std::to_string(kP));
        Integer num = q.get_num() % p, den = q.get_den() % p;
        if (num < 0)
            num += p;
        if (den == 0)
            throw ConsistencyError("denominator divisible by the modular prime");
        return mul(std::stoull(num.get_str()), inv(std::stoull(den.get_str())));
    }

    void insert(std::vector<std::uint64_t> v) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const std::uint64_t f = v[pivots_[i]];
            if (f == 0)
                continue;
            const auto& r = rows_[i];
            for (std::size_t c = 0; c < cols_; ++c)
                if (r[c])
                    v[c] = (v[c] + kP - mul(f, r[c])) % kP;
        }
        std::size_t p = 0;
        while (p < cols_ && v[p] == 0)
            ++p;
        if (p == cols_)
            return;
        const std::uint64_t s = inv(v[p]);
        for (auto& x : v)
            x = mul(x, s);
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
    }

private:
    std::size_t cols_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<std::size_t> pivots_;
};

// First degree in (n, n + max generator degree] where the relations leave a
// nonzero quotient, if any.
std::optional<int> truncation_gap(const GeneratorTable& table, const std::vector<DegreeComponent>& exact, int n) {
    int max_deg = 0;
    for (const auto& g : table)
        max_deg = std::max(max_deg, g.degree);
    std::map<int, std::pair<std::vector<Monomial>, ModEchelon>> modular;
    auto lower = [&](int j) -> std::pair<const std::vector<Monomial>*, std::vector<std::vector<std::uint64_t>>> {
        if (j <= n) {
            const auto& c = exact[static_cast<std::size_t>(j)];
            std::vector<std::vector<std::uint64_t>> rows;
            for (const auto& r : c.ideal.rows) {
                std::vector<std::uint64_t> v(r.size());
                for (std::size_t i = 0; i < r.size(); ++i)
                    v[i] = ModEchelon::from(r[i]);
                rows.push_back(std::move(v));
            }
            return {&c.monomials, std::move(rows)};
        }
        const auto& m = modular.at(j);
        return {&m.first, m.second.rows()};
    };
    for (int k = n + 1; k <= n + max_deg; ++k) {
        auto monomials = monomials_of_degree(k, table);
        const auto index = monomial_index(monomials);
        const std::size_t cols = monomials.size();
        ModEchelon e(cols);
        for (std::size_t g = 0; g < table.size() && e.rank() < cols; ++g) {
            const int j = k - table[g].degree;
            if (j < 1)
                continue;
            auto [mons, rows] = lower(j);
            multiply_rows(table, g, *mons, rows, index,
                          [&](const std::vector<std::uint64_t>& row,
                              const std::vector<std::pair<std::size_t, int>>& target) {
                              if (e.rank() == cols)
                                  return;
                              std::vector<std::uint64_t> v(cols, 0);
                              for (std::size_t i = 0; i < row.size(); ++i)
                                  if (row[i] && target[i].second != 0) {
                                      const std::uint64_t x = target[i].second > 0 ? row[i] : ModEchelon::kP - row[i];
                                      v[target[i].first] = (v[target[i].first] + x) % ModEchelon::kP;
                                  }
                              e.insert(std::move(v));
                          });
        }
        if (e.rank() < cols)
            return k;
        modular.emplace(k, std::make_pair(std::move(monomials), std::move(e)));
    }
    return std::nullopt;
}

} // namespace

std::size_t GradedBasis::rank(int k) const {
    if (k < 0 || k >= static_cast<int>(components_.size()))
        return 0;
    return components_[static_cast<std::size_t>(k)].rank();
}

std::vector<std::size_t> GradedBasis::ranks() const {
    std::vector<std::size_t> out;
    for (const auto& c : components_)
        out.push_back(c.rank());
    return out;
}

std::vector<Rational> GradedBasis::coordinates(const GradedPolynomial& p) const {
    if (p.is_zero())
        return {};
    const int k = p.degree();
    if (k < 0 || k > n_)
        return {};
    const auto& comp = components_[static_cast<std::size_t>(k)];
    std::map<Monomial, std::size_t> index;
    for (std::size_t i = 0; i < comp.monomials.size(); ++i)
        index.emplace(comp.monomials[i], i);
    const auto reduced = comp.ideal.reduce(monomial_vector(p, index, comp.monomials.size()));
    std::vector<Rational> coords;
    coords.reserve(comp.free_columns.size());
    for (auto c : comp.free_columns)
        coords.push_back(reduced[c]);
    return coords;
}

bool GradedBasis::is_zero_class(const GradedPolynomial& p) const { return is_zero_vector(coordinates(p)); }

GradedPolynomial GradedBasis::representative(int k, std::size_t i) const {
    return GradedPolynomial::monomial(generators_, component(k).representatives.at(i));
}

Rational GradedBasis::pairing(const GradedPolynomial& a, const GradedPolynomial& b) const {
    if (rank(n_) != 1 || !fundamental_)
        throw PreconditionError("pairing requires a one-dimensional top degree");
    const auto prod = coordinates(a * b);
    if (prod.empty())
        return 0;
    const auto fund = coordinates(*fundamental_);
    return prod[0] / fund[0];
}

GradedBasis basis_and_dims(const AlgebraPresentation& a) {
    validate(a);
    GradedBasis basis;
    basis.n_ = a.n;
    basis.truncate_ = a.truncate_above_n;
    basis.generators_ = a.generators;
    basis.relations_ = a.relations;
    const auto& table = *a.generators;
    for (int k = 0; k <= a.n; ++k)
        basis.components_.push_back(build_component(k, table, a.relations, basis.components_));

    if (a.truncate_above_n)
        if (const auto gap = truncation_gap(table, basis.components_, a.n))
            basis.warnings_.push_back("relations do not force vanishing in degree " + std::to_string(*gap) +
                                      "; truncation above n is assumed");

    if (a.fundamental_class) {
        if (basis.is_zero_class(*a.fundamental_class))
            throw DegeneratePresentation("fundamental class '" + a.fundamental_class->to_string() +
                                         "' lies in the relation ideal");
        basis.fundamental_ = a.fundamental_class;
    } else if (basis.rank(a.n) == 1) {
        basis.fundamental_ = basis.representative(a.n, 0);
    }
    return basis;
}

long euler_characteristic(const GradedBasis& basis) {
    long chi = 0;
    for (int k = 0; k <= basis.top_degree(); ++k)
        chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(basis.rank(k));
    return chi;
}

long euler_characteristic(const AlgebraPresentation& a) { return euler_characteristic(basis_and_dims(a)); }

DualityReport check_poincare_duality(const GradedBasis& basis) {
    const int n = basis.top_degree();
    const std::size_t top = basis.rank(n);

    // Rows: basis of degree k. Columns: (partner in degree n-k) x (top basis).
    auto degree_ok = [&](int k, std::string& why) {
        const std::size_t rk = basis.rank(k);
        const std::size_t rc = basis.rank(n - k);
        if (rk == 0)
            return true;
        Matrix m(rk, rc * top);
        for (std::size_t i = 0; i < rk; ++i)
            for (std::size_t j = 0; j < rc; ++j) {
                const auto coords = basis.coordinates(basis.representative(k, i) * basis.representative(n - k, j));
                for (std::size_t t = 0; t < coords.size(); ++t)
                    m(i, j * top + t) = coords[t];
            }
        if (rank(m) < rk) {
            why = "a nonzero class of degree " + std::to_string(k) + " pairs trivially with degree " +
                  std::to_string(n - k);
            return false;
        }
        if (rk != rc) {
            why = "ranks differ in degrees " + std::to_string(k) + " and " + std::to_string(n - k);
            return false;
        }
        return true;
    };

    DualityReport report;
    std::string why;
    for (int k = 1; k < n; ++k)
        if (!degree_ok(k, why)) {
            report.failing_degree = k;
            report.detail = why;
            return report;
        }
    if (basis.rank(0) != 1) {
        report.failing_degree = 0;
        report.detail = "degree 0 is not one-dimensional";
        return report;
    }
    if (top != 1) {
        report.failing_degree = n;
        report.detail = "top degree has rank " + std::to_string(top) + ", expected 1";
        return report;
    }
    report.holds = true;
    return report;
}

DualityReport check_poincare_duality(const AlgebraPresentation& a) {
    return check_poincare_duality(basis_and_dims(a));
}

// ---------------------------------------------------------------------------
// Concrete subalgebras of the exterior algebra

namespace {

std::vector<Rational> blade_vector(const Multivector& v, const std::vector<Blade>& blades) {
    std::vector<Rational> out(blades.size());
    for (std::size_t i = 0; i < blades.size(); ++i)
        out[i] = v.coefficient(blades[i]);
    return out;
}

int homogeneous_degree(const Multivector& v) {
    const auto d = v.degree();
    if (!d)
        throw InvalidArgument("subalgebra elements must be nonzero and homogeneous");
    return *d;
}

// Coefficient c with v = c * t, for v in the line spanned by t.
Rational ratio_on_line(const Multivector& v, const Multivector& t) {
    if (v.is_zero())
        return 0;
    const auto& [mask, coeff] = *t.terms().begin();
    return v.coefficient(Blade(mask)) / coeff;
}

} // namespace

bool ConcreteSubalgebra::insert_new(const Multivector& v) {
    if (v.is_zero())
        return false;
    const int k = homogeneous_degree(v);
    const auto blades = blades_of_degree(n_, k);
    const auto vec = blade_vector(v, blades);
    auto& e = echelon_[static_cast<std::size_t>(k)];
    if (e.contains(vec))
        return false;
    auto rows = e.rows;
    rows.push_back(vec);
    e = row_echelon(rows, blades.size());
    basis_[static_cast<std::size_t>(k)].push_back(v);
    return true;
}

void ConcreteSubalgebra::insert(const Multivector& v) { insert_new(v); }

ConcreteSubalgebra ConcreteSubalgebra::generated_by(int n, const std::vector<Multivector>& generators) {
    ConcreteSubalgebra a;
    a.n_ = n;
    a.basis_.resize(static_cast<std::size_t>(n) + 1);
    a.echelon_.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        a.echelon_[static_cast<std::size_t>(k)].cols = blades_of_degree(n, k).size();
    a.insert_new(Multivector::scalar(n, 1));
    std::vector<Multivector> gens;
    for (const auto& g : generators) {
        if (g.dimension() != n)
            throw DimensionMismatch("generator lives in a different exterior algebra");
        if (!g.is_zero())
            gens.push_back(g);
    }
    // Degree-by-degree closure: products of basis elements with generators.
    for (int k = 0; k <= n; ++k) {
        for (const auto& g : gens)
            if (homogeneous_degree(g) == k)
                a.insert(g);
        for (int j = 0; j < k; ++j)
            for (const auto& b : std::vector<Multivector>(a.basis_[static_cast<std::size_t>(j)]))
                for (const auto& g : gens)
                    if (homogeneous_degree(g) + j == k)
                        a.insert(wedge(b, g));
    }
    return a;
}

ConcreteSubalgebra ConcreteSubalgebra::from_span(int n, const std::vector<Multivector>& elements) {
    ConcreteSubalgebra a;
    a.n_ = n;
    a.basis_.resize(static_cast<std::size_t>(n) + 1);
    a.echelon_.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        a.echelon_[static_cast<std::size_t>(k)].cols = blades_of_degree(n, k).size();
    for (const auto& e : elements) {
        if (e.dimension() != n)
            throw DimensionMismatch("element lives in a different exterior algebra");
        a.insert(e);
    }
    if (!a.contains(Multivector::scalar(n, 1)))
        throw PreconditionError("span does not contain the unit");
    for (int j = 0; j <= n; ++j)
        for (int k = j; j + k <= n; ++k)
            for (const auto& u : a.basis(j))
                for (const auto& v : a.basis(k))
                    if (!a.contains(wedge(u, v)))
                        throw PreconditionError("span is not closed under the wedge product");
    return a;
}

int ConcreteSubalgebra::top_degree() const {
    for (int k = n_; k >= 0; --k)
        if (!basis_[static_cast<std::size_t>(k)].empty())
            return k;
    return -1;
}

std::size_t ConcreteSubalgebra::total_dim() const {
    std::size_t s = 0;
    for (const auto& b : basis_)
        s += b.size();
    return s;
}

long ConcreteSubalgebra::euler_characteristic() const {
    long chi = 0;
    for (int k = 0; k <= n_; ++k)
        chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(dim(k));
    return chi;
}

bool ConcreteSubalgebra::contains(const Multivector& v) const {
    if (v.dimension() != n_)
        return false;
    for (int k = 0; k <= n_; ++k) {
        const auto part = v.component(k);
        if (part.is_zero())
            continue;
        if (!echelon_[static_cast<std::size_t>(k)].contains(blade_vector(part, blades_of_degree(n_, k))))
            return false;
    }
    return true;
}

DualityReport ConcreteSubalgebra::check_poincare_duality() const {
    DualityReport report;
    const int d = top_degree();
    if (d < 0 || dim(d) != 1) {
        report.failing_degree = d;
        report.detail = "top degree is not one-dimensional";
        return report;
    }
    const Multivector& vol = basis(d).front();
    for (int k = 0; k <= d; ++k) {
        const auto& left = basis(k);
        const auto& right = basis(d - k);
        if (left.size() != right.size()) {
            report.failing_degree = k;
            report.detail = "dimensions differ in degrees " + std::to_string(k) + " and " + std::to_string(d - k);
            return report;
        }
        Matrix gram(left.size(), right.size());
        for (std::size_t i = 0; i < left.size(); ++i)
            for (std::size_t j = 0; j < right.size(); ++j)
                gram(i, j) = ratio_on_line(wedge(left[i], right[j]), vol);
        if (rank(gram) < left.size()) {
            report.failing_degree = k;
            report.detail = "degenerate pairing in degree " + std::to_string(k);
            return report;
        }
    }
    report.holds = true;
    return report;
}

QuotientReport quotient_by_degree1(const ConcreteSubalgebra& a, const Multivector& x) {
    const int n = a.ambient_dimension();
    if (x.dimension() != n)
        throw DimensionMismatch("x lives in a different exterior algebra");
    if (x.is_zero())
        throw InvalidArgument("x must be nonzero");
    if (!x.is_homogeneous(1) || !a.contains(x))
        throw PreconditionError("x must be a degree-1 element of A");
    const auto pd = a.check_poincare_duality();
    if (!pd.holds)
        throw PreconditionError("A does not satisfy Poincare duality: " + pd.detail);

    const int d = a.top_degree();
    QuotientReport report;
    // complement[k]: elements of A_k projecting to a basis of (A/(x))_k.
    std::vector<std::vector<Multivector>> complement(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) {
        const auto blades = blades_of_degree(n, k);
        std::vector<std::vector<Rational>> rows;
        if (k >= 1)
            for (const auto& b : a.basis(k - 1)) {
                const auto prod = wedge(x, b);
                if (!prod.is_zero())
                    rows.push_back(blade_vector(prod, blades));
            }
        Echelon e = row_echelon(rows, blades.size());
        const std::size_t ideal_dim = e.rank();
        for (const auto& v : a.basis(k)) {
            const auto vec = blade_vector(v, blades);
            if (e.contains(vec))
                continue;
            auto r = e.rows;
            r.push_back(vec);
            e = row_echelon(r, blades.size());
            complement[static_cast<std::size_t>(k)].push_back(v);
        }
        report.ideal_dims.push_back(ideal_dim);
        report.quotient_dims.push_back(complement[static_cast<std::size_t>(k)].size());
        report.dim_ideal += ideal_dim;
        report.dim_quotient += complement[static_cast<std::size_t>(k)].size();
    }

    // Inherited pairing (a, b) -> [x a b] on degrees k and d-1-k.
    const Multivector& vol = a.basis(d).front();
    DualityReport& qd = report.quotient_duality;
    qd.holds = true;
    const int qtop = d - 1;
    if (qtop < 0 || complement[static_cast<std::size_t>(qtop)].size() != 1) {
        qd.holds = false;
        qd.failing_degree = qtop;
        qd.detail = "quotient top degree is not one-dimensional";
        return report;
    }
    for (int k = 0; k <= qtop; ++k) {
        const auto& left = complement[static_cast<std::size_t>(k)];
        const auto& right = complement[static_cast<std::size_t>(qtop - k)];
        if (left.size() != right.size()) {
            qd.holds = false;
            qd.failing_degree = k;
            qd.detail = "quotient dimensions differ in complementary degrees";
            return report;
        }
        Matrix gram(left.size(), right.size());
        for (std::size_t i = 0; i < left.size(); ++i)
            for (std::size_t j = 0; j < right.size(); ++j)
                gram(i, j) = ratio_on_line(wedge(x, wedge(left[i], right[j])), vol);
        if (rank(gram) < left.size()) {
            qd.holds = false;
            qd.failing_degree = k;
            qd.detail = "inherited pairing degenerate in degree " + std::to_string(k);
            return report;
        }
    }
    return report;
}

} // namespace ellip
