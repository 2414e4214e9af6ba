#include "ellip/exterior.hpp"

#include "ellip/error.hpp"
#include "ellip/polynomial.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace ellip {

namespace {

void check_dimension(int n) {
    if (n < 0 || n > kMaxExteriorDimension)
        throw InvalidArgument("exterior dimension must lie in [0, 32], got " + std::to_string(n));
}

std::uint32_t full_mask(int n) {
    return n == 32 ? 0xffffffffu : ((std::uint32_t{1} << n) - 1u);
}

} // namespace

Blade Blade::from_indices(std::span<const int> indices, int n) {
    check_dimension(n);
    std::uint32_t mask = 0;
    int prev = 0;
    for (int i : indices) {
        if (i <= prev || i > n)
            throw InvalidArgument("blade indices must be strictly increasing in [1, n]");
        mask |= std::uint32_t{1} << (i - 1);
        prev = i;
    }
    return Blade(mask);
}

Blade Blade::top(int n) {
    check_dimension(n);
    return Blade(full_mask(n));
}

int Blade::degree() const noexcept { return std::popcount(mask_); }

std::vector<int> Blade::indices() const {
    std::vector<int> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1)
        out.push_back(std::countr_zero(m) + 1);
    return out;
}

std::string Blade::to_string() const {
    if (mask_ == 0)
        return "1";
    std::string s = "e";
    const auto idx = indices();
    const bool wide = !idx.empty() && idx.back() > 9;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (wide && k > 0)
            s += ',';
        s += std::to_string(idx[k]);
    }
    return s;
}

int wedge_sign(std::uint32_t a, std::uint32_t b) noexcept {
    if ((a & b) != 0)
        return 0;
    // Each index j of b must move left past every index of a above j.
    int swaps = 0;
    for (std::uint32_t m = b; m != 0; m &= m - 1) {
        const int j = std::countr_zero(m);
        const std::uint32_t above = j == 31 ? 0u : (a & ~((std::uint32_t{2} << j) - 1u));
        swaps += std::popcount(above);
    }
    return (swaps & 1) ? -1 : 1;
}

Multivector::Multivector(int n) : n_(n) { check_dimension(n); }

Multivector Multivector::scalar(int n, const Rational& value) {
    Multivector m(n);
    m.add_term(Blade(0), value);
    return m;
}

Multivector Multivector::blade(int n, std::initializer_list<int> indices, const Rational& coeff) {
    Multivector m(n);
    m.add_term(Blade::from_indices(std::span<const int>(indices.begin(), indices.size()), n), coeff);
    return m;
}

Multivector Multivector::blade(int n, Blade b, const Rational& coeff) {
    Multivector m(n);
    if ((b.mask() & ~full_mask(n)) != 0)
        throw InvalidArgument("blade index exceeds ambient dimension");
    m.add_term(b, coeff);
    return m;
}

Rational Multivector::coefficient(Blade b) const {
    auto it = terms_.find(b.mask());
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<int> Multivector::degree() const {
    if (terms_.empty())
        return std::nullopt;
    const int d = std::popcount(terms_.begin()->first);
    for (const auto& [mask, c] : terms_)
        if (std::popcount(mask) != d)
            return std::nullopt;
    return d;
}

bool Multivector::is_homogeneous(int k) const {
    for (const auto& [mask, c] : terms_)
        if (std::popcount(mask) != k)
            return false;
    return true;
}

Multivector Multivector::component(int k) const {
    Multivector out(n_);
    for (const auto& [mask, c] : terms_)
        if (std::popcount(mask) == k)
            out.terms_.emplace(mask, c);
    return out;
}

double Multivector::max_abs_coefficient() const {
    double best = 0;
    for (const auto& [mask, c] : terms_)
        best = std::max(best, std::fabs(c.get_d()));
    return best;
}

Multivector Multivector::embedded(int m) const {
    if (m < n_)
        throw DimensionMismatch("cannot embed into a smaller exterior algebra");
    Multivector out(m);
    out.terms_ = terms_;
    return out;
}

void Multivector::add_term(Blade b, const Rational& coeff) {
    if (ellip::is_zero(coeff))
        return;
    if ((b.mask() & ~full_mask(n_)) != 0)
        throw InvalidArgument("blade index exceeds ambient dimension");
    auto [it, inserted] = terms_.emplace(b.mask(), coeff);
    if (!inserted) {
        it->second += coeff;
        if (ellip::is_zero(it->second))
            terms_.erase(it);
    }
}

Multivector& Multivector::operator+=(const Multivector& other) {
    if (n_ != other.n_)
        throw DimensionMismatch("multivector sum: ambient dimensions differ");
    for (const auto& [mask, c] : other.terms_)
        add_term(Blade(mask), c);
    return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
    if (n_ != other.n_)
        throw DimensionMismatch("multivector difference: ambient dimensions differ");
    for (const auto& [mask, c] : other.terms_)
        add_term(Blade(mask), -c);
    return *this;
}

Multivector& Multivector::operator*=(const Rational& s) {
    if (ellip::is_zero(s)) {
        terms_.clear();
        return *this;
    }
    for (auto& [mask, c] : terms_)
        c *= s;
    return *this;
}

std::string Multivector::to_string() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mask, c] : terms_) {
        Rational mag = abs(c);
        if (first)
            os << (sgn(c) < 0 ? "-" : "");
        else
            os << (sgn(c) < 0 ? " - " : " + ");
        first = false;
        const Blade b(mask);
        if (mask == 0) {
            os << mag.get_str();
        } else {
            if (mag != 1)
                os << mag.get_str() << "*";
            os << b.to_string();
        }
    }
    return os.str();
}

Multivector wedge(const Multivector& a, const Multivector& b) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch("wedge: ambient dimensions differ (" + std::to_string(a.dimension()) +
                                " vs " + std::to_string(b.dimension()) + ")");
    Multivector out(a.dimension());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            const int s = wedge_sign(ma, mb);
            if (s == 0)
                continue;
            Rational prod = ca * cb;
            if (s < 0)
                prod = -prod;
            out.add_term(Blade(ma | mb), prod);
        }
    return out;
}

Multivector wedge_power(const Multivector& a, int k) {
    if (k < 0)
        throw InvalidArgument("negative wedge power");
    Multivector out = Multivector::scalar(a.dimension(), 1);
    for (int i = 0; i < k; ++i) {
        out = wedge(out, a);
        if (out.is_zero())
            break;
    }
    return out;
}

Rational top_pairing(const Multivector& a, const Multivector& b) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch("top_pairing: ambient dimensions differ");
    return wedge(a, b).coefficient(Blade::top(a.dimension()));
}

Integer graded_dimension(int n, int k) {
    if (n < 0 || k < 0 || k > n)
        throw InvalidArgument("graded_dimension: need 0 <= k <= n, got n=" + std::to_string(n) +
                              ", k=" + std::to_string(k));
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

std::vector<Blade> blades_of_degree(int n, int k) {
    check_dimension(n);
    std::vector<Blade> out;
    if (k < 0 || k > n)
        return out;
    if (k == 0)
        return {Blade(0)};
    // Gosper's hack enumerates k-subsets of n bits in increasing order.
    std::uint64_t m = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (m < limit) {
        out.emplace_back(static_cast<std::uint32_t>(m));
        const std::uint64_t c = m & (~m + 1);
        const std::uint64_t r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    return out;
}

Multivector evaluate_polynomial(const GradedPolynomial& p, std::span<const Multivector> assignment) {
    const auto& table = p.table();
    if (assignment.size() < table.size())
        throw InvalidArgument("evaluate_polynomial: no assignment for generator '" +
                              table[assignment.size()].name + "'");
    const int n = assignment.empty() ? 0 : assignment.front().dimension();
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (assignment[i].dimension() != n)
            throw DimensionMismatch("evaluate_polynomial: assigned multivectors live in different dimensions");
        if (!assignment[i].is_homogeneous(table[i].degree))
            throw DimensionMismatch("evaluate_polynomial: generator '" + table[i].name + "' has degree " +
                                    std::to_string(table[i].degree) + " but its image is not homogeneous of that degree");
    }
    Multivector out(n);
    // Powers are cached per generator since relations reuse them heavily.
    std::vector<std::vector<Multivector>> powers(table.size());
    for (const auto& [mono, coeff] : p.terms()) {
        Multivector term = Multivector::scalar(n, coeff);
        for (std::size_t i = 0; i < table.size() && !term.is_zero(); ++i) {
            const int e = mono[i];
            if (e == 0)
                continue;
            auto& cache = powers[i];
            if (cache.empty())
                cache.push_back(Multivector::scalar(n, 1));
            while (static_cast<int>(cache.size()) <= e)
                cache.push_back(wedge(cache.back(), assignment[i]));
            term = wedge(term, cache[e]);
        }
        out += term;
    }
    return out;
}

} // namespace ellip
