#include "ellip/quadform.hpp"

#include "ellip/error.hpp"
#include "ellip/exterior.hpp"

#include <set>

namespace ellip {

QuadraticForm::QuadraticForm(Matrix gram) : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols())
        throw InvalidArgument("Gram matrix must be square");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
        for (std::size_t j = i + 1; j < gram_.cols(); ++j)
            if (gram_(i, j) != gram_(j, i))
                throw InvalidArgument("Gram matrix must be symmetric");
}

QuadraticForm QuadraticForm::diagonal(const std::vector<Rational>& entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        m(i, i) = entries[i];
    return QuadraticForm(std::move(m));
}

std::size_t QuadraticForm::rank() const { return ellip::rank(gram_); }

Diagonalization diagonalize(const QuadraticForm& f) {
    const std::size_t n = f.dimension();
    Matrix a = f.gram();
    Matrix t = Matrix::identity(n);

    // Simultaneous column operation (on t) and congruence (on a).
    auto add_multiple = [&](std::size_t dst, std::size_t src, const Rational& c) {
        for (std::size_t r = 0; r < n; ++r)
            t(r, dst) += c * t(r, src);
        for (std::size_t r = 0; r < n; ++r)
            a(r, dst) += c * a(r, src);
        for (std::size_t col = 0; col < n; ++col)
            a(dst, col) += c * a(src, col);
    };
    auto swap = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < n; ++r) {
            std::swap(t(r, i), t(r, j));
            std::swap(a(r, i), a(r, j));
        }
        for (std::size_t col = 0; col < n; ++col)
            std::swap(a(i, col), a(j, col));
    };

    for (std::size_t k = 0; k < n; ++k) {
        if (is_zero(a(k, k))) {
            std::size_t p = k + 1;
            while (p < n && is_zero(a(p, p)))
                ++p;
            if (p < n) {
                swap(k, p);
            } else {
                // All remaining diagonal entries vanish; use e_k + e_j.
                std::size_t j = k + 1;
                while (j < n && is_zero(a(k, j)))
                    ++j;
                if (j == n)
                    continue; // row k is zero
                add_multiple(k, j, 1);
            }
        }
        const Rational pivot = a(k, k);
        for (std::size_t j = k + 1; j < n; ++j)
            if (!is_zero(a(k, j)))
                add_multiple(j, k, -a(k, j) / pivot);
    }
    Diagonalization d;
    for (std::size_t i = 0; i < n; ++i)
        d.entries.push_back(a(i, i));
    d.transform = std::move(t);
    return d;
}

std::vector<Integer> prime_factors(Integer m) {
    m = abs(m);
    std::vector<Integer> out;
    if (m <= 1)
        return out;
    for (Integer p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            out.push_back(p);
            while (m % p == 0)
                m /= p;
        }
    }
    if (m > 1)
        out.push_back(m);
    return out;
}

Integer squarefree_part(const Rational& q) {
    if (is_zero(q))
        throw DegenerateForm("zero has no square class");
    Integer m = q.get_num() * q.get_den();
    Integer out = sgn(m) < 0 ? -1 : 1;
    for (const auto& p : prime_factors(m)) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e % 2 == 1)
            out *= p;
    }
    return out;
}

namespace {

std::vector<Rational> nondegenerate_diagonal(const QuadraticForm& f) {
    auto d = diagonalize(f).entries;
    for (const auto& e : d)
        if (is_zero(e))
            throw DegenerateForm("quadratic form is degenerate");
    return d;
}

// Splits a nonzero integer as p^e * u with u prime to p.
int split_valuation(Integer& u, const Integer& p) {
    int e = 0;
    while (u % p == 0) {
        u /= p;
        ++e;
    }
    return e;
}

int mod8(const Integer& u) {
    Integer r = u % 8;
    if (r < 0)
        r += 8;
    return static_cast<int>(r.get_si());
}

} // namespace

Integer discriminant(const QuadraticForm& f) {
    Rational det = 1;
    for (const auto& e : nondegenerate_diagonal(f))
        det *= e;
    return squarefree_part(det);
}

std::pair<int, int> signature(const QuadraticForm& f) {
    int pos = 0, neg = 0;
    for (const auto& e : nondegenerate_diagonal(f))
        (sgn(e) > 0 ? pos : neg)++;
    return {pos, neg};
}

int hilbert_symbol(const Rational& a, const Rational& b, Place v) {
    if (is_zero(a) || is_zero(b))
        throw InvalidArgument("Hilbert symbol needs nonzero arguments");
    if (v == kInfinity)
        return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
    if (v < 2)
        throw InvalidArgument("place must be a prime or infinity");
    // Same square class, integral representatives.
    Integer x = a.get_num() * a.get_den();
    Integer y = b.get_num() * b.get_den();
    const Integer p = v;
    const int alpha = split_valuation(x, p);
    const int beta = split_valuation(y, p);
    if (v == 2) {
        const int u = mod8(x), w = mod8(y);
        const int eps_u = ((u - 1) / 2) % 2, eps_w = ((w - 1) / 2) % 2;
        const int om_u = ((u * u - 1) / 8) % 2, om_w = ((w * w - 1) / 8) % 2;
        const int e = eps_u * eps_w + alpha * om_w + beta * om_u;
        return e % 2 == 0 ? 1 : -1;
    }
    int s = 1;
    if ((alpha * beta) % 2 == 1 && (v - 1) / 2 % 2 == 1)
        s = -s;
    if (beta % 2 == 1)
        s *= mpz_legendre(x.get_mpz_t(), p.get_mpz_t());
    if (alpha % 2 == 1)
        s *= mpz_legendre(y.get_mpz_t(), p.get_mpz_t());
    return s;
}

int hasse_invariant(const QuadraticForm& f, Place v) {
    const auto d = nondegenerate_diagonal(f);
    int s = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            s *= hilbert_symbol(d[i], d[j], v);
    return s;
}

bool rationally_equivalent(const QuadraticForm& f, const QuadraticForm& g) {
    const auto df = nondegenerate_diagonal(f);
    const auto dg = nondegenerate_diagonal(g);
    if (df.size() != dg.size())
        return false;
    if (discriminant(f) != discriminant(g) || signature(f) != signature(g))
        return false;
    std::set<Integer> primes{Integer(2)};
    for (const auto* d : {&df, &dg})
        for (const auto& e : *d)
            for (const auto& p : prime_factors(e.get_num() * e.get_den()))
                primes.insert(p);
    auto hasse = [](const std::vector<Rational>& d, Place v) {
        int s = 1;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j)
                s *= hilbert_symbol(d[i], d[j], v);
        return s;
    };
    if (hasse(df, kInfinity) != hasse(dg, kInfinity))
        return false;
    for (const auto& p : primes) {
        if (!p.fits_slong_p())
            throw InvalidArgument("prime too large for a local invariant");
        if (hasse(df, p.get_si()) != hasse(dg, p.get_si()))
            return false;
    }
    return true;
}

QuadraticForm wedge_pairing_form(int n) {
    if (n < 2 || n % 2 != 0)
        throw InvalidArgument("wedge pairing form needs an even n >= 2");
    const auto blades = blades_of_degree(n, n / 2);
    Matrix g(blades.size(), blades.size());
    for (std::size_t i = 0; i < blades.size(); ++i)
        for (std::size_t j = i; j < blades.size(); ++j) {
            const int s = wedge_sign(blades[i].mask(), blades[j].mask());
            g(i, j) = s;
            g(j, i) = s;
        }
    return QuadraticForm(std::move(g));
}

} // namespace ellip
