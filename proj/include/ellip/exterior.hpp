#pragma once

// Exact arithmetic in the exterior algebra over Q^n.
//
// Basis blades e_{i1..ik} (1 <= i1 < ... < ik <= n) are keyed by a bitmask,
// bit (i-1) standing for index i, so n <= 32. Sign convention: swapping two
// adjacent factors of odd degree contributes -1; even-degree factors are
// central. The same convention is used for generators of graded
// polynomials (see polynomial.hpp).

#include "ellip/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ellip {

inline constexpr int kMaxExteriorDimension = 32;

class Blade {
public:
    constexpr Blade() = default;
    constexpr explicit Blade(std::uint32_t mask) : mask_(mask) {}

    /// Indices are 1-based and must be strictly increasing, each in [1, n].
    static Blade from_indices(std::span<const int> indices, int n);
    static Blade top(int n);

    constexpr std::uint32_t mask() const noexcept { return mask_; }
    int degree() const noexcept;
    std::vector<int> indices() const;
    std::string to_string() const;

    constexpr auto operator<=>(const Blade&) const = default;

private:
    std::uint32_t mask_ = 0;
};

/// Sign of e_a ^ e_b relative to e_{a|b}: +1/-1, or 0 when the blades share
/// an index.
int wedge_sign(std::uint32_t a, std::uint32_t b) noexcept;

class Multivector {
public:
    explicit Multivector(int n = 0);

    static Multivector scalar(int n, const Rational& value);
    /// Single blade, e.g. blade(4, {1, 2}) is e_{12} in Lambda Q^4.
    static Multivector blade(int n, std::initializer_list<int> indices, const Rational& coeff = 1);
    static Multivector blade(int n, Blade b, const Rational& coeff = 1);

    int dimension() const noexcept { return n_; }
    const std::map<std::uint32_t, Rational>& terms() const noexcept { return terms_; }

    Rational coefficient(Blade b) const;
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Degree of a nonzero homogeneous element; nullopt for zero or mixed.
    std::optional<int> degree() const;
    /// Zero counts as homogeneous of every degree.
    bool is_homogeneous(int k) const;
    /// Degree-k component.
    Multivector component(int k) const;
    /// Largest |coefficient|, as a double.
    double max_abs_coefficient() const;

    /// The same element viewed inside Lambda Q^m, m >= n.
    Multivector embedded(int m) const;

    void add_term(Blade b, const Rational& coeff);

    Multivector& operator+=(const Multivector& other);
    Multivector& operator-=(const Multivector& other);
    Multivector& operator*=(const Rational& s);
    friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
    friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
    friend Multivector operator*(Multivector a, const Rational& s) { return a *= s; }
    friend Multivector operator*(const Rational& s, Multivector a) { return a *= s; }
    Multivector operator-() const { return *this * Rational(-1); }

    bool operator==(const Multivector& other) const = default;

    std::string to_string() const;

private:
    int n_;
    std::map<std::uint32_t, Rational> terms_;
};

Multivector wedge(const Multivector& a, const Multivector& b);
Multivector wedge_power(const Multivector& a, int k);

/// Coefficient of e_{1..n} in a ^ b.
Rational top_pairing(const Multivector& a, const Multivector& b);

/// binomial(n, k); throws InvalidArgument unless 0 <= k <= n.
Integer graded_dimension(int n, int k);

/// All blades of degree k in Lambda^k Q^n, in increasing mask order.
std::vector<Blade> blades_of_degree(int n, int k);

class GradedPolynomial;

/// Substitutes multivectors for generators (assignment[i] for generator i
/// of the polynomial's table). Throws InvalidArgument for a missing
/// generator and DimensionMismatch for a degree mismatch.
Multivector evaluate_polynomial(const GradedPolynomial& p, std::span<const Multivector> assignment);

} // namespace ellip
