#pragma once

#include "ellip/rational.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ellip {

struct Generator {
    std::string name;
    int degree = 1;

    bool odd() const noexcept { return degree % 2 != 0; }
    bool operator==(const Generator&) const = default;
};

using GeneratorTable = std::vector<Generator>;
using Monomial = std::vector<int>; // exponent per generator, table order

/// Degree of a monomial under the generator degrees.
int monomial_degree(const Monomial& m, const GeneratorTable& table);

/// Sign of m1 * m2 after reordering into table order; 0 if an odd generator
/// would appear squared.
int monomial_product_sign(const Monomial& m1, const Monomial& m2, const GeneratorTable& table);

/// All monomials of graded degree k (odd exponents <= 1), lexicographic.
std::vector<Monomial> monomials_of_degree(int k, const GeneratorTable& table);

/// Element of the free graded-commutative algebra Q[w_1..w_r].
/// Terms are kept in canonical form: table order, nonzero coefficients,
/// odd exponents 0 or 1.
class GradedPolynomial {
public:
    GradedPolynomial() = default;
    explicit GradedPolynomial(std::shared_ptr<const GeneratorTable> table);

    static GradedPolynomial constant(std::shared_ptr<const GeneratorTable> table, const Rational& c);
    static GradedPolynomial generator(std::shared_ptr<const GeneratorTable> table, std::size_t index);
    static GradedPolynomial monomial(std::shared_ptr<const GeneratorTable> table, Monomial m,
                                     const Rational& c = 1);

    const GeneratorTable& table() const { return *table_; }
    const std::shared_ptr<const GeneratorTable>& table_ptr() const noexcept { return table_; }
    const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    /// Common degree of all terms; -1 for the zero polynomial. Throws
    /// InvalidArgument if terms of different degrees are mixed.
    int degree() const;
    bool is_homogeneous() const;

    void add_term(const Monomial& m, const Rational& c);

    GradedPolynomial& operator+=(const GradedPolynomial& other);
    GradedPolynomial& operator-=(const GradedPolynomial& other);
    GradedPolynomial& operator*=(const Rational& s);
    friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) { return a += b; }
    friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) { return a -= b; }
    friend GradedPolynomial operator*(GradedPolynomial a, const Rational& s) { return a *= s; }
    friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b);

    bool operator==(const GradedPolynomial& other) const { return terms_ == other.terms_; }

    std::string to_string() const;

private:
    std::shared_ptr<const GeneratorTable> table_;
    std::map<Monomial, Rational> terms_;
};

/// Parses expressions such as "x1*y1 - x2*y2", "2/3 w^2", "a b - c".
/// Juxtaposition and '*' both multiply; '^' takes a nonnegative integer.
/// Odd generators with exponent > 1 raise InvalidArgument.
GradedPolynomial parse_polynomial(std::string_view text, std::shared_ptr<const GeneratorTable> table);

} // namespace ellip
