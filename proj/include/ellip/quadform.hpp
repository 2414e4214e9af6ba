#pragma once
// Quadratic forms over Q: congruence diagonalization, discriminant,
// signature, Hilbert symbols and Hasse invariants.
#include "ellip/linalg.hpp"

#include <utility>
#include <vector>

namespace ellip {

/// Place of Q: a prime p, or kInfinity for the real place.
using Place = long;
inline constexpr Place kInfinity = 0;

class QuadraticForm {
public:
    QuadraticForm() = default;
    /// Throws InvalidArgument unless gram is square and symmetric.
    explicit QuadraticForm(Matrix gram);
    static QuadraticForm diagonal(const std::vector<Rational>& entries);

    const Matrix& gram() const noexcept { return gram_; }
    std::size_t dimension() const noexcept { return gram_.rows(); }
    std::size_t rank() const;
    bool is_degenerate() const { return rank() < dimension(); }

private:
    Matrix gram_;
};

struct Diagonalization {
    std::vector<Rational> entries;
    Matrix transform; // T with T^t * gram * T = diag(entries)
};

Diagonalization diagonalize(const QuadraticForm& f);

/// det(gram) modulo nonzero rational squares, as a squarefree integer.
/// Throws DegenerateForm for degenerate f.
Integer discriminant(const QuadraticForm& f);
std::pair<int, int> signature(const QuadraticForm& f);

/// Squarefree integer in the square class of a nonzero rational.
Integer squarefree_part(const Rational& q);
/// Distinct prime factors of |m|, increasing (trial division).
std::vector<Integer> prime_factors(Integer m);

/// (a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over Q_v.
int hilbert_symbol(const Rational& a, const Rational& b, Place v);
/// Product of (d_i, d_j)_v over i < j for any diagonalization.
int hasse_invariant(const QuadraticForm& f, Place v);

/// Equal rank, discriminant, signature, and Hasse invariants at infinity and
/// at every prime where the two forms can differ (2 and all primes dividing
/// a diagonal entry of either form).
bool rationally_equivalent(const QuadraticForm& f, const QuadraticForm& g);

/// Gram matrix of (a, b) -> coefficient of e_{1..n} in a ^ b on the blade
/// basis of Lambda^{n/2} Q^n. For n = 2 mod 4 the pairing is alternating; it
/// is symmetrized by using the value with the earlier blade (mask order)
/// on the left.
QuadraticForm wedge_pairing_form(int n);

} // namespace ellip
