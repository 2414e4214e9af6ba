#pragma once

// Finitely presented graded-commutative algebras modelling H*(M; R), and
// concrete subalgebras of the exterior algebra.

#include "ellip/exterior.hpp"
#include "ellip/linalg.hpp"
#include "ellip/polynomial.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ellip {

/// Q[w_1..w_r] / (p_1..p_s), formal dimension n. Anticommutation of odd
/// generators is built in and must not be restated as a relation.
struct AlgebraPresentation {
    std::shared_ptr<const GeneratorTable> generators;
    std::vector<GradedPolynomial> relations;
    int n = 0;
    std::optional<GradedPolynomial> fundamental_class;
    bool truncate_above_n = true;

    /// Convenience constructor parsing relation strings against the table.
    static AlgebraPresentation make(GeneratorTable generators, const std::vector<std::string>& relations, int n,
                                    std::optional<std::string> fundamental = std::nullopt);

    GradedPolynomial parse(std::string_view text) const { return parse_polynomial(text, generators); }
    std::size_t generator_count() const { return generators ? generators->size() : 0; }
};

struct DegreeComponent {
    int degree = 0;
    std::vector<Monomial> monomials;      // coordinate order for this degree
    Echelon ideal;                        // span of relation multiples, monomial coordinates
    std::vector<Monomial> representatives; // monomials whose classes form a basis of the quotient
    std::vector<std::size_t> free_columns;

    std::size_t rank() const noexcept { return representatives.size(); }
};

/// Linear normal form of a presentation, degree by degree up to n.
class GradedBasis {
public:
    int top_degree() const noexcept { return n_; }
    std::size_t rank(int k) const;
    std::vector<std::size_t> ranks() const;
    const DegreeComponent& component(int k) const { return components_.at(static_cast<std::size_t>(k)); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    const std::optional<GradedPolynomial>& fundamental_class() const noexcept { return fundamental_; }
    const std::shared_ptr<const GeneratorTable>& generators() const noexcept { return generators_; }

    /// Coordinates of a homogeneous polynomial's class against the
    /// representatives of its degree. Degrees outside [0, n] map to the empty
    /// vector (truncation).
    std::vector<Rational> coordinates(const GradedPolynomial& p) const;
    bool is_zero_class(const GradedPolynomial& p) const;
    GradedPolynomial representative(int k, std::size_t i) const;

    /// Coefficient of the fundamental class in the product of two classes
    /// whose degrees sum to n. Requires rank n == 1.
    Rational pairing(const GradedPolynomial& a, const GradedPolynomial& b) const;

private:
    friend GradedBasis basis_and_dims(const AlgebraPresentation& a);

    int n_ = 0;
    bool truncate_ = true;
    std::shared_ptr<const GeneratorTable> generators_;
    std::vector<GradedPolynomial> relations_;
    std::vector<DegreeComponent> components_;
    std::vector<std::string> warnings_;
    std::optional<GradedPolynomial> fundamental_;
};

/// Throws DegeneratePresentation if an explicit fundamental class lies in
/// the relation ideal, InvalidArgument for malformed presentations.
GradedBasis basis_and_dims(const AlgebraPresentation& a);

long euler_characteristic(const GradedBasis& basis);
long euler_characteristic(const AlgebraPresentation& a);

struct DualityReport {
    bool holds = false;
    std::optional<int> failing_degree;
    std::string detail;
};

/// Degrees 1..n-1 are examined first, then 0 and n, and the first failure
/// is reported.
DualityReport check_poincare_duality(const GradedBasis& basis);
DualityReport check_poincare_duality(const AlgebraPresentation& a);

/// A graded subalgebra of Lambda Q^n, stored as a basis per degree.
class ConcreteSubalgebra {
public:
    /// The subalgebra generated (under wedge, with unit) by the given
    /// homogeneous elements.
    static ConcreteSubalgebra generated_by(int n, const std::vector<Multivector>& generators);
    /// The span of the given homogeneous elements; throws PreconditionError
    /// unless it contains 1 and is closed under wedge.
    static ConcreteSubalgebra from_span(int n, const std::vector<Multivector>& elements);

    int ambient_dimension() const noexcept { return n_; }
    /// Largest degree with a nonzero component (-1 if empty).
    int top_degree() const;
    const std::vector<Multivector>& basis(int k) const { return basis_.at(static_cast<std::size_t>(k)); }
    std::size_t dim(int k) const { return basis_.at(static_cast<std::size_t>(k)).size(); }
    std::size_t total_dim() const;
    long euler_characteristic() const;
    bool contains(const Multivector& v) const;

    DualityReport check_poincare_duality() const;

private:
    void insert(const Multivector& v); // returns silently if already spanned
    bool insert_new(const Multivector& v);

    int n_ = 0;
    std::vector<std::vector<Multivector>> basis_;
    std::vector<Echelon> echelon_;
};

struct QuotientReport {
    std::vector<std::size_t> quotient_dims; // dim (A/(x))_k
    std::vector<std::size_t> ideal_dims;    // dim (x)_k
    std::size_t dim_quotient = 0;
    std::size_t dim_ideal = 0;
    DualityReport quotient_duality;         // pairing (a, b) -> [x a b] into the top of A
};

/// Ideal (x) = x ^ A and the quotient A/(x) for a degree-1 element x of a
/// Poincare duality subalgebra A. Throws PreconditionError if A is not PD or
/// x is not a degree-1 element of A, InvalidArgument if x = 0.
QuotientReport quotient_by_degree1(const ConcreteSubalgebra& a, const Multivector& x);

} // namespace ellip
