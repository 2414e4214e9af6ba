#pragma once
// Ring homomorphisms H*(M) -> Lambda R^n: exact verification, injectivity
// certificates, necessary-condition checks, and the embedding search.
#include "ellip/algebra.hpp"
#include "ellip/exterior.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ellip {

enum class Verdict { Pass, Fail, Inconclusive, Info };
std::string_view to_string(Verdict v);

struct CheckResult {
    std::string id;
    Verdict verdict = Verdict::Inconclusive;
    std::string citation;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> witness;
};

/// Generator i of the source is sent to assignment[i] in Lambda Q^n.
struct RingMorphism {
    AlgebraPresentation source;
    int n = 0;
    std::vector<Multivector> assignment;

    std::string to_string() const;
    /// The same morphism composed with Lambda Q^n -> Lambda Q^m, m >= n.
    RingMorphism padded(int m) const;
};

/// Floating-point morphism; coefficients per generator over the blades of
/// its degree in mask order.
struct FloatMorphism {
    AlgebraPresentation source;
    int n = 0;
    std::vector<std::vector<double>> coefficients;
};

/// True iff every relation maps to 0 and, when the source is truncated above
/// its formal dimension, so does every monomial of degree in (dim, n].
/// Throws DimensionMismatch on degree or size mismatch.
bool verify_morphism(const RingMorphism& m);
/// Same test with |coefficient| <= tol in floating point.
bool verify_morphism(const FloatMorphism& m, double tol);
/// Largest relation-image coefficient in absolute value.
double relation_residual(const FloatMorphism& m);

/// True iff the fundamental class maps to a nonzero element. Throws
/// PreconditionError if the source fails Poincare duality or m is not a
/// well-defined ring map.
bool certify_injective(const RingMorphism& m);

/// Degree-1 checks relative to a target Lambda R^target (target defaults to
/// the formal dimension): rank k of H^1 must be at most target, must not be
/// target - 1 when target equals the formal dimension, and H^1 must generate
/// an exterior algebra on k generators.
CheckResult torus_subalgebra_check(const GradedBasis& a, std::optional<int> target = std::nullopt);
CheckResult torus_subalgebra_check(const AlgebraPresentation& a);
/// The two halves of torus_subalgebra_check, reported separately by the battery.
CheckResult rank_check(const GradedBasis& a, std::optional<int> target = std::nullopt);
CheckResult exterior_subalgebra_check(const GradedBasis& a);

/// Fails iff H^1 != 0 and the Euler characteristic is nonzero.
CheckResult euler_obstruction(const GradedBasis& a);
CheckResult euler_obstruction(const AlgebraPresentation& a);

enum class Pi1Class { Trivial, Finite, Z, Z2, Z3, Z4, Other };
Pi1Class pi1_class_from_rank(int rank);

struct FourManifoldVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::string label;
    std::string reason;
};

/// Finite pi1: passes iff b+ <= 3 and b- <= 3. Infinite pi1 of rank r:
/// chi = 2 - 2r + b+ + b- must vanish and the form must match the cover
/// T^4 (3,3), T^2 x S^2 (1,1) or S^1 x S^3 (0,0); rank 3 always fails.
/// Throws InvalidArgument for negative Betti numbers or Pi1Class::Other.
FourManifoldVerdict fourmanifold_battery(int b_plus, int b_minus, Pi1Class pi1);

struct SearchOptions {
    int budget = 16;            // floating restarts
    std::uint64_t seed = 1;
    double tolerance = 1e-9;    // max relation coefficient
    double fundamental_floor = 1e-6;
    std::int64_t max_denominator = 10000;
    std::size_t exact_node_limit = 200000;
    std::size_t exact_pool_limit = 4000;
    int max_iterations = 150;
    bool run_exact = true;
    bool run_floating = true;
};

enum class SearchStatus { Certified, Numerical, NotFound, Obstructed };
std::string_view to_string(SearchStatus s);

struct SearchResult {
    SearchStatus status = SearchStatus::NotFound;
    std::optional<RingMorphism> witness;        // exact witness when certified
    std::optional<FloatMorphism> numeric;       // floating candidate when numerical
    std::optional<CheckResult> obstruction;     // failing necessary condition
    std::string method;                         // "exact-ansatz" or "least-squares"
    double residual = -1;                       // best floating residual seen (-1: none)
    int trial = -1;
    std::size_t exact_nodes = 0;
};

/// Semidecision procedure: structured exact ansatz (sums of disjoint
/// blades), then seeded Levenberg-Marquardt restarts with rational rounding.
/// NotFound never asserts non-existence; Obstructed carries the failed check.
SearchResult search_embedding(const AlgebraPresentation& a, int n, const SearchOptions& options = {});

} // namespace ellip
