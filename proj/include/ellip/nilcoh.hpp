#pragma once
// Nilpotent Lie algebras over Q as Mal'cev models of fundamental groups:
// lower central series, Chevalley-Eilenberg cohomology, growth degree.
#include "ellip/algebra.hpp"
#include "ellip/exterior.hpp"
#include "ellip/linalg.hpp"

#include <random>
#include <string>
#include <vector>

namespace ellip {

/// One structure constant: [X_i, X_j] has coefficient c on X_k (1-based).
struct BracketTerm {
    int i = 0;
    int j = 0;
    int k = 0;
    Rational c;
};

class NilLieAlgebra {
public:
    explicit NilLieAlgebra(int m = 0);
    /// Terms with i > j are stored antisymmetrically; i == j is rejected.
    /// Repeated (i, j, k) entries accumulate.
    static NilLieAlgebra from_brackets(int m, const std::vector<BracketTerm>& terms);
    static NilLieAlgebra abelian(int m) { return NilLieAlgebra(m); }
    static NilLieAlgebra heisenberg(); // [X1, X2] = X3
    static NilLieAlgebra filiform(int m); // [X1, Xi] = X(i+1), 2 <= i < m

    int dimension() const noexcept { return m_; }
    /// Coefficient of X_k in [X_i, X_j], 0-based.
    const Rational& structure(int i, int j, int k) const {
        return c_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k];
    }
    std::vector<Rational> bracket(const std::vector<Rational>& x, const std::vector<Rational>& y) const;
    bool is_abelian() const;
    /// Nonzero structure constants with i < j, 1-based.
    std::vector<BracketTerm> terms() const;
    /// Structure constants after the change of basis X'_a = sum_b A(b, a) X_b.
    NilLieAlgebra change_basis(const Matrix& a) const;

private:
    void set(int i, int j, int k, const Rational& v);
    int m_;
    std::vector<Rational> c_;
};

bool jacobi_check(const NilLieAlgebra& g);

struct CentralSeries {
    std::vector<std::size_t> dims; // dim gamma_1 = m, ..., ending with 0
    std::vector<Echelon> spans;    // gamma_k as a row space, same indexing
    int nilpotency_class() const noexcept { return static_cast<int>(dims.size()) - 1; }
};

/// Throws NotNilpotent if the series stabilizes above 0, PreconditionError if
/// the Jacobi identity fails.
CentralSeries lower_central_series(const NilLieAlgebra& g);

struct CEComplex {
    int m = 0;
    std::vector<std::vector<Blade>> basis; // blades of Lambda^k g*, k = 0..m
    std::vector<Matrix> d;                 // d[k] : Lambda^k -> Lambda^(k+1), k = 0..m-1
    /// d applied to a form given as a multivector in Lambda(g*).
    Multivector apply(const Multivector& form) const;
};

/// d(xi_k) = -sum_{i<j} c^k_ij xi_i ^ xi_j, extended as a graded derivation.
/// Throws ConsistencyError if d^2 != 0.
CEComplex ce_differential(const NilLieAlgebra& g);
std::vector<std::size_t> lie_cohomology_dims(const NilLieAlgebra& g);
std::vector<std::size_t> lie_cohomology_dims(const CEComplex& ce);

struct NomizuReport {
    std::size_t kernel = 0;
    std::size_t dim_q1 = 0; // g / [g, g]
    std::size_t dim_q2 = 0; // g / [[g, g], g]
    bool abelian = false;
};

/// dim ker(H^2(q1) -> H^2(q2)). Throws ConsistencyError if the kernel
/// differs from dim q2 - dim q1.
NomizuReport nomizu_kernel(const NilLieAlgebra& g);

/// Quotient of g by an ideal, with basis the standard vectors of the free
/// columns of the ideal's echelon form.
NilLieAlgebra quotient_algebra(const NilLieAlgebra& g, const Echelon& ideal);

/// sum_k k * (dim gamma_k - dim gamma_(k+1)).
int bass_growth_degree(const NilLieAlgebra& g);

/// Ranks, in degrees 0..m, of the subalgebra of H*(g) generated by H^1.
std::vector<std::size_t> degree1_subalgebra_ranks(const NilLieAlgebra& g);

struct Pi1Verdict {
    bool pass = false;
    int growth_degree = 0;
    int nilpotency_class = 0;
    bool abelian = false;
    std::string reason;
};

/// Fails if the growth degree exceeds n or g is nonabelian.
Pi1Verdict pi1_verdict(const NilLieAlgebra& g, int n);

/// Multiplication-table presentation of H*(g): one generator c<k>_<i> per
/// basis class of H^k (k >= 1, cocycle representatives chosen from the
/// nullspace of d), one relation per product of two generators of total
/// degree <= m, fundamental class the degree-m generator.
AlgebraPresentation lie_cohomology_presentation(const NilLieAlgebra& g);

/// Nonabelian nilpotent algebra of dimension m (3 <= m <= 10) built by
/// iterated central extensions along random 2-cocycles, followed by a random
/// change of basis with small integer entries.
NilLieAlgebra random_nilpotent_algebra(int m, std::mt19937_64& rng);

} // namespace ellip
