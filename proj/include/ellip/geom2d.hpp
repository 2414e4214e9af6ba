#pragma once
// Rotationally symmetric surfaces (type problem, curvature, volumes of
// revolution) and lattice-loop combinatorics on the integer grid.
#include "ellip/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ellip {

enum class SurfaceType { Parabolic, Hyperbolic, Inconclusive };
std::string_view to_string(SurfaceType t);

struct Samples {
    std::vector<double> r;     // strictly increasing
    std::vector<double> value; // same length
};

enum class ProfileFamily { Euclidean, Hyperbolic, PowerLog, InverseSquare, Tabulated };

/// Circumference data L(r) of geodesic circles about a point. Closed-form
/// families carry their parameter; tabulated profiles carry samples of L.
struct RadialProfile {
    ProfileFamily family = ProfileFamily::Tabulated;
    double epsilon = 0;     // PowerLog: rho = r (log r)^(1 + epsilon)
    Samples circumference;  // Tabulated

    static RadialProfile euclidean() { return {ProfileFamily::Euclidean, 0, {}}; }
    static RadialProfile hyperbolic() { return {ProfileFamily::Hyperbolic, 0, {}}; }
    static RadialProfile power_log(double eps) { return {ProfileFamily::PowerLog, eps, {}}; }
    /// Curvature -1/r^2 in the tail: rho = r^phi, phi the golden ratio.
    static RadialProfile inverse_square() { return {ProfileFamily::InverseSquare, 0, {}}; }
    static RadialProfile tabulated(Samples s);
    /// Samples of L(r) = 2 pi r log(e + r), log-spaced on [1, 2^40].
    static RadialProfile spiky_plane(int per_window = 64);

    std::string name() const;
    /// rho(r) for the closed-form families (r >= e for the log families).
    double rho(double r) const;
    /// Analytic -rho''/rho for the closed-form families.
    double curvature(double r) const;
};

struct WindowIntegral {
    double r_lo;
    double r_hi;
    double integral; // of dr / L(r)
};

struct AhlforsReport {
    SurfaceType type = SurfaceType::Inconclusive;
    bool analytic = false;
    std::string reason;
    std::vector<WindowIntegral> trace;
};

/// Closed-form families are decided analytically (the trace is still
/// filled); tabulated profiles use dyadic-window sums of dr/L:
/// Hyperbolic if at least 8 consecutive trailing window ratios are < 0.9,
/// Parabolic if the last 8 window sums are within a factor 2 of each other.
/// Throws InvalidArgument for non-positive or non-finite samples.
AhlforsReport ahlfors_classify(const RadialProfile& p);

struct MilnorReport {
    SurfaceType type = SurfaceType::Inconclusive;
    double q_min = 0; // of q(r) = -K r^2 log r over the samples
    double q_max = 0;
    double fitted_epsilon = 0;
};

/// Parabolic if K >= -1/(r^2 log r) on all samples, Hyperbolic if
/// K <= -(1 + eps)/(r^2 log r) with eps > tol; samples must have r > 1
/// (InvalidArgument otherwise).
MilnorReport milnor_classify(const Samples& curvature, double tol = 1e-6);
/// Curvature samples of a closed-form family on a log-spaced tail grid.
Samples family_curvature_samples(const RadialProfile& p, double r0 = 3.0, double r1 = 1e12, int count = 400);

/// K = -rho''/rho by central differences on interior samples. Throws
/// InvalidArgument if a grid step exceeds max_step or rho <= 0.
Samples curvature_from_profile(const Samples& rho, double max_step = 1e-2);

/// Volume of the hypersurface of revolution in R^(n+1) swept by the graph
/// of rho over [a, b]: omega_(n-1) * integral rho^(n-1) sqrt(1 + rho'^2).
/// rho' by central differences; composite Simpson on the samples.
double revolution_volume(const Samples& rho, int n, double a, double b);

/// Profile with local minima rho(p) = 2^(-2p/(n-1)) and maxima
/// rho(p + 1/2) = 2^(-p/(n-1)). Each half nodule is a cubic smoothstep ramp
/// reaching the maximum after a fraction w_p of its length, followed by a
/// plateau; w_p is chosen so that the mean of rho over [p, p + 1] is
/// kappa(n) times the local maximum.
class NoduleProfile {
public:
    explicit NoduleProfile(int n);
    int dimension() const noexcept { return n_; }
    double kappa() const noexcept { return kappa_; }
    double minimum(int p) const;
    double maximum(int p) const;
    double ramp_fraction(int p) const;
    double operator()(double t) const;
    Samples sample(double a, double b, int points) const;
    /// Volume of the nodule over [p, p + 1].
    double nodule_volume(int p, int points_per_unit = 4000) const;

private:
    int n_;
    double kappa_;
};

// ---------------------------------------------------------------------------
// Lattice loops

enum class Step : std::uint8_t { R = 0, U = 1, L = 2, D = 3 };
Step inverse(Step s);

struct LatticeLoop {
    std::vector<Step> steps;
    std::int64_t x0 = 0;
    std::int64_t y0 = 0;

    /// "RULD" style; throws InvalidArgument for other characters.
    static LatticeLoop parse(std::string_view text, std::int64_t x0 = 0, std::int64_t y0 = 0);
    std::string to_string() const;
    bool is_closed() const;
    std::size_t length() const { return steps.size(); }
};

/// Cancels backtracks, including across the basepoint (cyclic reduction).
/// The basepoint moves along with the cancelled spur.
LatticeLoop reduce_loop(const LatticeLoop& loop);

/// (left turns - right turns) / 4 around a reduced closed loop, including the
/// corner at the basepoint. Throws PreconditionError for an empty,
/// non-reduced or open loop.
Rational turning_number(const LatticeLoop& loop);

/// Turning number after replacing every excursion through the square
/// [-h, h]^2 by a monotone staircase between its entry and exit vertices.
Rational turning_number_rel_square(const LatticeLoop& loop, std::int64_t h);

/// Cellular 1-chain: edge -> coefficient. Horizontal edges ('h', i, j) run
/// from (i, j) to (i + 1, j); vertical edges ('v', i, j) from (i, j) to
/// (i, j + 1).
using Edge = std::tuple<char, std::int64_t, std::int64_t>;
using Cell = std::pair<std::int64_t, std::int64_t>; // [i, i + 1] x [j, j + 1]

struct LatticeChain1 {
    std::map<Edge, std::int64_t> coeff;
    void add_loop(const LatticeLoop& loop, std::int64_t multiplicity = 1);
    bool is_cycle() const;
    std::int64_t mass() const;
    LatticeChain1& operator+=(const LatticeChain1& other);
};

struct LatticeChain2 {
    std::map<Cell, std::int64_t> coeff;
    std::int64_t mass() const;
    LatticeChain1 boundary() const;
    /// sum over levels i >= 1 of 4 sqrt(#{c >= i}) + 4 sqrt(#{c <= -i}).
    double isoperimetric_bound() const;
};

/// Unique finitely supported 2-chain with boundary z (winding numbers).
/// Throws PreconditionError if z is not a cycle.
LatticeChain2 fill_cycle(const LatticeChain1& z);

} // namespace ellip
