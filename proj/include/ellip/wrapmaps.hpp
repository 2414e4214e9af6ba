#pragma once
// Explicit wrapping maps into spheres and their numerical verification:
// Lipschitz constants, Jacobian floors, asymptotic degree, quasiregularity.
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ellip {

struct Polar {
    double r;
    double theta;
};

/// Strip map [-1,1] x [0,inf) -> punctured unit disk:
/// r = x + e^-y (1 - x), theta = y + ln r for x >= 0, mirrored (theta
/// negated) for x < 0. Throws InvalidArgument outside the domain.
Polar eval_f0(double x, double y);

/// Hemisphere charts p+/-(r e^(i theta)) = (sin(pi r/2) cos theta,
/// sin(pi r/2) sin theta, +/- cos(pi r/2)); they agree on r = 1.
std::array<double, 3> hemisphere_plus(Polar w);
std::array<double, 3> hemisphere_minus(Polar w);

/// R^2 -> S^2 minus both poles: p+(f0) on [-1,1] x [0,inf), p-(f0(2-x,y))
/// on [1,3] x [0,inf), period 4 in x, and the lower half plane mapped by
/// reflecting the third coordinate of f(x, -y).
std::array<double, 3> eval_sphere_wrap(double x, double y);

/// R^d -> S^d in R^(d+1), 1-periodic: inside the inscribed ball of each unit
/// cube, v = z - center, s = |v| maps to (sin(2 pi s) v'/|v|, -cos(2 pi s)),
/// where v' is v with its first coordinate negated when d is even (so the
/// degree is +1); everything else maps to the basepoint (0, ..., 0, 1).
std::vector<double> eval_torus_collapse(const std::vector<double>& z);

/// R^n -> S^n minus the great S^(n-2) {u_0 = u_1 = 0}, n >= 3:
/// q(f0(x, y), g(z)) with the join parametrisation
/// q(r e^(i theta), u) = (sin(pi r/2) e^(i theta), cos(pi r/2) u), the
/// [1,3] branch using f0(2 - x, y) and g(flip(z)), period 4 in x, and
/// f(x, -y, z) = f(x, y, flip(z)); flip negates the first z coordinate.
std::vector<double> eval_fn(double x, double y, const std::vector<double>& z, int n);

enum class MapTag { Identity, Constant, RadialStretch, F0, SphereWrap, TorusCollapse, JoinMap };
enum class TargetKind { Euclidean, Sphere };

class EvaluableMap {
public:
    static EvaluableMap identity(int n);
    static EvaluableMap constant(int n);
    /// x -> |x|^alpha x on R^2.
    static EvaluableMap radial_stretch(double alpha);
    /// eval_f0 in Cartesian coordinates.
    static EvaluableMap f0();
    static EvaluableMap sphere_wrap();
    static EvaluableMap torus_collapse(int d);
    static EvaluableMap join_map(int n);

    MapTag tag() const noexcept { return tag_; }
    int domain_dim() const noexcept { return n_; }
    TargetKind target() const noexcept { return target_; }
    /// Dimension of the target manifold (S^m or R^m).
    int target_dim() const noexcept { return m_; }
    /// Coordinates used to store a target point: m + 1 for spheres.
    int ambient_dim() const noexcept { return target_ == TargetKind::Sphere ? m_ + 1 : m_; }
    std::string name() const;

    void eval(const double* x, double* out) const;
    std::vector<double> eval(const std::vector<double>& x) const;
    /// True if x is within delta of a piecewise seam or a point where the
    /// map is not differentiable.
    bool near_seam(const double* x, double delta) const;
    /// Target distance: chord for R^m, great-circle for S^m.
    double target_distance(const double* a, const double* b) const;

private:
    MapTag tag_ = MapTag::Identity;
    int n_ = 2;
    int m_ = 2;
    TargetKind target_ = TargetKind::Euclidean;
    double alpha_ = 0;
};

inline constexpr double kDerivativeStep = 1e-5;

/// Central-difference differential, ambient_dim x domain_dim, row-major.
std::vector<double> differential(const EvaluableMap& m, const std::vector<double>& x, double h = kDerivativeStep);
/// Pullback of the target volume form: det Df for R^n -> R^n,
/// det[F, dF/dx_1, ..., dF/dx_n] for R^n -> S^n.
double volume_jacobian(const EvaluableMap& m, const std::vector<double>& x, double h = kDerivativeStep);

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct LipschitzReport {
    double value = 0;
    double step = 0;
    long pairs = 0;
};

/// Max over grid-neighbour pairs in the box of target distance / step.
LipschitzReport estimate_lipschitz(const EvaluableMap& m, const Box& region, double step);

struct DegreeReport {
    std::string map;
    std::vector<double> radii;
    std::vector<double> normalized; // R^-n * integral over B_R of the Jacobian
    double step = 0;
    long samples = 0;
    long masked = 0;
    std::optional<double> lipschitz;
    std::optional<double> jacobian_floor;
    std::optional<double> qr_ratio;
    std::vector<std::string> warnings;

    /// Least-squares slope of normalized against R.
    double trend_slope() const;
    /// "R,normalized" lines with a header.
    std::string delimited() const;
};

/// Midpoint quadrature of the Jacobian over B_R on a cubic grid of the
/// given step, all radii from one grid; samples within twice the derivative
/// step of a seam contribute zero and are counted in `masked`. Throws
/// InvalidArgument for non-increasing radii or a non-positive step.
DegreeReport asymptotic_degree(const EvaluableMap& m, const std::vector<double>& radii, double step);

/// [2z + 1/2, 2z + 3/2] x ([-y1, -y0] u [y0, y1]) for z_lo <= z <= z_hi.
std::vector<Box> strip_set(int z_lo, int z_hi, double y0, double y1);

/// Minimum sampled Jacobian over the boxes, about `samples` points split by
/// volume on regular grids; seam samples skipped.
double jacobian_floor(const EvaluableMap& m, const std::vector<Box>& set, long samples);

struct QrReport {
    double sup = 0;
    bool diverged = false;
    double nonpositive_fraction = 0;
    std::vector<double> worst_point;
    long used = 0;
};

/// sup of |Df|_op^n / det Df over samples with det > 0; diverged when the
/// ratio exceeds 1e6 or det <= 0 on more than 1% of the samples.
QrReport quasiregularity_ratio(const EvaluableMap& m, const std::vector<std::vector<double>>& samples);

/// Midpoint-rule integral of the Jacobian over a box (seams contribute 0).
double integrate_jacobian(const EvaluableMap& m, const Box& b, int per_axis);

/// Regular grid of per_axis^n points in a box (cell midpoints).
std::vector<std::vector<double>> grid_samples(const Box& b, int per_axis);

/// Minimum over a per_axis^n midpoint grid of |(F_0, F_1)|, the chordal
/// distance scale to the locus {u_0 = u_1 = 0} (both poles for S^2).
double min_excluded_locus_distance(const EvaluableMap& m, const Box& b, int per_axis);

struct OrientationCount {
    long positive = 0;
    long negative = 0;
    long degenerate = 0; // |J| <= eps
};
OrientationCount orientation_census(const EvaluableMap& m, const Box& b, int per_axis, double eps = 1e-9);

} // namespace ellip
