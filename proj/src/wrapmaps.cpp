#include "ellip/wrapmaps.hpp"

#include "ellip/error.hpp"
#include "ellip/simd/kernels.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ellip {

namespace {
constexpr double kPi = std::numbers::pi;
}

Polar eval_f0(double x, double y) {
    if (!(x >= -1 && x <= 1) || !(y >= 0) || !std::isfinite(y))
        throw InvalidArgument(fmt::format("f0: ({}, {}) outside [-1,1] x [0,inf)", x, y));
    double ax = std::abs(x);
    double r = ax + std::exp(-y) * (1 - ax);
    double theta = y + std::log(r);
    return {r, x < 0 ? -theta : theta};
}

std::array<double, 3> hemisphere_plus(Polar w) {
    double s = std::sin(kPi * w.r / 2);
    return {s * std::cos(w.theta), s * std::sin(w.theta), std::cos(kPi * w.r / 2)};
}

std::array<double, 3> hemisphere_minus(Polar w) {
    auto p = hemisphere_plus(w);
    p[2] = -p[2];
    return p;
}

namespace {

// x reduced to [-1, 3).
double reduce_period(double x) { return x - 4 * std::floor((x + 1) / 4); }

double dist_to_integer(double x) { return std::abs(x - std::round(x)); }

void torus_collapse_into(const double* z, int d, double* out) {
    double s2 = 0;
    for (int k = 0; k < d; ++k) {
        double v = z[k] - std::floor(z[k]) - 0.5;
        out[k] = v;
        s2 += v * v;
    }
    double s = std::sqrt(s2);
    if (s >= 0.5) {
        std::fill(out, out + d, 0.0);
        out[d] = 1;
        return;
    }
    double scale = s > 0 ? std::sin(2 * kPi * s) / s : 2 * kPi;
    for (int k = 0; k < d; ++k) out[k] *= scale;
    if (d % 2 == 0) out[0] = -out[0];
    out[d] = -std::cos(2 * kPi * s);
}

bool collapse_seam(const double* z, int d, double delta) {
    double s2 = 0;
    for (int k = 0; k < d; ++k) {
        double v = z[k] - std::floor(z[k]) - 0.5;
        s2 += v * v;
    }
    return std::abs(std::sqrt(s2) - 0.5) < delta;
}

void sphere_wrap_into(double x, double y, double* out) {
    double yy = std::abs(y), xm = reduce_period(x);
    std::array<double, 3> p = xm <= 1 ? hemisphere_plus(eval_f0(xm, yy)) : hemisphere_minus(eval_f0(2 - xm, yy));
    if (y < 0) p[2] = -p[2];
    std::copy(p.begin(), p.end(), out);
}

void fn_into(const double* x, int n, double* out) {
    const int d = n - 2;
    double z[16];
    std::copy(x + 2, x + n, z);
    if (x[1] < 0) z[0] = -z[0];
    double xm = reduce_period(x[0]), yy = std::abs(x[1]);
    Polar w;
    if (xm <= 1) {
        w = eval_f0(xm, yy);
    } else {
        w = eval_f0(2 - xm, yy);
        z[0] = -z[0];
    }
    double s = std::sin(kPi * w.r / 2), c = std::cos(kPi * w.r / 2);
    out[0] = s * std::cos(w.theta);
    out[1] = s * std::sin(w.theta);
    torus_collapse_into(z, d, out + 2);
    for (int k = 0; k <= d; ++k) out[2 + k] *= c;
}

} // namespace

std::array<double, 3> eval_sphere_wrap(double x, double y) {
    std::array<double, 3> p;
    sphere_wrap_into(x, y, p.data());
    return p;
}

std::vector<double> eval_torus_collapse(const std::vector<double>& z) {
    if (z.empty()) throw InvalidArgument("torus collapse needs d >= 1");
    std::vector<double> out(z.size() + 1);
    torus_collapse_into(z.data(), static_cast<int>(z.size()), out.data());
    return out;
}

std::vector<double> eval_fn(double x, double y, const std::vector<double>& z, int n) {
    if (n < 3 || n > 17) throw InvalidArgument("eval_fn needs 3 <= n <= 17");
    if (static_cast<int>(z.size()) != n - 2)
        throw DimensionMismatch(fmt::format("eval_fn: z has {} coordinates, expected {}", z.size(), n - 2));
    std::vector<double> in{x, y};
    in.insert(in.end(), z.begin(), z.end());
    std::vector<double> out(n + 1);
    fn_into(in.data(), n, out.data());
    return out;
}

// ---------------------------------------------------------------------------

EvaluableMap EvaluableMap::identity(int n) {
    if (n < 1) throw InvalidArgument("identity needs n >= 1");
    EvaluableMap m;
    m.tag_ = MapTag::Identity;
    m.n_ = m.m_ = n;
    return m;
}

EvaluableMap EvaluableMap::constant(int n) {
    EvaluableMap m = identity(n);
    m.tag_ = MapTag::Constant;
    return m;
}

EvaluableMap EvaluableMap::radial_stretch(double alpha) {
    EvaluableMap m = identity(2);
    m.tag_ = MapTag::RadialStretch;
    m.alpha_ = alpha;
    return m;
}

EvaluableMap EvaluableMap::f0() {
    EvaluableMap m = identity(2);
    m.tag_ = MapTag::F0;
    return m;
}

EvaluableMap EvaluableMap::sphere_wrap() {
    EvaluableMap m;
    m.tag_ = MapTag::SphereWrap;
    m.n_ = m.m_ = 2;
    m.target_ = TargetKind::Sphere;
    return m;
}

EvaluableMap EvaluableMap::torus_collapse(int d) {
    if (d < 1 || d > 15) throw InvalidArgument("torus collapse needs 1 <= d <= 15");
    EvaluableMap m;
    m.tag_ = MapTag::TorusCollapse;
    m.n_ = m.m_ = d;
    m.target_ = TargetKind::Sphere;
    return m;
}

EvaluableMap EvaluableMap::join_map(int n) {
    if (n < 3 || n > 17) throw InvalidArgument("join map needs 3 <= n <= 17");
    EvaluableMap m;
    m.tag_ = MapTag::JoinMap;
    m.n_ = m.m_ = n;
    m.target_ = TargetKind::Sphere;
    return m;
}

std::string EvaluableMap::name() const {
    switch (tag_) {
    case MapTag::Identity: return fmt::format("identity(R^{})", n_);
    case MapTag::Constant: return fmt::format("constant(R^{})", n_);
    case MapTag::RadialStretch: return fmt::format("radial_stretch(alpha={})", alpha_);
    case MapTag::F0: return "f0";
    case MapTag::SphereWrap: return "sphere_wrap";
    case MapTag::TorusCollapse: return fmt::format("torus_collapse({})", n_);
    case MapTag::JoinMap: return fmt::format("join_map({})", n_);
    }
    return "?";
}

void EvaluableMap::eval(const double* x, double* out) const {
    switch (tag_) {
    case MapTag::Identity: std::copy(x, x + n_, out); return;
    case MapTag::Constant: std::fill(out, out + n_, 0.0); return;
    case MapTag::RadialStretch: {
        double s = std::pow(std::hypot(x[0], x[1]), alpha_);
        out[0] = s * x[0];
        out[1] = s * x[1];
        return;
    }
    case MapTag::F0: {
        Polar w = eval_f0(x[0], x[1]);
        out[0] = w.r * std::cos(w.theta);
        out[1] = w.r * std::sin(w.theta);
        return;
    }
    case MapTag::SphereWrap: sphere_wrap_into(x[0], x[1], out); return;
    case MapTag::TorusCollapse: torus_collapse_into(x, n_, out); return;
    case MapTag::JoinMap: fn_into(x, n_, out); return;
    }
}

std::vector<double> EvaluableMap::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw DimensionMismatch(fmt::format("{}: point has {} coordinates, expected {}", name(), x.size(), n_));
    std::vector<double> out(ambient_dim());
    eval(x.data(), out.data());
    return out;
}

bool EvaluableMap::near_seam(const double* x, double delta) const {
    switch (tag_) {
    case MapTag::Identity:
    case MapTag::Constant: return false;
    case MapTag::RadialStretch: return std::hypot(x[0], x[1]) < delta;
    case MapTag::F0: return std::abs(x[0]) < delta || x[1] < delta || std::abs(x[0]) > 1 - delta;
    case MapTag::SphereWrap: return dist_to_integer(x[0]) < delta || std::abs(x[1]) < delta;
    case MapTag::TorusCollapse: return collapse_seam(x, n_, delta);
    case MapTag::JoinMap:
        return dist_to_integer(x[0]) < delta || std::abs(x[1]) < delta || collapse_seam(x + 2, n_ - 2, delta);
    }
    return false;
}

double EvaluableMap::target_distance(const double* a, const double* b) const {
    double s = 0;
    for (int k = 0; k < ambient_dim(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    double chord = std::sqrt(s);
    return target_ == TargetKind::Sphere ? 2 * std::asin(std::min(1.0, chord / 2)) : chord;
}

// ---------------------------------------------------------------------------

std::vector<double> differential(const EvaluableMap& m, const std::vector<double>& x, double h) {
    const int n = m.domain_dim(), a = m.ambient_dim();
    if (static_cast<int>(x.size()) != n) throw DimensionMismatch("differential: wrong point dimension");
    std::vector<double> D(a * n), p = x, fp(a), fm(a);
    for (int j = 0; j < n; ++j) {
        p[j] = x[j] + h;
        m.eval(p.data(), fp.data());
        p[j] = x[j] - h;
        m.eval(p.data(), fm.data());
        p[j] = x[j];
        for (int k = 0; k < a; ++k) D[k * n + j] = (fp[k] - fm[k]) / (2 * h);
    }
    return D;
}

namespace {

// Square matrix whose determinant is the volume pullback, row-major.
std::vector<double> volume_matrix(const EvaluableMap& m, const std::vector<double>& x, double h) {
    const int n = m.domain_dim(), a = m.ambient_dim();
    if (m.target_dim() != n) throw PreconditionError("volume pullback needs equal source and target dimension");
    std::vector<double> D = differential(m, x, h);
    if (m.target() == TargetKind::Euclidean) return D;
    std::vector<double> F = m.eval(x), M(a * a);
    for (int r = 0; r < a; ++r) {
        M[r * a] = F[r];
        for (int j = 0; j < n; ++j) M[r * a + j + 1] = D[r * n + j];
    }
    return M;
}

double dense_det(const std::vector<double>& M, int k) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(M.data(), k, k);
    return A.determinant();
}

// Jacobians along one grid row: points base + i * step * e_0. Uses the
// batched determinant kernels for 3x3 and 4x4 volume matrices.
class RowJacobian {
public:
    explicit RowJacobian(const EvaluableMap& m) : m_(m), k_(m.target() == TargetKind::Sphere ? m.ambient_dim() : m.domain_dim()) {
        if (m.target_dim() != m.domain_dim()) throw PreconditionError("volume pullback needs equal source and target dimension");
    }

    // J[i] for i < count; mask[i] = 1 for usable (non-seam) samples.
    void run(const std::vector<double>& base, double step, std::size_t count, std::vector<double>& J,
             std::vector<unsigned char>& mask) {
        const int n = m_.domain_dim(), a = m_.ambient_dim();
        const double h = kDerivativeStep;
        const bool sphere = m_.target() == TargetKind::Sphere;
        entries_.resize(static_cast<std::size_t>(k_) * k_);
        for (auto& e : entries_) e.assign(count, 0.0);
        J.assign(count, 0.0);
        mask.assign(count, 0);
        std::vector<double> p = base, F(a), fp(a), fm(a);
        for (std::size_t i = 0; i < count; ++i) {
            p[0] = base[0] + static_cast<double>(i) * step;
            if (m_.near_seam(p.data(), 2 * h)) {
                for (int r = 0; r < k_; ++r) entries_[r * k_ + r][i] = 0; // zero matrix
                continue;
            }
            mask[i] = 1;
            if (sphere) {
                m_.eval(p.data(), F.data());
                for (int r = 0; r < a; ++r) entries_[r * k_][i] = F[r];
            }
            for (int j = 0; j < n; ++j) {
                double keep = p[j];
                p[j] = keep + h;
                m_.eval(p.data(), fp.data());
                p[j] = keep - h;
                m_.eval(p.data(), fm.data());
                p[j] = keep;
                int col = sphere ? j + 1 : j;
                for (int r = 0; r < a; ++r) entries_[r * k_ + col][i] = (fp[r] - fm[r]) / (2 * h);
            }
        }
        ptrs_.resize(entries_.size());
        for (std::size_t e = 0; e < entries_.size(); ++e) ptrs_[e] = entries_[e].data();
        const auto& K = simd::kernels();
        if (k_ == 3) {
            K.det3(ptrs_.data(), count, J.data());
        } else if (k_ == 4) {
            K.det4(ptrs_.data(), count, J.data());
        } else {
            std::vector<double> M(static_cast<std::size_t>(k_) * k_);
            for (std::size_t i = 0; i < count; ++i) {
                if (!mask[i]) continue;
                for (std::size_t e = 0; e < M.size(); ++e) M[e] = entries_[e][i];
                J[i] = dense_det(M, k_);
            }
        }
        for (std::size_t i = 0; i < count; ++i)
            if (!mask[i]) J[i] = 0;
    }

private:
    const EvaluableMap& m_;
    int k_;
    std::vector<std::vector<double>> entries_;
    std::vector<const double*> ptrs_;
};

void check_box(const EvaluableMap& m, const Box& b) {
    const auto n = static_cast<std::size_t>(m.domain_dim());
    if (b.lo.size() != n || b.hi.size() != n) throw DimensionMismatch("box dimension differs from the map's domain");
    for (std::size_t k = 0; k < n; ++k)
        if (!(b.hi[k] > b.lo[k])) throw InvalidArgument("box has an empty side");
}

// Visits the rows (along axis 0) of a midpoint grid with `cells[k]` cells
// per axis: f(base point of the row, row length, cell sizes).
template <class F>
void for_each_row(const Box& b, const std::vector<long>& cells, F&& f) {
    const std::size_t n = b.lo.size();
    std::vector<double> size(n), base(n);
    for (std::size_t k = 0; k < n; ++k) size[k] = (b.hi[k] - b.lo[k]) / static_cast<double>(cells[k]);
    std::vector<long> idx(n, 0);
    while (true) {
        for (std::size_t k = 0; k < n; ++k) base[k] = b.lo[k] + (static_cast<double>(idx[k]) + 0.5) * size[k];
        base[0] = b.lo[0] + 0.5 * size[0];
        f(base, static_cast<std::size_t>(cells[0]), size);
        std::size_t k = 1;
        for (; k < n; ++k) {
            if (++idx[k] < cells[k]) break;
            idx[k] = 0;
        }
        if (k >= n) break;
    }
}

} // namespace

double volume_jacobian(const EvaluableMap& m, const std::vector<double>& x, double h) {
    std::vector<double> M = volume_matrix(m, x, h);
    int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M.size()))));
    return dense_det(M, k);
}

LipschitzReport estimate_lipschitz(const EvaluableMap& m, const Box& region, double step) {
    check_box(m, region);
    if (!(step > 0)) throw InvalidArgument("step must be positive");
    const int n = m.domain_dim(), a = m.ambient_dim();
    std::vector<long> pts(n);
    for (int k = 0; k < n; ++k) pts[k] = static_cast<long>(std::floor((region.hi[k] - region.lo[k]) / step + 1e-9)) + 1;
    const std::size_t count = static_cast<std::size_t>(pts[0]);

    auto eval_row = [&](std::vector<double> p, std::vector<std::vector<double>>& out) {
        out.assign(a, std::vector<double>(count));
        std::vector<double> F(a);
        double x0 = p[0];
        for (std::size_t i = 0; i < count; ++i) {
            p[0] = x0 + static_cast<double>(i) * step;
            m.eval(p.data(), F.data());
            for (int c = 0; c < a; ++c) out[c][i] = F[c];
        }
    };
    auto ptrs = [&](const std::vector<std::vector<double>>& v, std::size_t off) {
        std::vector<const double*> p(a);
        for (int c = 0; c < a; ++c) p[c] = v[c].data() + off;
        return p;
    };

    const auto& K = simd::kernels();
    LipschitzReport rep;
    rep.step = step;
    double best = 0;
    std::vector<std::vector<double>> row, nb;
    std::vector<long> idx(n, 0);
    std::vector<double> p(n);
    while (true) {
        for (int k = 0; k < n; ++k) p[k] = region.lo[k] + static_cast<double>(idx[k]) * step;
        eval_row(p, row);
        if (count > 1) {
            auto A = ptrs(row, 0), B = ptrs(row, 1);
            best = std::max(best, K.max_sq_distance(A.data(), B.data(), a, count - 1));
            rep.pairs += static_cast<long>(count - 1);
        }
        for (int k = 1; k < n; ++k) {
            if (idx[k] + 1 >= pts[k]) continue;
            std::vector<double> q = p;
            q[k] += step;
            eval_row(q, nb);
            auto A = ptrs(row, 0), B = ptrs(nb, 0);
            best = std::max(best, K.max_sq_distance(A.data(), B.data(), a, count));
            rep.pairs += static_cast<long>(count);
        }
        int k = 1;
        for (; k < n; ++k) {
            if (++idx[k] < pts[k]) break;
            idx[k] = 0;
        }
        if (k >= n) break;
    }
    double chord = std::sqrt(best);
    double dist = m.target() == TargetKind::Sphere ? 2 * std::asin(std::min(1.0, chord / 2)) : chord;
    rep.value = dist / step;
    return rep;
}

double DegreeReport::trend_slope() const {
    const std::size_t k = radii.size();
    if (k < 2) return 0;
    double mr = 0, mv = 0;
    for (std::size_t i = 0; i < k; ++i) {
        mr += radii[i];
        mv += normalized[i];
    }
    mr /= static_cast<double>(k);
    mv /= static_cast<double>(k);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < k; ++i) {
        sxy += (radii[i] - mr) * (normalized[i] - mv);
        sxx += (radii[i] - mr) * (radii[i] - mr);
    }
    return sxy / sxx;
}

std::string DegreeReport::delimited() const {
    std::string s = "R,normalized\n";
    for (std::size_t i = 0; i < radii.size(); ++i) s += fmt::format("{},{:.12g}\n", radii[i], normalized[i]);
    return s;
}

DegreeReport asymptotic_degree(const EvaluableMap& m, const std::vector<double>& radii, double step) {
    if (radii.empty()) throw InvalidArgument("no radii given");
    for (std::size_t i = 0; i < radii.size(); ++i)
        if (!(radii[i] > 0) || (i > 0 && !(radii[i] > radii[i - 1])))
            throw InvalidArgument("radii must be positive and increasing");
    if (!(step > 0)) throw InvalidArgument("step must be positive");

    const int n = m.domain_dim();
    DegreeReport rep;
    rep.map = m.name();
    rep.radii = radii;
    rep.step = step;
    if (step > 0.25) rep.warnings.push_back(fmt::format("quadrature step {} is coarse relative to unit-scale map features", step));

    const double R = radii.back();
    const long cells = static_cast<long>(std::ceil(2 * R / step));
    const double lo = -0.5 * static_cast<double>(cells) * step;
    RowJacobian rj(m);
    const auto& K = simd::kernels();
    std::vector<double> J, keys;
    std::vector<unsigned char> mask;
    std::vector<double> total(radii.size(), 0.0), tile(radii.size(), 0.0);
    const long tile_rows = 64;
    long rows_in_tile = 0;

    std::vector<long> idx(n, 0);
    std::vector<double> base(n);
    while (true) {
        double rest = 0;
        for (int k = 1; k < n; ++k) {
            base[k] = lo + (static_cast<double>(idx[k]) + 0.5) * step;
            rest += base[k] * base[k];
        }
        if (rest < R * R) {
            // Only the part of the row that can fall inside B_R.
            double half = std::sqrt(R * R - rest);
            long i0 = std::max(0L, static_cast<long>(std::floor((-half - lo) / step - 0.5)));
            long i1 = std::min(cells, static_cast<long>(std::ceil((half - lo) / step + 0.5)));
            if (i1 > i0) {
                base[0] = lo + (static_cast<double>(i0) + 0.5) * step;
                std::size_t count = static_cast<std::size_t>(i1 - i0);
                rj.run(base, step, count, J, mask);
                keys.resize(count);
                for (std::size_t i = 0; i < count; ++i) {
                    double x = base[0] + static_cast<double>(i) * step;
                    keys[i] = x * x + rest;
                    if (keys[i] < R * R) {
                        ++rep.samples;
                        if (!mask[i]) ++rep.masked;
                    }
                }
                for (std::size_t r = 0; r < radii.size(); ++r)
                    tile[r] += K.sum_below(J.data(), keys.data(), radii[r] * radii[r], count);
            }
        }
        if (++rows_in_tile == tile_rows) {
            for (std::size_t r = 0; r < radii.size(); ++r) total[r] += tile[r];
            std::fill(tile.begin(), tile.end(), 0.0);
            rows_in_tile = 0;
        }
        int k = 1;
        for (; k < n; ++k) {
            if (++idx[k] < cells) break;
            idx[k] = 0;
        }
        if (k >= n) break;
    }
    for (std::size_t r = 0; r < radii.size(); ++r) total[r] += tile[r];
    const double cell = std::pow(step, n);
    for (std::size_t r = 0; r < radii.size(); ++r) rep.normalized.push_back(total[r] * cell / std::pow(radii[r], n));
    return rep;
}

std::vector<Box> strip_set(int z_lo, int z_hi, double y0, double y1) {
    if (z_hi < z_lo || !(y1 > y0) || y0 < 0) throw InvalidArgument("bad strip set bounds");
    std::vector<Box> out;
    for (int z = z_lo; z <= z_hi; ++z) {
        double a = 2.0 * z + 0.5, b = 2.0 * z + 1.5;
        out.push_back({{a, y0}, {b, y1}});
        out.push_back({{a, -y1}, {b, -y0}});
    }
    return out;
}

namespace {

std::vector<long> cells_for(const Box& b, double target_points) {
    const std::size_t n = b.lo.size();
    double vol = 1;
    for (std::size_t k = 0; k < n; ++k) vol *= b.hi[k] - b.lo[k];
    double h = std::pow(vol / std::max(1.0, target_points), 1.0 / static_cast<double>(n));
    std::vector<long> c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = std::max(1L, std::lround((b.hi[k] - b.lo[k]) / h));
    return c;
}

} // namespace

double jacobian_floor(const EvaluableMap& m, const std::vector<Box>& set, long samples) {
    if (set.empty() || samples < 1) throw InvalidArgument("jacobian_floor needs a non-empty set and samples");
    double total = 0;
    std::vector<double> vols;
    for (const auto& b : set) {
        check_box(m, b);
        double v = 1;
        for (std::size_t k = 0; k < b.lo.size(); ++k) v *= b.hi[k] - b.lo[k];
        vols.push_back(v);
        total += v;
    }
    RowJacobian rj(m);
    const auto& K = simd::kernels();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> J;
    std::vector<unsigned char> mask;
    for (std::size_t i = 0; i < set.size(); ++i) {
        auto cells = cells_for(set[i], static_cast<double>(samples) * vols[i] / total);
        for_each_row(set[i], cells, [&](const std::vector<double>& base, std::size_t count, const std::vector<double>& size) {
            rj.run(base, size[0], count, J, mask);
            best = std::min(best, K.masked_min(J.data(), mask.data(), count));
        });
    }
    return best;
}

QrReport quasiregularity_ratio(const EvaluableMap& m, const std::vector<std::vector<double>>& samples) {
    if (m.target_dim() != m.domain_dim()) throw PreconditionError("quasiregularity needs equal dimensions");
    const int n = m.domain_dim(), a = m.ambient_dim();
    QrReport rep;
    long nonpositive = 0;
    for (const auto& x : samples) {
        if (m.near_seam(x.data(), 2 * kDerivativeStep)) continue;
        ++rep.used;
        std::vector<double> D = differential(m, x);
        double det = volume_jacobian(m, x);
        if (det <= 0) {
            ++nonpositive;
            continue;
        }
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(D.data(), a, n);
        double op = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
        double ratio = std::pow(op, n) / det;
        if (ratio > rep.sup) {
            rep.sup = ratio;
            rep.worst_point = x;
        }
    }
    rep.nonpositive_fraction = rep.used ? static_cast<double>(nonpositive) / static_cast<double>(rep.used) : 0;
    rep.diverged = rep.sup > 1e6 || rep.nonpositive_fraction > 0.01;
    return rep;
}

double integrate_jacobian(const EvaluableMap& m, const Box& b, int per_axis) {
    check_box(m, b);
    if (per_axis < 1) throw InvalidArgument("per_axis must be positive");
    RowJacobian rj(m);
    std::vector<double> J;
    std::vector<unsigned char> mask;
    std::vector<long> cells(b.lo.size(), per_axis);
    double sum = 0, cell = 1;
    for (std::size_t k = 0; k < b.lo.size(); ++k) cell *= (b.hi[k] - b.lo[k]) / per_axis;
    for_each_row(b, cells, [&](const std::vector<double>& base, std::size_t count, const std::vector<double>& size) {
        rj.run(base, size[0], count, J, mask);
        double row = 0;
        for (std::size_t i = 0; i < count; ++i) row += J[i];
        sum += row;
    });
    return sum * cell;
}

std::vector<std::vector<double>> grid_samples(const Box& b, int per_axis) {
    if (per_axis < 1 || b.lo.size() != b.hi.size() || b.lo.empty()) throw InvalidArgument("bad sample grid");
    std::vector<std::vector<double>> out;
    std::vector<long> cells(b.lo.size(), per_axis);
    for_each_row(b, cells, [&](std::vector<double> base, std::size_t count, const std::vector<double>& size) {
        double x0 = base[0];
        for (std::size_t i = 0; i < count; ++i) {
            base[0] = x0 + static_cast<double>(i) * size[0];
            out.push_back(base);
        }
    });
    return out;
}

double min_excluded_locus_distance(const EvaluableMap& m, const Box& b, int per_axis) {
    check_box(m, b);
    if (m.target() != TargetKind::Sphere || m.ambient_dim() < 3) throw PreconditionError("needs a sphere-valued map");
    double best = std::numeric_limits<double>::infinity();
    std::vector<long> cells(b.lo.size(), per_axis);
    std::vector<double> F(m.ambient_dim()), p;
    for_each_row(b, cells, [&](const std::vector<double>& base, std::size_t count, const std::vector<double>& size) {
        p = base;
        for (std::size_t i = 0; i < count; ++i) {
            p[0] = base[0] + static_cast<double>(i) * size[0];
            m.eval(p.data(), F.data());
            best = std::min(best, std::hypot(F[0], F[1]));
        }
    });
    return best;
}

OrientationCount orientation_census(const EvaluableMap& m, const Box& b, int per_axis, double eps) {
    check_box(m, b);
    OrientationCount c;
    RowJacobian rj(m);
    std::vector<double> J;
    std::vector<unsigned char> mask;
    std::vector<long> cells(b.lo.size(), per_axis);
    for_each_row(b, cells, [&](const std::vector<double>& base, std::size_t count, const std::vector<double>& size) {
        rj.run(base, size[0], count, J, mask);
        for (std::size_t i = 0; i < count; ++i) {
            if (!mask[i]) continue;
            if (J[i] > eps) ++c.positive;
            else if (J[i] < -eps) ++c.negative;
            else ++c.degenerate;
        }
    });
    return c;
}

} // namespace ellip
