#include "ellip/geom2d.hpp"

#include "ellip/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellip {

std::string_view to_string(SurfaceType t) {
    switch (t) {
    case SurfaceType::Parabolic: return "parabolic";
    case SurfaceType::Hyperbolic: return "hyperbolic";
    case SurfaceType::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

void check_samples(const Samples& s, const char* what) {
    if (s.r.size() != s.value.size())
        throw DimensionMismatch(fmt::format("{}: {} abscissae but {} values", what, s.r.size(), s.value.size()));
    if (s.r.size() < 2) throw InvalidArgument(fmt::format("{}: need at least two samples", what));
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        if (!std::isfinite(s.r[i]) || !std::isfinite(s.value[i]))
            throw InvalidArgument(fmt::format("{}: non-finite sample at index {}", what, i));
        if (i > 0 && !(s.r[i] > s.r[i - 1]))
            throw InvalidArgument(fmt::format("{}: abscissae not increasing at index {}", what, i));
    }
}

constexpr double kPhi = 1.6180339887498949;

} // namespace

RadialProfile RadialProfile::tabulated(Samples s) {
    check_samples(s, "circumference samples");
    for (std::size_t i = 0; i < s.r.size(); ++i)
        if (s.r[i] <= 0 || s.value[i] <= 0)
            throw InvalidArgument(fmt::format("circumference samples: non-positive entry at index {}", i));
    return {ProfileFamily::Tabulated, 0, std::move(s)};
}

RadialProfile RadialProfile::spiky_plane(int per_window) {
    Samples s;
    const int windows = 40;
    for (int i = 0; i <= windows * per_window; ++i) {
        double r = std::exp2(static_cast<double>(i) / per_window);
        s.r.push_back(r);
        s.value.push_back(2 * std::numbers::pi * r * std::log(std::numbers::e + r));
    }
    return tabulated(std::move(s));
}

std::string RadialProfile::name() const {
    switch (family) {
    case ProfileFamily::Euclidean: return "euclidean";
    case ProfileFamily::Hyperbolic: return "hyperbolic";
    case ProfileFamily::PowerLog: return fmt::format("power-log(epsilon={})", epsilon);
    case ProfileFamily::InverseSquare: return "inverse-square";
    case ProfileFamily::Tabulated: return "tabulated";
    }
    return "?";
}

double RadialProfile::rho(double r) const {
    switch (family) {
    case ProfileFamily::Euclidean: return r;
    case ProfileFamily::Hyperbolic: return std::sinh(r);
    case ProfileFamily::PowerLog: return r * std::pow(std::log(r), 1 + epsilon);
    case ProfileFamily::InverseSquare: return std::pow(r, kPhi);
    case ProfileFamily::Tabulated: break;
    }
    throw PreconditionError("rho() is only defined for closed-form profiles");
}

double RadialProfile::curvature(double r) const {
    switch (family) {
    case ProfileFamily::Euclidean: return 0;
    case ProfileFamily::Hyperbolic: return -1;
    case ProfileFamily::PowerLog: {
        double a = 1 + epsilon, l = std::log(r);
        return -(a / l + a * (a - 1) / (l * l)) / (r * r);
    }
    case ProfileFamily::InverseSquare: return -1 / (r * r);
    case ProfileFamily::Tabulated: break;
    }
    throw PreconditionError("curvature() is only defined for closed-form profiles");
}

namespace {

// L(r) by log-log interpolation of the samples, or 2 pi rho for the closed forms.
double circumference_at(const RadialProfile& p, double r) {
    if (p.family != ProfileFamily::Tabulated) return 2 * std::numbers::pi * p.rho(r);
    const auto& s = p.circumference;
    auto it = std::upper_bound(s.r.begin(), s.r.end(), r);
    std::size_t hi = std::clamp<std::size_t>(it - s.r.begin(), 1, s.r.size() - 1);
    std::size_t lo = hi - 1;
    double t = (std::log(r) - std::log(s.r[lo])) / (std::log(s.r[hi]) - std::log(s.r[lo]));
    return std::exp(std::log(s.value[lo]) + t * (std::log(s.value[hi]) - std::log(s.value[lo])));
}

// integral of dr/L over [a, b], Simpson in log r.
double window_integral(const RadialProfile& p, double a, double b) {
    const int m = 64;
    double la = std::log(a), h = (std::log(b) - la) / m, sum = 0;
    for (int i = 0; i <= m; ++i) {
        double r = std::exp(la + i * h);
        double f = r / circumference_at(p, r);
        sum += f * (i == 0 || i == m ? 1 : (i % 2 ? 4 : 2));
    }
    return sum * h / 3;
}

} // namespace

AhlforsReport ahlfors_classify(const RadialProfile& p) {
    AhlforsReport rep;
    int j0 = 1, j1 = 40;
    if (p.family == ProfileFamily::Tabulated) {
        const auto& s = p.circumference;
        j0 = static_cast<int>(std::ceil(std::log2(s.r.front()) - 1e-12));
        j1 = static_cast<int>(std::floor(std::log2(s.r.back()) + 1e-12));
    } else if (p.family == ProfileFamily::Hyperbolic) {
        j1 = 9; // sinh overflows beyond
    } else if (p.family == ProfileFamily::PowerLog) {
        j0 = 2;
    }
    for (int j = j0; j < j1; ++j) {
        double a = std::exp2(j), b = std::exp2(j + 1);
        rep.trace.push_back({a, b, window_integral(p, a, b)});
    }

    switch (p.family) {
    case ProfileFamily::Euclidean:
        rep.analytic = true;
        rep.type = SurfaceType::Parabolic;
        rep.reason = "integral of dr/(2 pi r) diverges logarithmically";
        return rep;
    case ProfileFamily::Hyperbolic:
        rep.analytic = true;
        rep.type = SurfaceType::Hyperbolic;
        rep.reason = "integral of dr/(2 pi sinh r) converges";
        return rep;
    case ProfileFamily::InverseSquare:
        rep.analytic = true;
        rep.type = SurfaceType::Hyperbolic;
        rep.reason = "integral of dr/(2 pi r^phi) converges since phi > 1";
        return rep;
    case ProfileFamily::PowerLog:
        rep.analytic = true;
        rep.type = p.epsilon > 0 ? SurfaceType::Hyperbolic : SurfaceType::Parabolic;
        rep.reason = p.epsilon > 0 ? "integral of dr/(r (log r)^(1+eps)) converges for eps > 0"
                                   : "integral of dr/(r (log r)^(1+eps)) diverges for eps <= 0";
        return rep;
    case ProfileFamily::Tabulated: break;
    }

    const auto& tr = rep.trace;
    if (tr.size() < 9) {
        rep.reason = fmt::format("only {} dyadic windows covered; need 9", tr.size());
        return rep;
    }
    int decaying = 0;
    for (std::size_t i = tr.size() - 1; i > 0; --i) {
        if (tr[i].integral < 0.9 * tr[i - 1].integral) ++decaying;
        else break;
    }
    if (decaying >= 8) {
        rep.type = SurfaceType::Hyperbolic;
        rep.reason = fmt::format("last {} window sums decay geometrically", decaying);
        return rep;
    }
    double mn = tr.back().integral, mx = mn;
    for (std::size_t i = tr.size() - 8; i < tr.size(); ++i) {
        mn = std::min(mn, tr[i].integral);
        mx = std::max(mx, tr[i].integral);
    }
    if (mx <= 2 * mn) {
        rep.type = SurfaceType::Parabolic;
        rep.reason = fmt::format("last 8 window sums stay within ratio {:.3f}", mx / mn);
    } else {
        rep.reason = fmt::format("window sums neither decay geometrically nor stabilise (ratio {:.3f})", mx / mn);
    }
    return rep;
}

MilnorReport milnor_classify(const Samples& k, double tol) {
    check_samples(k, "curvature samples");
    if (k.r.front() <= 1) throw InvalidArgument("curvature samples must start at r > 1");
    MilnorReport rep;
    rep.q_min = INFINITY;
    rep.q_max = -INFINITY;
    for (std::size_t i = 0; i < k.r.size(); ++i) {
        double r = k.r[i];
        double q = -k.value[i] * r * r * std::log(r);
        rep.q_min = std::min(rep.q_min, q);
        rep.q_max = std::max(rep.q_max, q);
    }
    rep.fitted_epsilon = rep.q_min - 1;
    if (rep.q_max <= 1 + tol) rep.type = SurfaceType::Parabolic;
    else if (rep.fitted_epsilon > tol) rep.type = SurfaceType::Hyperbolic;
    return rep;
}

Samples family_curvature_samples(const RadialProfile& p, double r0, double r1, int count) {
    if (r0 <= 1 || r1 <= r0 || count < 2) throw InvalidArgument("bad sampling range");
    Samples s;
    for (int i = 0; i < count; ++i) {
        double r = r0 * std::pow(r1 / r0, static_cast<double>(i) / (count - 1));
        s.r.push_back(r);
        s.value.push_back(p.curvature(r));
    }
    return s;
}

Samples curvature_from_profile(const Samples& rho, double max_step) {
    check_samples(rho, "profile samples");
    if (rho.r.size() < 3) throw InvalidArgument("profile samples: need at least three samples");
    Samples out;
    for (std::size_t i = 0; i + 1 < rho.r.size(); ++i) {
        double h = rho.r[i + 1] - rho.r[i];
        if (h > max_step)
            throw InvalidArgument(fmt::format("grid step {} at r = {} exceeds {}", h, rho.r[i], max_step));
    }
    for (std::size_t i = 1; i + 1 < rho.r.size(); ++i) {
        double y = rho.value[i];
        if (y <= 0) throw InvalidArgument(fmt::format("rho <= 0 at r = {}", rho.r[i]));
        double h1 = rho.r[i] - rho.r[i - 1], h2 = rho.r[i + 1] - rho.r[i];
        double d2 = 2 * ((rho.value[i + 1] - y) / h2 - (y - rho.value[i - 1]) / h1) / (h1 + h2);
        out.r.push_back(rho.r[i]);
        out.value.push_back(-d2 / y);
    }
    return out;
}

double revolution_volume(const Samples& rho, int n, double a, double b) {
    check_samples(rho, "profile samples");
    if (n < 2) throw InvalidArgument("revolution_volume: n must be at least 2");
    if (b <= a) throw InvalidArgument("revolution_volume: empty interval");
    const auto& r = rho.r;
    const double eps = 1e-9 * std::max(1.0, std::abs(b - a));
    if (a < r.front() - eps || b > r.back() + eps) throw InvalidArgument("revolution_volume: interval not covered by samples");
    std::size_t i0 = std::lower_bound(r.begin(), r.end(), a - eps) - r.begin();
    std::size_t i1 = std::upper_bound(r.begin(), r.end(), b + eps) - r.begin();
    if (i1 - i0 < 2) throw InvalidArgument("revolution_volume: fewer than two samples in interval");

    auto deriv = [&](std::size_t i) {
        std::size_t lo = i > 0 ? i - 1 : i, hi = i + 1 < r.size() ? i + 1 : i;
        return (rho.value[hi] - rho.value[lo]) / (r[hi] - r[lo]);
    };
    std::vector<double> f;
    for (std::size_t i = i0; i < i1; ++i) {
        double d = deriv(i);
        f.push_back(std::pow(rho.value[i], n - 1) * std::sqrt(1 + d * d));
    }
    const std::size_t m = f.size() - 1;
    double h = (r[i1 - 1] - r[i0]) / m;
    bool uniform = true;
    for (std::size_t i = i0 + 1; i < i1; ++i)
        if (std::abs(r[i] - r[i - 1] - h) > 1e-6 * h) uniform = false;
    double integral = 0;
    if (uniform && m % 2 == 0) {
        for (std::size_t i = 0; i <= m; ++i) integral += f[i] * (i == 0 || i == m ? 1 : (i % 2 ? 4 : 2));
        integral *= h / 3;
    } else {
        for (std::size_t i = 0; i < m; ++i) integral += 0.5 * (f[i] + f[i + 1]) * (r[i0 + i + 1] - r[i0 + i]);
    }
    double omega = 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
    return omega * integral;
}

NoduleProfile::NoduleProfile(int n) : n_(n) {
    if (n < 2) throw InvalidArgument("NoduleProfile: n must be at least 2");
    double m = n - 1;
    double r0 = 0.5 * (1 + std::exp2(-2 / m));
    kappa_ = (3 + r0) / 4;
}

double NoduleProfile::minimum(int p) const { return std::exp2(-2.0 * p / (n_ - 1)); }
double NoduleProfile::maximum(int p) const { return std::exp2(-1.0 * p / (n_ - 1)); }

double NoduleProfile::ramp_fraction(int p) const {
    double hi = maximum(p), lo = 0.5 * (minimum(p) + minimum(p + 1));
    return 2 * hi * (1 - kappa_) / (hi - lo);
}

double NoduleProfile::operator()(double t) const {
    if (t < 0) throw InvalidArgument("NoduleProfile: t must be non-negative");
    int p = static_cast<int>(std::floor(t));
    double s = t - p, hi = maximum(p), lo, u;
    if (s < 0.5) {
        lo = minimum(p);
        u = s / 0.5;
    } else {
        lo = minimum(p + 1);
        u = (1 - s) / 0.5;
    }
    double x = std::min(u / ramp_fraction(p), 1.0);
    return lo + (hi - lo) * x * x * (3 - 2 * x);
}

Samples NoduleProfile::sample(double a, double b, int points) const {
    if (points < 2 || b <= a) throw InvalidArgument("NoduleProfile::sample: bad range");
    Samples s;
    for (int i = 0; i < points; ++i) {
        double t = a + (b - a) * i / (points - 1);
        s.r.push_back(t);
        s.value.push_back((*this)(t));
    }
    return s;
}

double NoduleProfile::nodule_volume(int p, int points_per_unit) const {
    if (p < 0) throw InvalidArgument("nodule index must be non-negative");
    int m = points_per_unit + (points_per_unit % 2);
    double h = 1.0 / m;
    double a = p > 0 ? p - h : p;
    Samples s = sample(a, p + 1 + h, m + (p > 0 ? 3 : 2));
    return revolution_volume(s, n_, p, p + 1);
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::int64_t kDx[4] = {1, 0, -1, 0};
constexpr std::int64_t kDy[4] = {0, 1, 0, -1};
constexpr char kName[4] = {'R', 'U', 'L', 'D'};
int idx(Step s) { return static_cast<int>(s); }
} // namespace

Step inverse(Step s) { return static_cast<Step>((idx(s) + 2) % 4); }

LatticeLoop LatticeLoop::parse(std::string_view text, std::int64_t x0, std::int64_t y0) {
    LatticeLoop l;
    l.x0 = x0;
    l.y0 = y0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == ' ' || c == ',') continue;
        const char* f = std::find(kName, kName + 4, c);
        if (f == kName + 4) throw InvalidArgument(fmt::format("bad step '{}' at position {}", c, i));
        l.steps.push_back(static_cast<Step>(f - kName));
    }
    return l;
}

std::string LatticeLoop::to_string() const {
    std::string s;
    for (Step st : steps) s += kName[idx(st)];
    return s;
}

bool LatticeLoop::is_closed() const {
    std::int64_t x = 0, y = 0;
    for (Step s : steps) {
        x += kDx[idx(s)];
        y += kDy[idx(s)];
    }
    return x == 0 && y == 0;
}

LatticeLoop reduce_loop(const LatticeLoop& loop) {
    LatticeLoop out;
    out.x0 = loop.x0;
    out.y0 = loop.y0;
    for (Step s : loop.steps) {
        if (!out.steps.empty() && out.steps.back() == inverse(s)) out.steps.pop_back();
        else out.steps.push_back(s);
    }
    std::size_t front = 0, back = out.steps.size();
    while (back - front >= 2 && out.steps[front] == inverse(out.steps[back - 1])) {
        out.x0 += kDx[idx(out.steps[front])];
        out.y0 += kDy[idx(out.steps[front])];
        ++front;
        --back;
    }
    out.steps = std::vector<Step>(out.steps.begin() + front, out.steps.begin() + back);
    return out;
}

Rational turning_number(const LatticeLoop& loop) {
    const auto& s = loop.steps;
    if (s.empty()) throw PreconditionError("turning number of the empty loop is undefined");
    if (!loop.is_closed()) throw PreconditionError("turning number needs a closed loop");
    long turns = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        int a = idx(s[i]), b = idx(s[(i + 1) % s.size()]);
        int d = (b - a + 4) % 4;
        if (d == 2) throw PreconditionError("turning number needs a reduced loop");
        if (d == 1) ++turns;
        if (d == 3) --turns;
    }
    Rational t(turns, 4);
    t.canonicalize();
    return t;
}

Rational turning_number_rel_square(const LatticeLoop& loop, std::int64_t h) {
    if (!loop.is_closed()) throw PreconditionError("turning number needs a closed loop");
    if (h < 0) throw InvalidArgument("square half-width must be non-negative");
    const std::size_t k = loop.steps.size();
    std::vector<std::pair<std::int64_t, std::int64_t>> v(k + 1);
    v[0] = {loop.x0, loop.y0};
    for (std::size_t i = 0; i < k; ++i)
        v[i + 1] = {v[i].first + kDx[idx(loop.steps[i])], v[i].second + kDy[idx(loop.steps[i])]};
    auto inside = [&](std::size_t i) { return std::abs(v[i].first) <= h && std::abs(v[i].second) <= h; };

    std::size_t start = k;
    for (std::size_t i = 0; i < k; ++i)
        if (!inside(i)) {
            start = i;
            break;
        }
    if (start == k) return 0;

    LatticeLoop out;
    out.x0 = v[start].first;
    out.y0 = v[start].second;
    std::size_t i = 0;
    while (i < k) {
        std::size_t a = (start + i) % k;
        std::size_t b = (a + 1) % k;
        if (!inside(b)) {
            out.steps.push_back(loop.steps[a]);
            ++i;
            continue;
        }
        // Entering the square at b: find the last vertex of this run.
        std::size_t j = i + 1;
        while (j < k && inside((start + j + 1) % k)) ++j;
        out.steps.push_back(loop.steps[a]);
        auto [x1, y1] = v[b];
        auto [x2, y2] = v[(start + j) % k];
        for (; x1 < x2; ++x1) out.steps.push_back(Step::R);
        for (; x1 > x2; --x1) out.steps.push_back(Step::L);
        for (; y1 < y2; ++y1) out.steps.push_back(Step::U);
        for (; y1 > y2; --y1) out.steps.push_back(Step::D);
        i = j;
    }
    LatticeLoop red = reduce_loop(out);
    if (red.steps.empty()) return 0;
    return turning_number(red);
}

void LatticeChain1::add_loop(const LatticeLoop& loop, std::int64_t m) {
    std::int64_t x = loop.x0, y = loop.y0;
    auto bump = [&](Edge e, std::int64_t c) {
        auto& slot = coeff[e];
        slot += c;
        if (slot == 0) coeff.erase(e);
    };
    for (Step s : loop.steps) {
        switch (s) {
        case Step::R: bump({'h', x, y}, m); break;
        case Step::L: bump({'h', x - 1, y}, -m); break;
        case Step::U: bump({'v', x, y}, m); break;
        case Step::D: bump({'v', x, y - 1}, -m); break;
        }
        x += kDx[idx(s)];
        y += kDy[idx(s)];
    }
}

bool LatticeChain1::is_cycle() const {
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> div;
    for (const auto& [e, c] : coeff) {
        auto [t, i, j] = e;
        div[{i, j}] -= c;
        if (t == 'h') div[{i + 1, j}] += c;
        else div[{i, j + 1}] += c;
    }
    return std::all_of(div.begin(), div.end(), [](const auto& kv) { return kv.second == 0; });
}

std::int64_t LatticeChain1::mass() const {
    std::int64_t m = 0;
    for (const auto& kv : coeff) m += std::abs(kv.second);
    return m;
}

LatticeChain1& LatticeChain1::operator+=(const LatticeChain1& other) {
    for (const auto& [e, c] : other.coeff) {
        auto& slot = coeff[e];
        slot += c;
        if (slot == 0) coeff.erase(e);
    }
    return *this;
}

std::int64_t LatticeChain2::mass() const {
    std::int64_t m = 0;
    for (const auto& kv : coeff) m += std::abs(kv.second);
    return m;
}

LatticeChain1 LatticeChain2::boundary() const {
    LatticeChain1 z;
    auto bump = [&](Edge e, std::int64_t c) {
        auto& slot = z.coeff[e];
        slot += c;
        if (slot == 0) z.coeff.erase(e);
    };
    for (const auto& [cell, c] : coeff) {
        auto [i, j] = cell;
        bump({'h', i, j}, c);
        bump({'v', i + 1, j}, c);
        bump({'h', i, j + 1}, -c);
        bump({'v', i, j}, -c);
    }
    return z;
}

double LatticeChain2::isoperimetric_bound() const {
    std::int64_t top = 0;
    for (const auto& kv : coeff) top = std::max(top, std::abs(kv.second));
    double bound = 0;
    for (std::int64_t i = 1; i <= top; ++i) {
        std::int64_t pos = 0, neg = 0;
        for (const auto& kv : coeff) {
            if (kv.second >= i) ++pos;
            if (kv.second <= -i) ++neg;
        }
        bound += 4 * std::sqrt(static_cast<double>(pos)) + 4 * std::sqrt(static_cast<double>(neg));
    }
    return bound;
}

LatticeChain2 fill_cycle(const LatticeChain1& z) {
    if (!z.is_cycle()) throw PreconditionError("fill_cycle: chain has non-zero boundary");
    std::map<std::int64_t, std::map<std::int64_t, std::int64_t>> columns;
    for (const auto& [e, c] : z.coeff)
        if (std::get<0>(e) == 'h') columns[std::get<1>(e)][std::get<2>(e)] += c;
    LatticeChain2 out;
    for (const auto& [i, col] : columns) {
        std::int64_t running = 0;
        for (auto it = col.begin(); it != col.end(); ++it) {
            running += it->second;
            auto next = std::next(it);
            if (next == col.end()) {
                if (running != 0) throw ConsistencyError("fill_cycle: column sum does not vanish");
                break;
            }
            if (running != 0)
                for (std::int64_t j = it->first; j < next->first; ++j) out.coeff[{i, j}] = running;
        }
    }
    if (out.boundary().coeff != z.coeff) throw ConsistencyError("fill_cycle: boundary of the filling differs from the cycle");
    return out;
}

} // namespace ellip
