#include "ellip/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace ellip::simd {
namespace {

void det3(const double* const* m, std::size_t count, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        double a = m[0][i], b = m[1][i], c = m[2][i];
        double d = m[3][i], e = m[4][i], f = m[5][i];
        double g = m[6][i], h = m[7][i], k = m[8][i];
        out[i] = a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g);
    }
}

void det4(const double* const* m, std::size_t count, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        auto e = [&](int r, int c) { return m[4 * r + c][i]; };
        // Laplace expansion along the first two rows.
        double s0 = e(0, 0) * e(1, 1) - e(1, 0) * e(0, 1);
        double s1 = e(0, 0) * e(1, 2) - e(1, 0) * e(0, 2);
        double s2 = e(0, 0) * e(1, 3) - e(1, 0) * e(0, 3);
        double s3 = e(0, 1) * e(1, 2) - e(1, 1) * e(0, 2);
        double s4 = e(0, 1) * e(1, 3) - e(1, 1) * e(0, 3);
        double s5 = e(0, 2) * e(1, 3) - e(1, 2) * e(0, 3);
        double c5 = e(2, 2) * e(3, 3) - e(3, 2) * e(2, 3);
        double c4 = e(2, 1) * e(3, 3) - e(3, 1) * e(2, 3);
        double c3 = e(2, 1) * e(3, 2) - e(3, 1) * e(2, 2);
        double c2 = e(2, 0) * e(3, 3) - e(3, 0) * e(2, 3);
        double c1 = e(2, 0) * e(3, 2) - e(3, 0) * e(2, 2);
        double c0 = e(2, 0) * e(3, 1) - e(3, 0) * e(2, 1);
        out[i] = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    }
}

double max_sq_distance(const double* const* a, const double* const* b, int comps, std::size_t count) {
    double best = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0;
        for (int c = 0; c < comps; ++c) {
            double d = a[c][i] - b[c][i];
            s += d * d;
        }
        best = std::fmax(best, s);
    }
    return best;
}

double sum_below(const double* values, const double* keys, double threshold, std::size_t count) {
    double s = 0;
    for (std::size_t i = 0; i < count; ++i)
        if (keys[i] < threshold) s += values[i];
    return s;
}

double max_abs(const double* v, std::size_t count) {
    double best = 0;
    for (std::size_t i = 0; i < count; ++i) best = std::fmax(best, std::fabs(v[i]));
    return best;
}

double masked_min(const double* v, const unsigned char* keys, std::size_t count) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i)
        if (keys[i]) best = std::fmin(best, v[i]);
    return best;
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{det3, det4, max_sq_distance, sum_below, max_abs, masked_min};
    return k;
}

} // namespace ellip::simd
