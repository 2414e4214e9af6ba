// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "ellip/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstring>
#include <limits>

namespace ellip::simd {
namespace {

inline __m256d ld(const double* p) { return _mm256_loadu_pd(p); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// x*y - z*w
inline __m256d cross(__m256d x, __m256d y, __m256d z, __m256d w) {
    return _mm256_fmsub_pd(x, y, _mm256_mul_pd(z, w));
}

void det3(const double* const* m, std::size_t count, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d a = ld(m[0] + i), b = ld(m[1] + i), c = ld(m[2] + i);
        __m256d d = ld(m[3] + i), e = ld(m[4] + i), f = ld(m[5] + i);
        __m256d g = ld(m[6] + i), h = ld(m[7] + i), k = ld(m[8] + i);
        __m256d r = _mm256_mul_pd(a, cross(e, k, f, h));
        r = _mm256_fnmadd_pd(b, cross(d, k, f, g), r);
        r = _mm256_fmadd_pd(c, cross(d, h, e, g), r);
        _mm256_storeu_pd(out + i, r);
    }
    if (i < count) {
        const double* tail[9];
        for (int k = 0; k < 9; ++k) tail[k] = m[k] + i;
        scalar_kernels().det3(tail, count - i, out + i);
    }
}

void det4(const double* const* m, std::size_t count, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d e[16];
        for (int k = 0; k < 16; ++k) e[k] = ld(m[k] + i);
        auto E = [&](int r, int c) { return e[4 * r + c]; };
        __m256d s0 = cross(E(0, 0), E(1, 1), E(1, 0), E(0, 1));
        __m256d s1 = cross(E(0, 0), E(1, 2), E(1, 0), E(0, 2));
        __m256d s2 = cross(E(0, 0), E(1, 3), E(1, 0), E(0, 3));
        __m256d s3 = cross(E(0, 1), E(1, 2), E(1, 1), E(0, 2));
        __m256d s4 = cross(E(0, 1), E(1, 3), E(1, 1), E(0, 3));
        __m256d s5 = cross(E(0, 2), E(1, 3), E(1, 2), E(0, 3));
        __m256d c5 = cross(E(2, 2), E(3, 3), E(3, 2), E(2, 3));
        __m256d c4 = cross(E(2, 1), E(3, 3), E(3, 1), E(2, 3));
        __m256d c3 = cross(E(2, 1), E(3, 2), E(3, 1), E(2, 2));
        __m256d c2 = cross(E(2, 0), E(3, 3), E(3, 0), E(2, 3));
        __m256d c1 = cross(E(2, 0), E(3, 2), E(3, 0), E(2, 2));
        __m256d c0 = cross(E(2, 0), E(3, 1), E(3, 0), E(2, 1));
        __m256d r = _mm256_mul_pd(s0, c5);
        r = _mm256_fnmadd_pd(s1, c4, r);
        r = _mm256_fmadd_pd(s2, c3, r);
        r = _mm256_fmadd_pd(s3, c2, r);
        r = _mm256_fnmadd_pd(s4, c1, r);
        r = _mm256_fmadd_pd(s5, c0, r);
        _mm256_storeu_pd(out + i, r);
    }
    if (i < count) {
        const double* tail[16];
        for (int k = 0; k < 16; ++k) tail[k] = m[k] + i;
        scalar_kernels().det4(tail, count - i, out + i);
    }
}

double max_sq_distance(const double* const* a, const double* const* b, int comps, std::size_t count) {
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d s = _mm256_setzero_pd();
        for (int c = 0; c < comps; ++c) {
            __m256d d = _mm256_sub_pd(ld(a[c] + i), ld(b[c] + i));
            s = _mm256_fmadd_pd(d, d, s);
        }
        best = _mm256_max_pd(best, s);
    }
    double r = hmax(best);
    if (i < count) {
        const double* ta[16];
        const double* tb[16];
        for (int c = 0; c < comps && c < 16; ++c) {
            ta[c] = a[c] + i;
            tb[c] = b[c] + i;
        }
        r = std::fmax(r, scalar_kernels().max_sq_distance(ta, tb, comps, count - i));
    }
    return r;
}

double sum_below(const double* values, const double* keys, double threshold, std::size_t count) {
    __m256d acc = _mm256_setzero_pd();
    __m256d t = _mm256_set1_pd(threshold);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d mask = _mm256_cmp_pd(ld(keys + i), t, _CMP_LT_OQ);
        acc = _mm256_add_pd(acc, _mm256_and_pd(mask, ld(values + i)));
    }
    double s = hsum(acc);
    if (i < count) s += scalar_kernels().sum_below(values + i, keys + i, threshold, count - i);
    return s;
}

double max_abs(const double* v, std::size_t count) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) best = _mm256_max_pd(best, _mm256_andnot_pd(sign, ld(v + i)));
    double r = hmax(best);
    if (i < count) r = std::fmax(r, scalar_kernels().max_abs(v + i, count - i));
    return r;
}

double masked_min(const double* v, const unsigned char* keys, std::size_t count) {
    const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d best = inf;
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        int packed;
        std::memcpy(&packed, keys + i, sizeof packed);
        __m256d sel = _mm256_castsi256_pd(
            _mm256_cmpgt_epi64(_mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed)), _mm256_setzero_si256()));
        best = _mm256_min_pd(best, _mm256_blendv_pd(inf, ld(v + i), sel));
    }
    double r = hmin(best);
    if (i < count) r = std::fmin(r, scalar_kernels().masked_min(v + i, keys + i, count - i));
    return r;
}

} // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{det3, det4, max_sq_distance, sum_below, max_abs, masked_min};
    return k;
}

} // namespace ellip::simd
