#pragma once
// Batched numeric kernels for the map-verification code. Each kernel has a
// scalar reference version and an AVX2/FMA version; the dispatching entry
// points pick one at first use (override with ELLIP_SIMD=scalar|avx2).
// Matrices are passed as structure-of-arrays: m[k] points at `count`
// values of entry k, row-major.
#include <cstddef>
#include <string_view>

namespace ellip::simd {

enum class Backend { Scalar, Avx2 };
std::string_view to_string(Backend b);

bool avx2_supported() noexcept;
Backend active_backend();
/// Forces a backend (tests). Throws PreconditionError if AVX2 is requested
/// on a machine without it.
void set_backend(Backend b);

struct Kernels {
    void (*det3)(const double* const* m, std::size_t count, double* out);
    void (*det4)(const double* const* m, std::size_t count, double* out);
    /// max_i sum_c (a[c][i] - b[c][i])^2
    double (*max_sq_distance)(const double* const* a, const double* const* b, int comps, std::size_t count);
    /// sum of values[i] over i with keys[i] < threshold
    double (*sum_below)(const double* values, const double* keys, double threshold, std::size_t count);
    /// max_i |v[i]|
    double (*max_abs)(const double* v, std::size_t count);
    /// min_i v[i] over i with keys[i] != 0
    double (*masked_min)(const double* v, const unsigned char* keys, std::size_t count);
};

const Kernels& scalar_kernels();
/// Only valid when avx2_supported().
const Kernels& avx2_kernels();
const Kernels& kernels();

} // namespace ellip::simd
