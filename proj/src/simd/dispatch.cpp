#include "ellip/error.hpp"
#include "ellip/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace ellip::simd {

std::string_view to_string(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_supported() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend pick_default() {
    const char* env = std::getenv("ELLIP_SIMD");
    std::string choice = env ? env : "auto";
    if (choice == "scalar") return Backend::Scalar;
    return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<int>& current() {
    static std::atomic<int> b{static_cast<int>(pick_default())};
    return b;
}

} // namespace

Backend active_backend() { return static_cast<Backend>(current().load()); }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported()) throw PreconditionError("AVX2/FMA not supported on this CPU");
    current().store(static_cast<int>(b));
}

const Kernels& kernels() {
    return active_backend() == Backend::Avx2 ? avx2_kernels() : scalar_kernels();
}

} // namespace ellip::simd
