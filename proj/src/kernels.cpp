#include "tumatch/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "tumatch/common.hpp"

namespace tumatch::kernels {
namespace {

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
bool cpu_has_avx2() { return false; }
#endif

bool avx2_compiled_in() { return avx2_ops().name != scalar_ops().name; }

Backend detect() {
    if (const char* env = std::getenv("TUMATCH_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (avx2_supported()) return Backend::Avx2;
            throw InvalidArgument("TUMATCH_KERNELS=avx2 but AVX2 is unavailable");
        }
    }
    return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

Backend& state() {
    static Backend b = detect();
    return b;
}

} // namespace

bool avx2_supported() { return avx2_compiled_in() && cpu_has_avx2(); }

const Ops& active() {
    return state() == Backend::Avx2 ? avx2_ops() : scalar_ops();
}

Backend active_backend() { return state(); }

void force_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported())
        throw InvalidArgument("AVX2 kernels unavailable on this machine");
    state() = b;
}

void reset_backend() { state() = detect(); }

} // namespace tumatch::kernels
