#include <cstdlib>
#include <cstring>
#include <vector>

#include "hug/simd.hpp"

namespace hug::simd {

namespace detail {
#if defined(HUG_HAVE_AVX2)
void complex_multiply_avx2(const double*, const double*, double*, std::size_t);
void complex_dot_conj_avx2(const double*, const double*, std::size_t, double*);
void power_avx2(const double*, double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void multiply_avx2(const double*, const double*, double*, std::size_t);
double sum_avx2(const double*, std::size_t);
void magnitude_f32_avx2(const double*, float*, std::size_t);
#endif
#if defined(HUG_HAVE_NEON)
void complex_multiply_neon(const double*, const double*, double*, std::size_t);
void complex_dot_conj_neon(const double*, const double*, std::size_t, double*);
void power_neon(const double*, double*, std::size_t);
void axpy_neon(double, const double*, double*, std::size_t);
void multiply_neon(const double*, const double*, double*, std::size_t);
double sum_neon(const double*, std::size_t);
void magnitude_f32_neon(const double*, float*, std::size_t);
#endif
}  // namespace detail

namespace {

#if defined(HUG_HAVE_AVX2)
constexpr KernelTable kAvx2{
    "avx2",
    detail::complex_multiply_avx2,
    detail::complex_dot_conj_avx2,
    detail::power_avx2,
    detail::axpy_avx2,
    detail::multiply_avx2,
    detail::sum_avx2,
    detail::magnitude_f32_avx2,
};
#endif

#if defined(HUG_HAVE_NEON)
constexpr KernelTable kNeon{
    "neon",
    detail::complex_multiply_neon,
    detail::complex_dot_conj_neon,
    detail::power_neon,
    detail::axpy_neon,
    detail::multiply_neon,
    detail::sum_neon,
    detail::magnitude_f32_neon,
};
#endif

bool forced_scalar() {
    const char* env = std::getenv("HUG_SIMD");
    return env != nullptr && std::strcmp(env, "scalar") == 0;
}

const KernelTable& select() {
    if (forced_scalar()) return scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    if (const auto* t = neon_kernels()) return *t;
    return scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(HUG_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(HUG_HAVE_NEON)
    return &kNeon;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

std::span<const KernelTable* const> available() {
    static const std::vector<const KernelTable*> tables = [] {
        std::vector<const KernelTable*> v{&scalar_kernels()};
        if (const auto* t = avx2_kernels()) v.push_back(t);
        if (const auto* t = neon_kernels()) v.push_back(t);
        return v;
    }();
    return tables;
}

}  // namespace hug::simd
