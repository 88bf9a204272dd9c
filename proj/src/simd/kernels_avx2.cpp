// Compiled with -mavx2 -mfma. Only raw pointers and intrinsics cross this
// translation unit's boundary so no inline library code is emitted with
// AVX encodings.

#include <immintrin.h>

#include "hug/simd.hpp"

namespace hug::simd::detail {

namespace {

// Two complex numbers per __m256d: [r0 i0 r1 i1].
inline __m256d cmul2(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);         // [br0 br0 br1 br1]
    const __m256d b_im = _mm256_permute_pd(b, 0xF);    // [bi0 bi0 bi1 bi1]
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);    // [ai0 ar0 ai1 ar1]
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

}  // namespace

void complex_multiply_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(a + 2 * i);
        const __m256d vb = _mm256_loadu_pd(b + 2 * i);
        _mm256_storeu_pd(out + 2 * i, cmul2(va, vb));
    }
    for (; i < n; ++i) {
        const double ar = a[2 * i], ai = a[2 * i + 1];
        const double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br - ai * bi;
        out[2 * i + 1] = ar * bi + ai * br;
    }
}

void complex_dot_conj_avx2(const double* x, const double* y, std::size_t n, double* out2) {
    // acc_a accumulates [xr*yr, xi*yi, ...], acc_b accumulates [xr*yi, xi*yr, ...].
    __m256d acc_a = _mm256_setzero_pd();
    __m256d acc_b = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(x + 2 * i);
        const __m256d vy = _mm256_loadu_pd(y + 2 * i);
        acc_a = _mm256_fmadd_pd(vx, vy, acc_a);
        acc_b = _mm256_fmadd_pd(vx, _mm256_permute_pd(vy, 0x5), acc_b);
    }
    alignas(32) double a[4];
    alignas(32) double b[4];
    _mm256_store_pd(a, acc_a);
    _mm256_store_pd(b, acc_b);
    double re = (a[0] + a[1]) + (a[2] + a[3]);
    double im = (b[1] - b[0]) + (b[3] - b[2]);
    for (; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xi * yr - xr * yi;
    }
    out2[0] = re;
    out2[1] = im;
}

void power_avx2(const double* z, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(z + 2 * i);      // r0 i0 r1 i1
        const __m256d v1 = _mm256_loadu_pd(z + 2 * i + 4);  // r2 i2 r3 i3
        const __m256d s = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));  // p0 p2 p1 p3
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(s, 0xD8));
    }
    for (; i < n; ++i) out[i] = z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1];
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void multiply_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    double s = (a[0] + a[1]) + (a[2] + a[3]);
    for (; i < n; ++i) s += x[i];
    return s;
}

void magnitude_f32_avx2(const double* p, float* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_max_pd(_mm256_loadu_pd(p + i), zero);  // NaN -> 0
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(_mm256_sqrt_pd(v)));
    }
    for (; i < n; ++i) out[i] = static_cast<float>(__builtin_sqrt(p[i] > 0.0 ? p[i] : 0.0));
}

}  // namespace hug::simd::detail
