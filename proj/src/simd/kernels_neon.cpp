#include <arm_neon.h>

#include "hug/simd.hpp"

namespace hug::simd::detail {

// One complex number per float64x2_t: [re im].

void complex_multiply_neon(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t va = vld1q_f64(a + 2 * i);
        const float64x2_t vb = vld1q_f64(b + 2 * i);
        const float64x2_t b_re = vdupq_laneq_f64(vb, 0);
        const float64x2_t b_im = vdupq_laneq_f64(vb, 1);
        const float64x2_t a_sw = vextq_f64(va, va, 1);  // [ai ar]
        const float64x2_t sign = {-1.0, 1.0};
        vst1q_f64(out + 2 * i, vfmaq_f64(vmulq_f64(va, b_re), vmulq_f64(a_sw, sign), b_im));
    }
}

void complex_dot_conj_neon(const double* x, const double* y, std::size_t n, double* out2) {
    float64x2_t acc_a = vdupq_n_f64(0.0);  // [xr*yr, xi*yi]
    float64x2_t acc_b = vdupq_n_f64(0.0);  // [xr*yi, xi*yr]
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t vx = vld1q_f64(x + 2 * i);
        const float64x2_t vy = vld1q_f64(y + 2 * i);
        acc_a = vfmaq_f64(acc_a, vx, vy);
        acc_b = vfmaq_f64(acc_b, vx, vextq_f64(vy, vy, 1));
    }
    out2[0] = vgetq_lane_f64(acc_a, 0) + vgetq_lane_f64(acc_a, 1);
    out2[1] = vgetq_lane_f64(acc_b, 1) - vgetq_lane_f64(acc_b, 0);
}

void power_neon(const double* z, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v0 = vld1q_f64(z + 2 * i);
        const float64x2_t v1 = vld1q_f64(z + 2 * i + 2);
        vst1q_f64(out + i, vpaddq_f64(vmulq_f64(v0, v0), vmulq_f64(v1, v1)));
    }
    for (; i < n; ++i) out[i] = z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1];
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void multiply_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) s += x[i];
    return s;
}

void magnitude_f32_neon(const double* p, float* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(p + i);
        const uint64x2_t pos = vcgtq_f64(v, vdupq_n_f64(0.0));  // false for NaN
        const float64x2_t c = vbslq_f64(pos, v, vdupq_n_f64(0.0));
        vst1_f32(out + i, vcvt_f32_f64(vsqrtq_f64(c)));
    }
    for (; i < n; ++i) out[i] = static_cast<float>(__builtin_sqrt(p[i] > 0.0 ? p[i] : 0.0));
}

}  // namespace hug::simd::detail
