#include "hug/simd.hpp"

namespace hug::simd {

namespace {

void complex_multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[2 * i], ai = a[2 * i + 1];
        const double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br - ai * bi;
        out[2 * i + 1] = ar * bi + ai * br;
    }
}

void complex_dot_conj_scalar(const double* x, const double* y, std::size_t n, double* out2) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xi * yr - xr * yi;
    }
    out2[0] = re;
    out2[1] = im;
}

void power_scalar(const double* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1];
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

void magnitude_f32_scalar(const double* p, float* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(__builtin_sqrt(p[i] > 0.0 ? p[i] : 0.0));
}

constexpr KernelTable kScalar{
    "scalar", complex_multiply_scalar, complex_dot_conj_scalar, power_scalar, axpy_scalar, multiply_scalar, sum_scalar,
    magnitude_f32_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace hug::simd
