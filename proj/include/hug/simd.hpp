#pragma once

// Data-parallel inner loops of the pipeline.
//
// Each kernel has a scalar reference implementation and, where the build
// target supports it, an AVX2/FMA (x86-64) or NEON (aarch64) variant. The
// variant is chosen once at runtime from the CPU feature set; HUG_SIMD=scalar
// in the environment forces the reference path. Complex arrays are passed as
// interleaved (re, im) doubles, the layout std::complex<double> guarantees.

#include <cstddef>
#include <span>
#include <string_view>

#include "hug/common.hpp"

namespace hug::simd {

struct KernelTable {
    const char* name;
    // out[i] = a[i] * b[i], n complex elements.
    void (*complex_multiply)(const double* a, const double* b, double* out, std::size_t n);
    // out2 = sum_i x[i] * conj(y[i]), n complex elements.
    void (*complex_dot_conj)(const double* x, const double* y, std::size_t n, double* out2);
    // out[i] = |z[i]|^2.
    void (*power)(const double* z, double* out, std::size_t n);
    // y[i] += alpha * x[i].
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out[i] = a[i] * b[i] (real).
    void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
    // sum_i x[i].
    double (*sum)(const double* x, std::size_t n);
    // out[i] = sqrt(max(p[i], 0)) rounded to float; NaN maps to 0.
    void (*magnitude_f32)(const double* p, float* out, std::size_t n);
};

const KernelTable& scalar_kernels();
/// AVX2/FMA table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();
/// NEON table, or nullptr when not compiled in.
const KernelTable* neon_kernels();

/// The table selected for this process.
const KernelTable& active();

/// Every table usable on this machine, reference first.
std::span<const KernelTable* const> available();

inline void complex_multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    active().complex_multiply(reinterpret_cast<const double*>(a.data()), reinterpret_cast<const double*>(b.data()),
                              reinterpret_cast<double*>(out.data()), out.size());
}

inline cplx complex_dot_conj(std::span<const cplx> x, std::span<const cplx> y) {
    double r[2];
    active().complex_dot_conj(reinterpret_cast<const double*>(x.data()), reinterpret_cast<const double*>(y.data()),
                              x.size(), r);
    return {r[0], r[1]};
}

inline void power(std::span<const cplx> z, std::span<double> out) {
    active().power(reinterpret_cast<const double*>(z.data()), out.data(), out.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), y.size());
}

inline void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    active().multiply(a.data(), b.data(), out.data(), out.size());
}

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline void magnitude_f32(std::span<const double> p, std::span<float> out) {
    active().magnitude_f32(p.data(), out.data(), out.size());
}

}  // namespace hug::simd
