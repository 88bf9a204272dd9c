#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "hug/common.hpp"

namespace hug::test {

// Scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("hug-unit-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

inline std::vector<double> random_real(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Textbook O(n^2) DFT with the e^{sign j 2 pi k n / N} kernel.
inline std::vector<cplx> naive_dft(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double ang = sign * 2.0 * M_PI * static_cast<double>((k * m) % n) / static_cast<double>(n);
            acc += x[m] * std::polar(1.0, ang);
        }
        out[k] = acc;
    }
    return out;
}

inline double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace hug::test
