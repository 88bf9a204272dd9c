#include "hug/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace hug {

namespace {

using PlanKey = std::tuple<std::size_t, int, std::size_t, std::size_t, std::size_t>;

// FFTW's planner is not thread-safe; executing a finished plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::map<PlanKey, fftw_plan>& plan_cache() {
    static std::map<PlanKey, fftw_plan> cache;
    return cache;
}

}  // namespace

FftPlan::FftPlan(std::size_t n, FftDirection dir, std::size_t batch, std::size_t stride, std::size_t dist)
    : n_(n), plan_(nullptr) {
    if (n == 0 || batch == 0 || stride == 0) throw Error("FFT plan with empty shape");
    if (dist == 0) dist = n * stride;
    const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const PlanKey key{n, sign, batch, stride, dist};

    std::lock_guard lock(planner_mutex());
    auto& cache = plan_cache();
    if (auto it = cache.find(key); it != cache.end()) {
        plan_ = it->second;
        return;
    }
    const std::size_t extent = (batch - 1) * dist + (n - 1) * stride + 1;
    std::vector<cplx> in(extent), out(extent);
    const int len = static_cast<int>(n);
    fftw_plan p = fftw_plan_many_dft(1, &len, static_cast<int>(batch), reinterpret_cast<fftw_complex*>(in.data()),
                                     nullptr, static_cast<int>(stride), static_cast<int>(dist),
                                     reinterpret_cast<fftw_complex*>(out.data()), nullptr, static_cast<int>(stride),
                                     static_cast<int>(dist), sign, FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    if (p == nullptr) throw Error("FFTW failed to create a plan");
    cache.emplace(key, p);
    plan_ = p;
}

void FftPlan::execute(const cplx* in, cplx* out) const {
    // fftw_execute_dft takes non-const input but does not write to it for out-of-place plans.
    fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace hug
