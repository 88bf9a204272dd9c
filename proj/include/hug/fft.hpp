#pragma once

#include <cstddef>

#include "hug/common.hpp"

namespace hug {

enum class FftDirection { forward, backward };

/// Batched complex DFT backed by FFTW. Plans are created once per shape and
/// shared; execute() is safe to call concurrently from several threads.
/// The transform is unnormalised in both directions.
class FftPlan {
public:
    /// `batch` transforms of length `n`. Element j of transform b lives at
    /// index b*dist + j*stride (FFTW's "advanced" layout).
    FftPlan(std::size_t n, FftDirection dir, std::size_t batch = 1, std::size_t stride = 1, std::size_t dist = 0);

    std::size_t length() const noexcept { return n_; }
    /// Out-of-place transform; in and out must not alias.
    void execute(const cplx* in, cplx* out) const;

private:
    std::size_t n_;
    void* plan_;  // fftw_plan, owned by the process-wide cache
};

}  // namespace hug
