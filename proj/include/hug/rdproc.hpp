#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hug/common.hpp"
#include "hug/echosim.hpp"
#include "hug/params.hpp"
#include "hug/waveform.hpp"

namespace hug::rdproc {

/// One frame's range-Doppler power map, N Doppler rows by range_bins
/// columns, Doppler-major. Row N/2 is zero velocity; velocity grows with
/// the row index.
struct RangeDopplerImage {
    std::size_t doppler_bins = 0;
    std::size_t range_bins = 0;
    std::vector<double> power;
    std::vector<double> velocity_axis;  // m/s per Doppler row
    std::vector<double> range_axis;     // m per range column
    std::size_t frame_index = 0;

    double at(std::size_t doppler, std::size_t range) const { return power[doppler * range_bins + range]; }
};

struct RdCube {
    FrameParams params;
    std::vector<RangeDopplerImage> images;
    GestureClass label = GestureClass::no_finger;
    std::uint16_t subject = 0;
};

std::vector<double> velocity_axis(const FrameParams& params);
/// Ranges of the ROI columns.
std::vector<double> range_axis(const FrameParams& params);
/// Slow-time window, Hann over M pulses: w[m] = 0.5 - 0.5 cos(2 pi (m+1)/(M+1)).
std::vector<double> slow_time_window(std::size_t pulses);

// Quadrature demodulation to complex baseband

/// Linear-phase low-pass FIR used after mixing: Kaiser-windowed sinc with
/// passband edge 1.2*B/2 and >= 60 dB rejection from 2B. Odd length, unit DC gain.
std::vector<double> demod_lowpass(const FrameParams& params, double passband_rate);

/// Mixes a real passband frame down by fc, low-pass filters (group delay
/// removed) and decimates to Fs. The result carries the usual factor 1/2 of
/// real-to-complex demodulation. Throws if the rate is below 2(fc + B/2) or
/// not an integer multiple of Fs, or if the length is not a whole frame.
CMatrix iq_demodulate(std::span<const double> passband, const FrameParams& params, double passband_rate);

// Fast-time matched filtering

/// Correlates each pulse row against the pulse; output column k corresponds
/// to round-trip delay k/Fs. Rows are treated as one continuous receive
/// stream so echoes straddling a row boundary are compressed in full.
/// Frequency-domain implementation.
CMatrix matched_filter(const CMatrix& frame, const waveform::PulseSamples& reference);

/// Same output computed by direct time-domain correlation.
CMatrix matched_filter_direct(const CMatrix& frame, const waveform::PulseSamples& reference);

// Slow-time processing

/// Windowed, zero-padded, FFT-shifted slow-time spectra of the ROI columns:
/// N x range_bins complex, Doppler-major. Unnormalised transform.
CMatrix doppler_spectrum(const CMatrix& profiles, const FrameParams& params);

RangeDopplerImage doppler_fft(const CMatrix& profiles, const FrameParams& params, std::size_t frame_index = 0);

/// Holds the per-parameter-set precomputation (reference pulse and its
/// spectrum, window, axes). Immutable after construction and safe to share
/// across threads.
class Processor {
public:
    explicit Processor(const FrameParams& params);

    const FrameParams& params() const noexcept { return params_; }
    const waveform::PulseSamples& reference() const noexcept { return reference_; }

    RangeDopplerImage process_frame(const CMatrix& frame, std::size_t frame_index) const;
    CMatrix compress(const CMatrix& frame) const;

private:
    FrameParams params_;
    waveform::PulseSamples reference_;
    std::size_t fft_size_;
    std::vector<cplx> reference_spectrum_;
};

/// One image per frame, metadata propagated. Throws DataError on a frame of
/// the wrong shape.
RdCube process_recording(const echosim::Recording& rec);
RdCube process_recording(const echosim::Recording& rec, const Processor& processor);

}  // namespace hug::rdproc
