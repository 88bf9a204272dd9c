#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hug/common.hpp"

namespace hug {

/// System parameter set of the ultrasonic pulse-Doppler front end.
///
/// Defaults reproduce the published configuration: 300 kHz carrier,
/// 20 kHz bandwidth, 600 us PRI, 12 pulses per frame, 256-point slow-time
/// FFT. The pulse width and sound speed are not published and are chosen
/// so that c/(2B) is 0.85 cm and tau*B = 4.
struct FrameParams {
    double sound_speed = 340.0;        // m/s
    double carrier_freq = 300'000.0;   // Hz
    double bandwidth = 20'000.0;       // Hz
    double pri = 600e-6;               // s
    std::uint32_t pulses_per_frame = 12;
    double pulse_width = 200e-6;       // s
    double fast_time_rate = 400'000.0; // Hz
    std::uint32_t fft_points = 256;
    std::uint32_t range_bins = 180;
    std::uint32_t roi_start_bin = 0;

    double wavelength() const { return sound_speed / carrier_freq; }
    /// Fast-time samples per PRI, floor(T * Fs).
    std::size_t pri_samples() const;
    /// Samples covered by one pulse, round(tau * Fs).
    std::size_t pulse_samples() const;
    /// Duration of one frame, M * T.
    double frame_period() const { return pulses_per_frame * pri; }

    bool operator==(const FrameParams&) const = default;
};

/// The configuration shipped with the CLI: defaults with the ROI moved to
/// cover 2.55 cm .. 10.2 cm, where the simulated gestures live.
FrameParams shipped_params();

struct DerivedResolutions {
    double range_resolution;      // c / (2B)
    double velocity_resolution;   // lambda / (2MT)
    double unambiguous_range;     // c T / 2
    double unambiguous_velocity;  // lambda / (4T)
    double velocity_bin_width;    // lambda / (2NT)
    double range_bin_width;       // c / (2Fs)
};

/// Lists every violated invariant; empty when the set is valid.
std::vector<std::string> check_params(const FrameParams& params);

/// Returns the params unchanged, or throws InvalidParams listing every violation.
const FrameParams& validate(const FrameParams& params);

/// Resolution and ambiguity figures. Throws InvalidParams for invalid input.
DerivedResolutions derive(const FrameParams& params);

}  // namespace hug
