#include "hug/params.hpp"

#include <cmath>

namespace hug {

std::size_t FrameParams::pri_samples() const {
    return static_cast<std::size_t>(std::floor(pri * fast_time_rate + 1e-9));
}

std::size_t FrameParams::pulse_samples() const {
    return static_cast<std::size_t>(std::llround(pulse_width * fast_time_rate));
}

FrameParams shipped_params() {
    FrameParams p;
    p.roi_start_bin = 60;
    return p;
}

std::vector<std::string> check_params(const FrameParams& p) {
    std::vector<std::string> errors;
    auto finite_positive = [&](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) {
            errors.push_back(std::string(name) + " must be finite and > 0");
            return false;
        }
        return true;
    };
    bool c_ok = finite_positive(p.sound_speed, "sound speed");
    bool fc_ok = finite_positive(p.carrier_freq, "carrier frequency");
    bool b_ok = finite_positive(p.bandwidth, "bandwidth");
    bool t_ok = finite_positive(p.pri, "PRI");
    bool tau_ok = finite_positive(p.pulse_width, "pulse width");
    bool fs_ok = finite_positive(p.fast_time_rate, "fast-time rate");

    if (fc_ok && b_ok && !(p.carrier_freq > p.bandwidth / 2.0))
        errors.emplace_back("carrier frequency must exceed half the bandwidth");
    if (tau_ok && t_ok && !(p.pulse_width < p.pri)) errors.emplace_back("pulse width must be < PRI");
    if (fs_ok && b_ok && p.fast_time_rate < 2.0 * p.bandwidth)
        errors.emplace_back("fast-time rate below complex Nyquist (Fs >= 2B)");
    if (p.pulses_per_frame == 0) errors.emplace_back("pulses per frame must be >= 1");
    if (p.fft_points == 0) errors.emplace_back("FFT points must be >= 1");
    if (p.pulses_per_frame > p.fft_points)
        errors.emplace_back("pulses per frame must not exceed FFT points (no truncation)");
    if (p.fft_points % 2 != 0) errors.emplace_back("FFT points must be even (centred Doppler axis)");
    if (p.range_bins == 0) errors.emplace_back("range bins must be >= 1");
    if (tau_ok && fs_ok && p.pulse_samples() == 0) errors.emplace_back("pulse shorter than one sample");
    if (t_ok && fs_ok) {
        std::uint64_t needed = std::uint64_t{p.range_bins} + p.roi_start_bin;
        if (needed > p.pri_samples())
            errors.push_back("range ROI [" + std::to_string(p.roi_start_bin) + ", " + std::to_string(needed) +
                             ") exceeds the " + std::to_string(p.pri_samples()) + " samples of one PRI");
    }
    if (c_ok && fc_ok && !(p.wavelength() > 0.0)) errors.emplace_back("wavelength must be > 0");
    return errors;
}

const FrameParams& validate(const FrameParams& params) {
    auto errors = check_params(params);
    if (!errors.empty()) throw InvalidParams(std::move(errors));
    return params;
}

DerivedResolutions derive(const FrameParams& params) {
    validate(params);
    const double c = params.sound_speed;
    const double lambda = params.wavelength();
    const double t = params.pri;
    DerivedResolutions d{};
    d.range_resolution = c / (2.0 * params.bandwidth);
    d.velocity_resolution = lambda / (2.0 * params.pulses_per_frame * t);
    d.unambiguous_range = c * t / 2.0;
    d.unambiguous_velocity = lambda / (4.0 * t);
    d.velocity_bin_width = lambda / (2.0 * params.fft_points * t);
    d.range_bin_width = c / (2.0 * params.fast_time_rate);
    return d;
}

}  // namespace hug
