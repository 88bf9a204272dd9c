#include "hug/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hug::waveform {

double PulseSamples::energy() const {
    double e = 0.0;
    for (const auto& s : samples) e += std::norm(s);
    return e;
}

std::vector<cplx> FrameWaveform::samples() const {
    std::vector<cplx> out(pri_samples * pulse_count, cplx{});
    const std::size_t len = std::min(pulse.samples.size(), pri_samples);
    for (std::size_t m = 0; m < pulse_count; ++m) {
        std::copy_n(pulse.samples.begin(), len, out.begin() + static_cast<std::ptrdiff_t>(m * pri_samples));
    }
    return out;
}

cplx chirp_value(const FrameParams& params, double t) {
    const double tau = params.pulse_width;
    if (t < 0.0 || t > tau) return {};
    const double b = params.bandwidth;
    const double phase = std::numbers::pi * (b / tau) * t * t - std::numbers::pi * b * t;
    return std::polar(1.0, phase);
}

PulseSamples chirp_pulse(const FrameParams& params) {
    validate(params);
    PulseSamples p;
    p.sample_rate = params.fast_time_rate;
    p.duration = params.pulse_width;
    const std::size_t n = params.pulse_samples();
    p.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) p.samples[k] = chirp_value(params, static_cast<double>(k) / p.sample_rate);
    return p;
}

FrameWaveform frame_waveform(const FrameParams& params) {
    FrameWaveform w;
    w.pulse = chirp_pulse(params);
    w.pri_samples = params.pri_samples();
    w.pulse_count = params.pulses_per_frame;
    return w;
}

PulseSamples matched_reference(const PulseSamples& pulse) {
    const double e = pulse.energy();
    if (pulse.samples.empty() || !(e > 0.0)) throw DataError("matched reference of a zero-energy pulse");
    PulseSamples ref = pulse;
    const double scale = 1.0 / std::sqrt(e);
    std::reverse(ref.samples.begin(), ref.samples.end());
    for (auto& s : ref.samples) s = std::conj(s) * scale;
    return ref;
}

}  // namespace hug::waveform
