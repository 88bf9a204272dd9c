#pragma once

#include <vector>

#include "hug/common.hpp"
#include "hug/params.hpp"

namespace hug::waveform {

struct PulseSamples {
    std::vector<cplx> samples;
    double sample_rate = 0.0;  // Hz
    double duration = 0.0;     // s

    double energy() const;
};

/// M pulses at PRI spacing; every PRI holds the pulse followed by zeros.
struct FrameWaveform {
    PulseSamples pulse;
    std::size_t pri_samples = 0;
    std::size_t pulse_count = 0;

    std::vector<cplx> samples() const;
};

/// Analytic baseband chirp exp(j(pi B/tau t^2 - pi B t)) for t in [0, tau],
/// zero outside. Instantaneous frequency sweeps -B/2 .. +B/2.
cplx chirp_value(const FrameParams& params, double t);

/// round(tau * Fs) samples of the chirp at t = k / Fs.
PulseSamples chirp_pulse(const FrameParams& params);

FrameWaveform frame_waveform(const FrameParams& params);

/// Time-reversed complex conjugate scaled to unit energy. Convolving a
/// signal with it correlates against the pulse. Throws on a zero-energy pulse.
PulseSamples matched_reference(const PulseSamples& pulse);

}  // namespace hug::waveform
