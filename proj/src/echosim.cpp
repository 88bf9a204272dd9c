#include "hug/echosim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hug/waveform.hpp"

namespace hug::echosim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gesture zone limits; keeps every echo inside the shipped ROI.
constexpr double kZoneNear = 0.030;
constexpr double kZoneFar = 0.097;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double normal() { return normal_(eng_); }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Position/velocity of a unit-displacement motion profile at phase s in [0, 1].
struct Profile {
    double pos;
    double vel;  // d(pos)/ds
};

Profile raised_cosine(double s) {
    return {s - std::sin(kTwoPi * s) / kTwoPi, 1.0 - std::cos(kTwoPi * s)};
}

// Dip of depth 1 and back.
Profile dip(double s) {
    return {-(1.0 - std::cos(kTwoPi * s)) / 2.0, -std::numbers::pi * std::sin(kTwoPi * s)};
}

Profile accelerate(double s) { return {s * s, 2.0 * s}; }

Profile decelerate(double s) { return {1.0 - (1.0 - s) * (1.0 - s), 2.0 * (1.0 - s)}; }

// Frame-level timing of the single motion phase of a gesture.
struct Timing {
    std::size_t frames = 0;
    double lead_in = 0.0;        // frames before the motion starts
    double motion_frames = 0.0;  // frames the motion lasts
    double frame_period = 0.0;   // s

    // Motion phase and d(phase)/dt at frame f.
    std::pair<double, double> phase(std::size_t f) const {
        const double u = (static_cast<double>(f) - lead_in) / motion_frames;
        const double rate = 1.0 / (motion_frames * frame_period);
        if (u <= 0.0) return {0.0, 0.0};
        if (u >= 1.0) return {1.0, 0.0};
        return {u, rate};
    }
    double time(std::size_t f) const { return static_cast<double>(f) * frame_period; }
};

Timing plan_timing(Rng& rng, const SubjectTraits& traits, double motion_seconds, double frame_period) {
    Timing t;
    t.frame_period = frame_period;
    double frames = std::round(rng.uniform(45.0, 85.0) * traits.duration_scale);
    t.motion_frames = motion_seconds / frame_period;
    frames = std::max(frames, std::ceil(t.motion_frames) + 6.0);
    frames = std::clamp(frames, static_cast<double>(kMinGestureFrames), static_cast<double>(kMaxGestureFrames));
    t.frames = static_cast<std::size_t>(frames);
    t.motion_frames = std::min(t.motion_frames, frames - 6.0);
    t.lead_in = std::floor(rng.uniform(0.25, 0.65) * (frames - t.motion_frames));
    return t;
}

// Shifts every scatterer so the trajectory stays inside the gesture zone.
void fit_zone(std::vector<std::vector<Scatterer>>& frames) {
    double lo = kZoneFar, hi = kZoneNear;
    for (const auto& f : frames) {
        for (const auto& s : f) {
            lo = std::min(lo, s.range);
            hi = std::max(hi, s.range);
        }
    }
    double shift = 0.0;
    if (hi > kZoneFar) shift = kZoneFar - hi;
    if (lo + shift < kZoneNear) shift = kZoneNear - lo;
    if (shift == 0.0) return;
    for (auto& f : frames) {
        for (auto& s : f) s.range += shift;
    }
}

struct Style {
    double speed_gain;
    double distance_gain;
    double speed_cap;
};

Style style_for(Kinematics k) {
    if (k == Kinematics::exaggerated) return {1.4, 1.2, 0.42};
    return {1.0, 1.0, 0.40};
}

}  // namespace

SubjectTraits subject_traits(std::uint64_t subject_seed) {
    if (subject_seed == 0) return {};
    Rng rng(mix_seed(subject_seed, 0x5B));
    SubjectTraits t;
    t.velocity_scale = rng.uniform(0.8, 1.2);
    t.range_offset = rng.uniform(-0.01, 0.01);
    t.duration_scale = rng.uniform(0.75, 1.25);
    return t;
}

GestureScript script_gesture(GestureClass gesture, std::uint64_t subject_seed, std::uint64_t rng_seed,
                             const FrameParams& params, const ScriptOptions& options) {
    validate(params);
    if (class_index(gesture) >= kClassCount) throw DataError("unknown gesture class");

    GestureScript script;
    script.gesture = gesture;
    script.subject_seed = subject_seed;
    script.rng_seed = rng_seed;

    const SubjectTraits traits = subject_traits(subject_seed);
    const Style style = style_for(options.kinematics);
    const double frame_period = params.frame_period();
    Rng rng(mix_seed(rng_seed, class_index(gesture)));

    const double center = options.scene_center + traits.range_offset + rng.uniform(-0.002, 0.002);
    const double speed_scale = traits.velocity_scale * rng.uniform(0.9, 1.1) * style.speed_gain;
    const bool exaggerated = options.kinematics == Kinematics::exaggerated;
    const double refl_a = exaggerated ? 1.0 : rng.uniform(0.6, 1.0);
    const double refl_b = exaggerated ? 1.0 : rng.uniform(0.6, 1.0);
    auto peak_speed = [&](double lo, double hi) { return std::min(rng.uniform(lo, hi) * speed_scale, style.speed_cap); };

    auto& frames = script.frames;
    switch (gesture) {
        case GestureClass::no_finger: {
            const double d = std::round(rng.uniform(45.0, 85.0) * traits.duration_scale);
            frames.resize(static_cast<std::size_t>(
                std::clamp(d, static_cast<double>(kMinGestureFrames), static_cast<double>(kMaxGestureFrames))));
            break;
        }
        case GestureClass::finger_press: {
            const double depth = rng.uniform(0.012, 0.020) * style.distance_gain;
            const double v = peak_speed(0.18, 0.30);
            const Timing t = plan_timing(rng, traits, std::numbers::pi * depth / v, frame_period);
            const double r0 = center + 0.005;
            frames.resize(t.frames);
            for (std::size_t f = 0; f < t.frames; ++f) {
                auto [s, rate] = t.phase(f);
                const Profile p = dip(s);
                frames[f].push_back({r0 + depth * p.pos, depth * p.vel * rate, refl_a, 1});
            }
            break;
        }
        case GestureClass::button_on:
        case GestureClass::button_off: {
            const bool on = gesture == GestureClass::button_on;
            const double gap = on ? rng.uniform(0.025, 0.035) * style.distance_gain : 0.03;
            const double v = peak_speed(0.20, 0.32);
            const Timing t = plan_timing(rng, traits, 2.0 * gap / v, frame_period);
            const double thumb_speed = 0.004 * speed_scale;
            const double thumb0 = center - 0.015;
            frames.resize(t.frames);
            for (std::size_t f = 0; f < t.frames; ++f) {
                auto [s, rate] = t.phase(f);
                const double thumb = thumb0 + thumb_speed * t.time(f);
                if (on) {
                    if (s <= 0.0) {
                        frames[f].push_back({thumb, thumb_speed, std::max(refl_a, refl_b), 0});
                        continue;
                    }
                    const Profile p = decelerate(s);
                    frames[f].push_back({thumb, thumb_speed, refl_a, 0});
                    frames[f].push_back({thumb + gap * p.pos, thumb_speed + gap * p.vel * rate, refl_b, 1});
                } else {
                    if (s >= 1.0) {
                        frames[f].push_back({thumb, thumb_speed, std::max(refl_a, refl_b), 0});
                        continue;
                    }
                    const Profile p = accelerate(s);
                    // The index finger closes the gap to where the drifting thumb is at contact.
                    const double closing = gap - thumb_speed * (t.lead_in + t.motion_frames) * frame_period;
                    frames[f].push_back({thumb, thumb_speed, refl_a, 0});
                    const double index_pos = thumb0 + gap - closing * p.pos;
                    const double index_vel = -closing * p.vel * rate;
                    frames[f].push_back({std::max(index_pos, thumb), index_vel, refl_b, 1});
                }
            }
            break;
        }
        case GestureClass::motion_up:
        case GestureClass::motion_down: {
            const double dir = gesture == GestureClass::motion_up ? -1.0 : 1.0;
            const double dist = rng.uniform(0.025, 0.035) * style.distance_gain;
            const double v = peak_speed(0.15, 0.28);
            const Timing t = plan_timing(rng, traits, 2.0 * dist / v, frame_period);
            const double r0 = center - dir * dist / 2.0;
            frames.resize(t.frames);
            for (std::size_t f = 0; f < t.frames; ++f) {
                auto [s, rate] = t.phase(f);
                const Profile p = raised_cosine(s);
                frames[f].push_back({r0 + dir * dist * p.pos, dir * dist * p.vel * rate, refl_a, 1});
            }
            break;
        }
        case GestureClass::screw: {
            const double amp = rng.uniform(0.006, 0.009) * style.distance_gain;
            const double v = peak_speed(0.15, 0.25);
            const double cycles = rng.uniform(1.5, 2.5);
            const double freq = v / (kTwoPi * amp);
            const Timing t = plan_timing(rng, traits, cycles / freq, frame_period);
            const double cyc = freq * t.motion_frames * frame_period;
            const double near = center - 0.015, far = center + 0.015;
            frames.resize(t.frames);
            for (std::size_t f = 0; f < t.frames; ++f) {
                auto [s, rate] = t.phase(f);
                const double arg = kTwoPi * cyc * s;
                const double pos = amp * std::sin(arg);
                const double vel = amp * kTwoPi * cyc * std::cos(arg) * rate;
                frames[f].push_back({near + pos, vel, refl_a, 0});
                frames[f].push_back({far - pos, -vel, refl_b, 1});
            }
            break;
        }
    }
    fit_zone(frames);
    return script;
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

CMatrix render_frame(std::span<const Scatterer> scatterers, const FrameParams& params, MotionModel motion) {
    const std::size_t rows = params.pulses_per_frame;
    const std::size_t cols = params.pri_samples();
    CMatrix frame(rows, cols);
    const double fs = params.fast_time_rate;
    const double tau = params.pulse_width;
    const double c = params.sound_speed;
    const std::size_t total = rows * cols;
    cplx* stream = frame.data().data();

    for (const auto& s : scatterers) {
        if (s.reflectivity == 0.0) continue;
        for (std::size_t m = 0; m < rows; ++m) {
            const double dt = motion == MotionModel::true_motion ? static_cast<double>(m) * params.pri : 0.0;
            const double r = s.range + s.velocity * dt;
            const double delay = 2.0 * r / c;
            if (!(delay > 0.0) || delay >= params.pri) {
                throw DataError("scatterer at range " + std::to_string(r) + " m puts the echo delay outside (0, PRI)");
            }
            const cplx carrier = std::polar(s.reflectivity, -kTwoPi * params.carrier_freq * delay);
            const auto first = static_cast<std::size_t>(std::ceil(delay * fs));
            const auto last = static_cast<std::size_t>(std::floor((delay + tau) * fs));
            for (std::size_t k = first; k <= last; ++k) {
                const std::size_t n = m * cols + k;
                if (n >= total) break;
                const double t = static_cast<double>(k) / fs - delay;
                stream[n] += waveform::chirp_value(params, t) * carrier;
            }
        }
    }
    return frame;
}

Recording render_echo(const GestureScript& script, const FrameParams& params, const RenderOptions& options) {
    validate(params);
    if (!std::isfinite(options.snr_db)) throw DataError("SNR must be finite");
    Recording rec;
    rec.params = params;
    rec.label = script.gesture;
    rec.truth = script;
    rec.frames.reserve(script.frames.size());

    Rng rng(options.noise_seed);
    const double sigma = std::sqrt(noise_variance(options.snr_db) / 2.0);
    for (const auto& scatterers : script.frames) {
        CMatrix frame = render_frame(scatterers, params, options.motion);
        if (options.noise) {
            for (auto& v : frame.data()) {
                const double re = rng.normal();
                const double im = rng.normal();
                v += cplx(sigma * re, sigma * im);
            }
        }
        rec.frames.push_back(std::move(frame));
    }
    return rec;
}

double default_passband_rate(const FrameParams& params) {
    const double ratio = std::ceil(4.0 * params.carrier_freq / params.fast_time_rate - 1e-9);
    return ratio * params.fast_time_rate;
}

std::vector<double> render_passband_frame(std::span<const Scatterer> scatterers, const FrameParams& params,
                                          MotionModel motion, double passband_rate) {
    validate(params);
    const double ratio = passband_rate / params.fast_time_rate;
    const auto decim = static_cast<std::size_t>(std::llround(ratio));
    if (decim == 0 || std::abs(ratio - static_cast<double>(decim)) > 1e-9)
        throw DataError("passband rate must be an integer multiple of the fast-time rate");
    const std::size_t rows = params.pulses_per_frame;
    const std::size_t cols = params.pri_samples() * decim;
    const std::size_t total = rows * cols;
    std::vector<double> out(total, 0.0);
    const double tau = params.pulse_width;
    const double c = params.sound_speed;

    for (const auto& s : scatterers) {
        for (std::size_t m = 0; m < rows; ++m) {
            const double dt = motion == MotionModel::true_motion ? static_cast<double>(m) * params.pri : 0.0;
            const double r = s.range + s.velocity * dt;
            const double delay = 2.0 * r / c;
            if (!(delay > 0.0) || delay >= params.pri) throw DataError("echo delay outside (0, PRI)");
            const auto first = static_cast<std::size_t>(std::ceil(delay * passband_rate));
            const auto last = static_cast<std::size_t>(std::floor((delay + tau) * passband_rate));
            for (std::size_t k = first; k <= last; ++k) {
                const std::size_t n = m * cols + k;
                if (n >= total) break;
                const double t_abs = static_cast<double>(n) / passband_rate;
                const double t_rel = static_cast<double>(k) / passband_rate - delay;
                const cplx bb = waveform::chirp_value(params, t_rel) *
                                std::polar(1.0, kTwoPi * params.carrier_freq * (t_abs - delay));
                out[n] += s.reflectivity * bb.real();
            }
        }
    }
    return out;
}

}  // namespace hug::echosim
