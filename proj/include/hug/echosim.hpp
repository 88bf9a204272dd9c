#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hug/common.hpp"
#include "hug/params.hpp"

namespace hug::echosim {

/// A point reflector standing in for one fingertip.
struct Scatterer {
    double range = 0.0;         // m
    double velocity = 0.0;      // m/s, positive = receding
    double reflectivity = 1.0;  // linear amplitude
    std::uint32_t id = 0;

    bool operator==(const Scatterer&) const = default;
};

enum class Kinematics { standard, exaggerated };

struct ScriptOptions {
    Kinematics kinematics = Kinematics::standard;
    double scene_center = 0.07;  // m
};

inline constexpr std::size_t kMinGestureFrames = 30;
inline constexpr std::size_t kMaxGestureFrames = 120;

/// Per-frame scatterer lists for one performance of a gesture. Frame f
/// samples the trajectory at t = f * M * T.
struct GestureScript {
    GestureClass gesture = GestureClass::no_finger;
    std::uint64_t subject_seed = 0;
    std::uint64_t rng_seed = 0;
    std::vector<std::vector<Scatterer>> frames;

    std::size_t duration_frames() const { return frames.size(); }
    bool operator==(const GestureScript&) const = default;
};

/// Per-subject execution style: velocity scale, range offset, duration scale.
struct SubjectTraits {
    double velocity_scale = 1.0;
    double range_offset = 0.0;
    double duration_scale = 1.0;
};

/// subject_seed 0 is the nominal subject (no perturbation).
SubjectTraits subject_traits(std::uint64_t subject_seed);

/// Deterministic gesture trajectory. The motion templates:
///  - no-finger: no scatterers;
///  - finger-press: one finger dips toward the sensor and returns;
///  - button-on: two fingers in contact separate, one moving away;
///  - button-off: two fingers 3 cm apart, the far one accelerates onto the
///    near one and they stay merged;
///  - motion-up / motion-down: one finger with sustained negative / positive
///    range rate;
///  - screw: two fingers oscillating in antiphase about fixed ranges.
GestureScript script_gesture(GestureClass gesture, std::uint64_t subject_seed, std::uint64_t rng_seed,
                             const FrameParams& params = shipped_params(), const ScriptOptions& options = {});

enum class MotionModel {
    true_motion,   // range advances by v*T between pulses of a frame
    stop_and_hop,  // range frozen for the whole frame
};

struct RenderOptions {
    double snr_db = 10.0;
    bool noise = true;
    MotionModel motion = MotionModel::true_motion;
    std::uint64_t noise_seed = 0;
};

/// Received complex baseband. Each frame is M rows of floor(T*Fs) samples;
/// row m starts at the transmission of pulse m. Rows are contiguous in
/// time, so an echo may run across a row boundary; samples past the end of
/// the frame are not recorded.
struct Recording {
    FrameParams params;
    std::vector<CMatrix> frames;
    GestureClass label = GestureClass::no_finger;
    std::uint16_t subject = 0;
    std::optional<GestureScript> truth;
};

/// Noise-free echo of a scatterer set for one frame. Throws DataError if a
/// round-trip delay reaches the PRI.
CMatrix render_frame(std::span<const Scatterer> scatterers, const FrameParams& params, MotionModel motion);

/// Noise variance per complex sample for a unit-reflectivity echo at snr_db.
double noise_variance(double snr_db);

Recording render_echo(const GestureScript& script, const FrameParams& params, const RenderOptions& options);

/// Default passband sampling rate: the smallest integer multiple of Fs that
/// is at least 4 * fc.
double default_passband_rate(const FrameParams& params);

/// Real passband echo, refl * Re{a(t - mT - d) e^{j 2 pi fc (t - d)}}, of one
/// frame sampled at `passband_rate` (an integer multiple of Fs). Noise-free.
std::vector<double> render_passband_frame(std::span<const Scatterer> scatterers, const FrameParams& params,
                                          MotionModel motion, double passband_rate);

}  // namespace hug::echosim
