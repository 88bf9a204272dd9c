#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hug/params.hpp"
#include "hug/rdproc.hpp"

namespace hug::tracker {

/// Every knob of detection, association, the state machine and feature
/// quantisation. Velocity and range thresholds default to multiples of the
/// resolution cells so they scale with the parameter set.
struct TrackerConfig {
    // Detection
    double mad_k = 8.0;                // noise threshold: median(|X|) + k * MAD(|X|)
    double absolute_floor = 1.0;       // power; lower bound on the noise threshold
    double dynamic_range_db = 15.0;    // ignore anything this far below the frame's peak
    double prominence_db = 3.0;        // valley needed to keep two peaks apart
    double core_db = 3.0;              // centroid uses pixels within this of the peak
    std::size_t min_extent = 40;       // basin pixels; smaller regions are noise
    double merge_radius_bins = 1.5;    // centroids closer than this (pixels) are one scatterer

    // Association
    double gate_range = 0.0;     // m
    double gate_velocity = 0.0;  // m/s
    double frame_period = 0.0;   // s

    // State machine
    double split_speed = 0.0;  // static/dynamic boundary, m/s
    double stop_speed = 0.0;   // end-of-motion threshold, m/s
    std::uint32_t confirm_frames = 2;
    std::uint32_t stop_frames = 2;
    std::uint32_t hold_frames = 3;

    // Feature quantisation
    double slow_speed = 0.0;  // m/s
    double fast_speed = 0.0;  // m/s
    double roi_near = 0.0;    // m
    double roi_far = 0.0;     // m
};

TrackerConfig default_config(const FrameParams& params);

struct Detection {
    double range = 0.0;     // m
    double velocity = 0.0;  // m/s
    double intensity = 0.0; // peak power
    std::size_t extent = 0; // pixels in the region
    double range_bin = 0.0;    // centroid, ROI column units
    double doppler_bin = 0.0;  // centroid, Doppler row units
};

/// Noise threshold in power units for an image.
double noise_threshold(const rdproc::RangeDopplerImage& image, const TrackerConfig& cfg);

/// Peak regions of an image: threshold, split into basins separated by at
/// least the prominence valley, drop small basins, merge coincident centroids.
/// Sorted by range, then velocity.
std::vector<Detection> detect(const rdproc::RangeDopplerImage& image, const TrackerConfig& cfg);

enum class StateCode : std::int8_t {
    fresh,           // "new"
    uncertain,       // "0": unconfirmed, or first missing frame
    missing1,        // "-1"
    missing2,        // "-2"
    static_locked,   // "1"
    to_dynamic,      // "2"
    dynamic_locked,  // "3"
    to_static,       // "4"
    ended,           // "8"
    deleted,         // "del"
};

inline constexpr std::size_t kStateCodeCount = 10;

std::string_view code_label(StateCode code);
std::optional<StateCode> parse_code(std::string_view label);

struct TrackEvent {
    bool matched = false;
    double speed = 0.0;  // |v| of the matched detection

    static TrackEvent miss() { return {}; }
    static TrackEvent match(double velocity);
};

struct TrackState {
    StateCode code = StateCode::fresh;
    StateCode resume = StateCode::fresh;  // state to return to when a missing track is re-acquired
    std::uint32_t frames_missing = 0;
    std::uint32_t matches = 0;
    std::uint32_t stop_count = 0;
    std::uint32_t hold_count = 0;
    std::uint32_t age = 0;
    std::uint64_t track_id = 0;
    Detection last;
};

/// The transition function. Total over every (state, event) pair; `deleted`
/// is absorbing. Transitions:
///   new -match-> 0; 0 -match, confirm_frames reached-> 1 (static) or 3 (dynamic)
///   1 -dynamic-> 2 -dynamic-> 3, 2 -static-> 1
///   3 -slow-> 4 -slow, stop_frames reached-> 8; 4 -fast-> 3
///   8 -fast-> 3; 8 -slow, hold_frames reached-> 1
///   miss: new -> del; otherwise 0 -> -1 -> -2 -> del (deleted on the 4th
///   consecutive miss); a match while missing resumes the saved state.
TrackState advance(const TrackState& state, const TrackEvent& event, const TrackerConfig& cfg);

struct TrackSet {
    std::vector<TrackState> tracks;  // creation order
    std::uint64_t next_id = 0;
};

struct FeatureEntry {
    StateCode code = StateCode::fresh;
    std::int8_t velocity_class = 0;  // -2 fast-, -1 slow-, 0 static, 1 slow+, 2 fast+
    std::uint8_t range_class = 0;    // ROI thirds, 0 nearest

    auto operator<=>(const FeatureEntry&) const = default;
};

/// Per-frame feature vector over live tracks in creation order.
struct FeatureVector {
    std::vector<FeatureEntry> entries;

    std::size_t count() const noexcept { return entries.size(); }
    bool operator==(const FeatureVector&) const = default;
};

using FeatureSequence = std::vector<FeatureVector>;

int velocity_class(double velocity, const TrackerConfig& cfg);
int range_class(double range, const TrackerConfig& cfg);

struct StepResult {
    TrackSet tracks;
    FeatureVector features;
};

/// Associates one frame's detections with the tracks (gated nearest
/// neighbour, greedy by distance), advances every track and spawns tracks for
/// unmatched detections.
StepResult step(const TrackSet& tracks, std::span<const Detection> detections, const TrackerConfig& cfg);

/// Rolling detect + step over a frame stream.
class Tracker {
public:
    explicit Tracker(TrackerConfig cfg) : cfg_(cfg) {}

    FeatureVector push(const rdproc::RangeDopplerImage& image);
    FeatureVector push(std::span<const Detection> detections);
    const TrackSet& tracks() const noexcept { return tracks_; }
    const TrackerConfig& config() const noexcept { return cfg_; }

private:
    TrackerConfig cfg_;
    TrackSet tracks_;
};

FeatureSequence track_recording(const rdproc::RdCube& cube, const TrackerConfig& cfg);

// Feature sequence text format: optional '#' comment lines, then one line
// per frame: `m n_m (state,vclass,rclass) ...`, e.g. `3 2 (1,0,1) (3,-2,2)`.
std::string format_feature_vector(const FeatureVector& fv);
void write_features(std::ostream& os, const FeatureSequence& seq, std::string_view comment = {});
FeatureSequence read_features(std::istream& is);

}  // namespace hug::tracker
