#pragma once

// nlohmann::json conversions shared by the manifest writers. Internal.

#include <json.hpp>

#include "hug/common.hpp"
#include "hug/params.hpp"

namespace hug::detail {

using json = nlohmann::json;

inline json params_json(const FrameParams& p) {
    return json{{"sound_speed", p.sound_speed},       {"carrier_freq", p.carrier_freq},
                {"bandwidth", p.bandwidth},           {"pri", p.pri},
                {"pulses_per_frame", p.pulses_per_frame}, {"pulse_width", p.pulse_width},
                {"fast_time_rate", p.fast_time_rate}, {"fft_points", p.fft_points},
                {"range_bins", p.range_bins},         {"roi_start_bin", p.roi_start_bin}};
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("bad value for '") + key + "': " + e.what());
    }
}

inline FrameParams params_from(const json& j, FrameParams p) {
    if (!j.is_object()) throw DataError("params must be a JSON object");
    read_opt(j, "sound_speed", p.sound_speed);
    read_opt(j, "carrier_freq", p.carrier_freq);
    read_opt(j, "bandwidth", p.bandwidth);
    read_opt(j, "pri", p.pri);
    read_opt(j, "pulses_per_frame", p.pulses_per_frame);
    read_opt(j, "pulse_width", p.pulse_width);
    read_opt(j, "fast_time_rate", p.fast_time_rate);
    read_opt(j, "fft_points", p.fft_points);
    read_opt(j, "range_bins", p.range_bins);
    read_opt(j, "roi_start_bin", p.roi_start_bin);
    return p;
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(what + ": " + e.what());
    }
}

}  // namespace hug::detail
