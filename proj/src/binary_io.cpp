#include "hug/binary_io.hpp"

namespace hug::io {

void BinaryReader::get_bytes(void* out, std::size_t n, const char* what) {
    if (!try_get_bytes(out, n, what)) throw FormatError(std::string("unexpected end of data reading ") + what, offset_);
}

bool BinaryReader::try_get_bytes(void* out, std::size_t n, const char* what) {
    is_.read(static_cast<char*>(out), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(is_.gcount());
    if (got == n) {
        offset_ += n;
        return true;
    }
    if (got == 0 && is_.eof()) return false;
    throw FormatError(std::string("truncated ") + what + ": got " + std::to_string(got) + " of " + std::to_string(n) +
                          " bytes",
                      offset_ + got);
}

void write_params_block(BinaryWriter& w, const FrameParams& p) {
    w.put<double>(p.sound_speed);
    w.put<double>(p.carrier_freq);
    w.put<double>(p.bandwidth);
    w.put<double>(p.pri);
    w.put<double>(p.pulse_width);
    w.put<double>(p.fast_time_rate);
    w.put<double>(0.0);
    w.put<double>(0.0);
    w.put<std::uint32_t>(p.pulses_per_frame);
    w.put<std::uint32_t>(p.fft_points);
    w.put<std::uint32_t>(p.range_bins);
    w.put<std::uint32_t>(p.roi_start_bin);
}

FrameParams read_params_block(BinaryReader& r) {
    const auto start = r.offset();
    FrameParams p;
    p.sound_speed = r.get<double>("params.sound_speed");
    p.carrier_freq = r.get<double>("params.carrier_freq");
    p.bandwidth = r.get<double>("params.bandwidth");
    p.pri = r.get<double>("params.pri");
    p.pulse_width = r.get<double>("params.pulse_width");
    p.fast_time_rate = r.get<double>("params.fast_time_rate");
    (void)r.get<double>("params.reserved");
    (void)r.get<double>("params.reserved");
    p.pulses_per_frame = r.get<std::uint32_t>("params.pulses_per_frame");
    p.fft_points = r.get<std::uint32_t>("params.fft_points");
    p.range_bins = r.get<std::uint32_t>("params.range_bins");
    p.roi_start_bin = r.get<std::uint32_t>("params.roi_start_bin");
    auto errors = check_params(p);
    if (!errors.empty()) throw FormatError("invalid params block: " + errors.front(), start);
    return p;
}

}  // namespace hug::io
