#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "hug/binary_io.hpp"
#include "hug/echosim.hpp"

namespace hug::io {

// "HUGR" recording / frame-stream format, little-endian:
//   magic "HUGR" | version u16 | params block | frame count u32 | label u8 |
//   subject u16 | frames
// Each frame is M x floor(T*Fs) complex samples stored as interleaved f32
// (re, im), pulse-major. A stream may announce kUnboundedFrames and then
// carries frames until end of input.
inline constexpr char kRecordingMagic[4] = {'H', 'U', 'G', 'R'};
inline constexpr std::uint16_t kRecordingVersion = 1;
inline constexpr std::uint32_t kUnboundedFrames = 0xFFFFFFFFu;
inline constexpr std::size_t kRecordingHeaderBytes = 4 + 2 + kParamsBlockBytes + 4 + 1 + 2;

struct RecordingHeader {
    FrameParams params;
    std::uint32_t frame_count = 0;
    GestureClass label = GestureClass::no_finger;
    std::uint16_t subject = 0;
};

void write_recording_header(std::ostream& os, const RecordingHeader& header);
RecordingHeader read_recording_header(BinaryReader& reader);

std::size_t frame_bytes(const FrameParams& params);
void write_frame(std::ostream& os, const CMatrix& frame);
/// Reads one frame; returns false on a clean end of input before the frame.
bool read_frame(BinaryReader& reader, const FrameParams& params, CMatrix& out);

void write_recording(std::ostream& os, const echosim::Recording& rec);
echosim::Recording read_recording(std::istream& is);

void save_recording(const std::filesystem::path& path, const echosim::Recording& rec);
echosim::Recording load_recording(const std::filesystem::path& path);

/// Rounds every sample through f32, matching what a save/load cycle yields.
void quantize_to_f32(echosim::Recording& rec);

}  // namespace hug::io
