#include "hug/recording_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <vector>

namespace hug::io {

void write_recording_header(std::ostream& os, const RecordingHeader& header) {
    BinaryWriter w(os);
    w.put_bytes(kRecordingMagic, 4);
    w.put<std::uint16_t>(kRecordingVersion);
    write_params_block(w, header.params);
    w.put<std::uint32_t>(header.frame_count);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(header.label));
    w.put<std::uint16_t>(header.subject);
}

RecordingHeader read_recording_header(BinaryReader& r) {
    char magic[4];
    const auto start = r.offset();
    r.get_bytes(magic, 4, "magic");
    if (std::memcmp(magic, kRecordingMagic, 4) != 0) throw FormatError("bad magic, expected \"HUGR\"", start);
    const auto version_at = r.offset();
    const auto version = r.get<std::uint16_t>("version");
    if (version != kRecordingVersion)
        throw FormatError("unsupported recording version " + std::to_string(version), version_at);
    RecordingHeader h;
    h.params = read_params_block(r);
    h.frame_count = r.get<std::uint32_t>("frame count");
    const auto label_at = r.offset();
    const auto label = r.get<std::uint8_t>("label");
    if (label >= kClassCount) throw FormatError("label out of range: " + std::to_string(label), label_at);
    h.label = static_cast<GestureClass>(label);
    h.subject = r.get<std::uint16_t>("subject");
    return h;
}

std::size_t frame_bytes(const FrameParams& params) {
    return std::size_t{params.pulses_per_frame} * params.pri_samples() * 2 * sizeof(float);
}

void write_frame(std::ostream& os, const CMatrix& frame) {
    std::vector<float> buf(frame.size() * 2);
    for (std::size_t i = 0; i < frame.size(); ++i) {
        buf[2 * i] = static_cast<float>(frame.data()[i].real());
        buf[2 * i + 1] = static_cast<float>(frame.data()[i].imag());
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

bool read_frame(BinaryReader& r, const FrameParams& params, CMatrix& out) {
    const std::size_t rows = params.pulses_per_frame;
    const std::size_t cols = params.pri_samples();
    std::vector<float> buf(rows * cols * 2);
    if (!r.try_get_bytes(buf.data(), buf.size() * sizeof(float), "frame")) return false;
    out = CMatrix(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) out.data()[i] = cplx(buf[2 * i], buf[2 * i + 1]);
    return true;
}

void write_recording(std::ostream& os, const echosim::Recording& rec) {
    RecordingHeader h{rec.params, static_cast<std::uint32_t>(rec.frames.size()), rec.label, rec.subject};
    write_recording_header(os, h);
    const std::size_t rows = rec.params.pulses_per_frame;
    const std::size_t cols = rec.params.pri_samples();
    for (const auto& f : rec.frames) {
        if (f.rows() != rows || f.cols() != cols) throw DataError("frame shape does not match params");
        write_frame(os, f);
    }
}

echosim::Recording read_recording(std::istream& is) {
    BinaryReader r(is);
    const RecordingHeader h = read_recording_header(r);
    if (h.frame_count == kUnboundedFrames) throw FormatError("recording files need an explicit frame count", 0);
    echosim::Recording rec;
    rec.params = h.params;
    rec.label = h.label;
    rec.subject = h.subject;
    // The count is untrusted; grow as frames actually arrive.
    rec.frames.reserve(std::min<std::uint32_t>(h.frame_count, echosim::kMaxGestureFrames));
    for (std::uint32_t f = 0; f < h.frame_count; ++f) {
        if (!read_frame(r, h.params, rec.frames.emplace_back()))
            throw FormatError("recording ends after " + std::to_string(f) + " of " + std::to_string(h.frame_count) +
                                  " frames",
                              r.offset());
    }
    return rec;
}

void save_recording(const std::filesystem::path& path, const echosim::Recording& rec) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    write_recording(os, rec);
    if (!os) throw DataError("write failed: " + path.string());
}

echosim::Recording load_recording(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    try {
        return read_recording(is);
    } catch (const FormatError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void quantize_to_f32(echosim::Recording& rec) {
    for (auto& f : rec.frames) {
        for (auto& v : f.data()) v = cplx(static_cast<float>(v.real()), static_cast<float>(v.imag()));
    }
}

}  // namespace hug::io
