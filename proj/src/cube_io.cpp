#include "hug/cube_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hug/binary_io.hpp"

namespace hug::io {

void write_cube(std::ostream& os, const rdproc::RdCube& cube) {
    BinaryWriter w(os);
    w.put_bytes(kCubeMagic, 4);
    w.put<std::uint16_t>(kCubeVersion);
    write_params_block(w, cube.params);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(cube.images.size()));
    const std::size_t pixels = std::size_t{cube.params.fft_points} * cube.params.range_bins;
    std::vector<float> buf(pixels);
    for (const auto& img : cube.images) {
        if (img.power.size() != pixels) throw DataError("image shape does not match cube params");
        std::transform(img.power.begin(), img.power.end(), buf.begin(), [](double v) { return static_cast<float>(v); });
        w.put_bytes(buf.data(), buf.size() * sizeof(float));
    }
}

rdproc::RdCube read_cube(std::istream& is) {
    BinaryReader r(is);
    char magic[4];
    r.get_bytes(magic, 4, "magic");
    if (std::memcmp(magic, kCubeMagic, 4) != 0) throw FormatError("bad magic, expected \"HUGC\"", 0);
    const auto version = r.get<std::uint16_t>("version");
    if (version != kCubeVersion) throw FormatError("unsupported cube version " + std::to_string(version), 4);
    rdproc::RdCube cube;
    cube.params = read_params_block(r);
    const auto frames = r.get<std::uint32_t>("frame count");
    const std::size_t pixels = std::size_t{cube.params.fft_points} * cube.params.range_bins;
    const auto vel = rdproc::velocity_axis(cube.params);
    const auto rng = rdproc::range_axis(cube.params);
    std::vector<float> buf(pixels);
    cube.images.reserve(std::min<std::uint32_t>(frames, 1024));
    for (std::uint32_t f = 0; f < frames; ++f) {
        r.get_bytes(buf.data(), buf.size() * sizeof(float), "cube frame");
        rdproc::RangeDopplerImage img;
        img.doppler_bins = cube.params.fft_points;
        img.range_bins = cube.params.range_bins;
        img.power.assign(buf.begin(), buf.end());
        img.velocity_axis = vel;
        img.range_axis = rng;
        img.frame_index = f;
        cube.images.push_back(std::move(img));
    }
    return cube;
}

void save_cube(const std::filesystem::path& path, const rdproc::RdCube& cube) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    write_cube(os, cube);
    if (!os) throw DataError("write failed: " + path.string());
}

rdproc::RdCube load_cube(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    try {
        return read_cube(is);
    } catch (const FormatError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_pgm(std::ostream& os, const rdproc::RangeDopplerImage& image) {
    if (image.power.empty() || image.power.size() != image.range_bins * image.doppler_bins)
        throw DataError("cannot export an empty or misshapen image");
    os << "P5\n" << image.range_bins << ' ' << image.doppler_bins << "\n65535\n";
    const double peak = *std::max_element(image.power.begin(), image.power.end());
    std::vector<unsigned char> row(image.range_bins * 2);
    for (std::size_t i = 0; i < image.doppler_bins; ++i) {
        const std::size_t d = image.doppler_bins - 1 - i;
        for (std::size_t j = 0; j < image.range_bins; ++j) {
            double level = 0.0;
            const double p = image.at(d, j);
            if (peak > 0.0 && p > 0.0) {
                level = (10.0 * std::log10(p / peak) + kPgmDynamicRangeDb) / kPgmDynamicRangeDb;
            }
            const auto v = static_cast<std::uint16_t>(std::lround(std::clamp(level, 0.0, 1.0) * 65535.0));
            row[2 * j] = static_cast<unsigned char>(v >> 8);
            row[2 * j + 1] = static_cast<unsigned char>(v & 0xFF);
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

void save_pgm(const std::filesystem::path& path, const rdproc::RangeDopplerImage& image) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot open " + path.string() + " for writing");
    write_pgm(os, image);
}

}  // namespace hug::io
