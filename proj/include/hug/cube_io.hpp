#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "hug/rdproc.hpp"

namespace hug::io {

// "HUGC" cube format, little-endian:
//   magic "HUGC" | version u16 | params block | frame count u32 |
//   frames of N x range_bins f32 power, Doppler-major.
// Labels travel in the processed manifest, not in the cube.
inline constexpr char kCubeMagic[4] = {'H', 'U', 'G', 'C'};
inline constexpr std::uint16_t kCubeVersion = 1;

void write_cube(std::ostream& os, const rdproc::RdCube& cube);
rdproc::RdCube read_cube(std::istream& is);
void save_cube(const std::filesystem::path& path, const rdproc::RdCube& cube);
rdproc::RdCube load_cube(const std::filesystem::path& path);

// 16-bit binary PGM of one image, width = range bins, height = Doppler bins,
// highest velocity on the top row. Pixel = 65535 * clamp((10 log10(P/Pmax)
// + kPgmDynamicRangeDb) / kPgmDynamicRangeDb, 0, 1).
inline constexpr double kPgmDynamicRangeDb = 60.0;
void write_pgm(std::ostream& os, const rdproc::RangeDopplerImage& image);
void save_pgm(const std::filesystem::path& path, const rdproc::RangeDopplerImage& image);

}  // namespace hug::io
