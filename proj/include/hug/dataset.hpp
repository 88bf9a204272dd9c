#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hug/echosim.hpp"
#include "hug/params.hpp"

namespace hug::dataset {

/// What to synthesise: recordings per class per subject, noise and
/// kinematics settings, base seed.
struct DatasetConfig {
    std::string name = "default";
    FrameParams params = shipped_params();
    std::size_t subjects = 9;
    std::array<std::size_t, kClassCount> per_class{50, 50, 50, 50, 50, 50, 50};
    double snr_db = 10.0;
    bool noise = true;
    echosim::Kinematics kinematics = echosim::Kinematics::standard;
    echosim::MotionModel motion = echosim::MotionModel::true_motion;
    double scene_center = 0.07;
    std::uint64_t seed = 1;

    std::size_t total() const;
    bool operator==(const DatasetConfig&) const = default;
};

/// "default": 9 x 7 x 50 at 10 dB. "extended": 300 no-finger and 50 of
/// each gesture per subject (5400). "exaggerated": default counts,
/// noise-free, exaggerated kinematics. Throws DataError for other names.
DatasetConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct Seeds {
    std::uint64_t subject = 0;
    std::uint64_t script = 0;
    std::uint64_t noise = 0;

    bool operator==(const Seeds&) const = default;
};

struct ManifestEntry {
    std::string path;  // relative to the manifest's directory
    GestureClass label = GestureClass::no_finger;
    std::uint16_t subject = 0;  // 1-based
    Seeds seeds;
    double snr_db = 0.0;
    bool noise = true;
    std::size_t frames = 0;

    bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
    DatasetConfig config;
    std::vector<ManifestEntry> entries;  // sorted by path
};

/// The entries a config expands to, frames still 0, sorted by path.
std::vector<ManifestEntry> plan(const DatasetConfig& config);

/// Script of one planned entry.
echosim::GestureScript script_entry(const DatasetConfig& config, const ManifestEntry& entry);
/// Renders one planned entry in memory.
echosim::Recording render_entry(const DatasetConfig& config, const ManifestEntry& entry);

/// Renders every recording into `out_dir` and writes `out_dir/manifest.json`.
/// Refuses a nonempty directory unless `force`. Entries are rendered in
/// parallel; the manifest is assembled in plan order.
Manifest synth_dataset(const DatasetConfig& config, const std::filesystem::path& out_dir, bool force,
                       std::size_t threads);

std::string config_to_json(const DatasetConfig& config);
/// Accepts a bare config document or a full manifest (its "config" and
/// "params" sections). Missing keys take the defaults of `base`.
DatasetConfig config_from_json(const std::string& text, const DatasetConfig& base = {});

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest load_manifest(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hug::dataset
