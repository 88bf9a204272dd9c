#pragma once

// Library form of the `hug` subcommands. Each returns the process exit code
// (0 success, 1 usage, 2 data error) and reports on the given streams.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hug::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// --seed if given, else HUG_SEED if set and numeric, else nullopt.
std::optional<std::uint64_t> resolve_seed(std::optional<std::uint64_t> flag);

struct SimulateOptions {
    std::string config;              // JSON config/manifest path; empty = preset only
    std::string preset = "default";
    std::filesystem::path out;
    bool force = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> snr_db;
    std::optional<std::size_t> per_class;  // overrides every class count
    std::optional<std::size_t> subjects;
    std::size_t threads = 0;  // 0 = all cores
};
int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err);

struct ProcessOptions {
    std::filesystem::path manifest;
    std::filesystem::path out;
    bool cubes = true;
    std::size_t export_frames = 0;
    bool force = false;
    std::size_t threads = 0;
};
/// Writes features/<rec>.feat, cubes/<rec>.hugc, images/<rec>_<k>.pgm and
/// processed.json. A bad recording is reported and skipped; the exit code is
/// then 2.
int cmd_process(const ProcessOptions& o, std::ostream& out, std::ostream& err);

struct TrainOptions {
    std::filesystem::path processed;  // processed.json or its directory
    std::filesystem::path out;
    std::string folds = "loso";  // "loso", "all", or comma-separated subjects
    std::size_t states = 6;
    std::size_t iterations = 10;
    double smoothing = 1e-3;
    std::optional<std::uint64_t> seed;
    std::string priors = "uniform";  // or "no-finger"
    bool uniform_init = false;
    std::size_t threads = 0;
};
/// Per fold: fold_<name>.hugm (bank) and fold_<name>.hugd (dictionary), plus
/// models.json indexing them.
int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err);

struct EvalOptions {
    std::filesystem::path processed;
    std::filesystem::path models;  // directory with models.json
    std::filesystem::path report;  // default: <models>/report.json
    bool timing = true;
};
int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err);

struct StreamOptions {
    std::filesystem::path models;  // directory with models.json
    std::string fold = "all";
    std::optional<std::uint16_t> listen;  // TCP port; stdin otherwise
    std::size_t window = 30;
    double threshold = 0.8;
    std::size_t queue = 16;
};
int cmd_stream(const StreamOptions& o, std::istream& in, std::ostream& out, std::ostream& err);

struct ExportOptions {
    std::filesystem::path input;  // .hugr recording or .hugc cube
    std::size_t frame = 0;
    std::filesystem::path out;    // .pgm
};
int cmd_export_image(const ExportOptions& o, std::ostream& out, std::ostream& err);

}  // namespace hug::cli
