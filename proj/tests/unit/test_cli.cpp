#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hug/commands.hpp"
#include "hug/dataset.hpp"
#include "hug/experiment.hpp"
#include "support.hpp"

using namespace hug;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) { return dataset::read_text_file(p); }

// Largest per-pixel difference of two 16-bit PGMs with identical headers.
int pgm_max_diff(const std::string& a, const std::string& b) {
    REQUIRE(a.size() == b.size());
    const std::size_t header = a.find("65535\n") + 6;
    REQUIRE(a.compare(0, header, b, 0, header) == 0);
    int worst = 0;
    for (std::size_t i = header; i + 1 < a.size(); i += 2) {
        const int va = (static_cast<unsigned char>(a[i]) << 8) | static_cast<unsigned char>(a[i + 1]);
        const int vb = (static_cast<unsigned char>(b[i]) << 8) | static_cast<unsigned char>(b[i + 1]);
        worst = std::max(worst, std::abs(va - vb));
    }
    return worst;
}

cli::SimulateOptions tiny_sim(const fs::path& out) {
    cli::SimulateOptions o;
    o.preset = "exaggerated";
    o.out = out;
    o.seed = 5;
    o.per_class = 1;
    o.subjects = 2;
    o.threads = 1;
    return o;
}

// One simulated and processed dataset shared by the cases below.
struct Workspace {
    test::TempDir dir;
    fs::path data = dir / "data";
    fs::path proc = dir / "proc";

    Workspace() {
        ::unsetenv("HUG_SEED");
        std::ostringstream out, err;
        REQUIRE(cli::cmd_simulate(tiny_sim(data), out, err) == cli::kExitOk);
        cli::ProcessOptions p;
        p.manifest = data / "manifest.json";
        p.out = proc;
        p.export_frames = 2;
        p.threads = 1;
        REQUIRE(cli::cmd_process(p, out, err) == cli::kExitOk);
    }
};

Workspace& ws() {
    static Workspace w;
    return w;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("seed resolution") {
    ::setenv("HUG_SEED", "42", 1);
    CHECK(cli::resolve_seed(std::nullopt) == std::optional<std::uint64_t>(42));
    CHECK(cli::resolve_seed(7) == std::optional<std::uint64_t>(7));
    ::setenv("HUG_SEED", "4x", 1);
    CHECK_FALSE(cli::resolve_seed(std::nullopt).has_value());
    ::unsetenv("HUG_SEED");
    CHECK_FALSE(cli::resolve_seed(std::nullopt).has_value());
}

TEST_CASE("simulate writes a manifest and refuses to overwrite") {
    auto& w = ws();
    const auto m = dataset::load_manifest(w.data / "manifest.json");
    CHECK(m.entries.size() == 14);
    CHECK(m.config.seed == 5);
    for (const auto& e : m.entries) CHECK(fs::exists(w.data / e.path));

    std::ostringstream out, err;
    CHECK(cli::cmd_simulate(tiny_sim(w.data), out, err) == cli::kExitData);
    CHECK(err.str().find("--force") != std::string::npos);

    test::TempDir other;
    auto o = tiny_sim(other / "d");
    o.preset = "nonsense";
    CHECK(cli::cmd_simulate(o, out, err) == cli::kExitData);
}

TEST_CASE("process output layout") {
    auto& w = ws();
    const auto m = dataset::load_manifest(w.data / "manifest.json");
    for (const auto& e : m.entries) {
        fs::path feat = w.proc / "features" / e.path;
        feat.replace_extension(".feat");
        CHECK(fs::exists(feat));
        fs::path cube = w.proc / "cubes" / e.path;
        cube.replace_extension(".hugc");
        CHECK(fs::exists(cube));
        const fs::path img = w.proc / "images" / fs::path(e.path).parent_path() /
                             (fs::path(e.path).stem().string() + "_1.pgm");
        CHECK(fs::exists(img));
    }
    CHECK(fs::exists(w.proc / "processed.json"));
}

TEST_CASE("a corrupt recording is reported and the rest are processed") {
    auto& w = ws();
    test::TempDir tmp;
    fs::copy(w.data, tmp / "data", fs::copy_options::recursive);
    const auto m = dataset::load_manifest(tmp / "data" / "manifest.json");
    const fs::path victim = tmp / "data" / m.entries[3].path;
    fs::resize_file(victim, fs::file_size(victim) - 100);

    cli::ProcessOptions p;
    p.manifest = tmp / "data" / "manifest.json";
    p.out = tmp / "proc";
    p.cubes = false;
    p.threads = 1;
    std::ostringstream out, err;
    CHECK(cli::cmd_process(p, out, err) == cli::kExitData);
    CHECK(err.str().find(m.entries[3].path) != std::string::npos);
    CHECK(err.str().find("offset") != std::string::npos);
    const std::string idx = slurp(tmp / "proc" / "processed.json");
    CHECK(idx.find("\"failed\": [\n    \"" + m.entries[3].path) != std::string::npos);
    CHECK(out.str().find("processed 13/14") != std::string::npos);
}

TEST_CASE("train and eval agree with the in-memory experiment") {
    auto& w = ws();
    test::TempDir models;
    std::ostringstream out, err;
    cli::TrainOptions t;
    t.processed = w.proc;
    t.out = models.path();
    t.threads = 1;
    REQUIRE(cli::cmd_train(t, out, err) == cli::kExitOk);
    CHECK(fs::exists(models / "fold_1.hugm"));
    CHECK(fs::exists(models / "fold_2.hugd"));
    CHECK(fs::exists(models / "models.json"));

    cli::EvalOptions e;
    e.processed = w.proc / "processed.json";
    e.models = models.path();
    e.timing = false;
    std::ostringstream text;
    REQUIRE(cli::cmd_eval(e, text, err) == cli::kExitOk);
    CHECK(text.str().find("Average accuracy") != std::string::npos);

    const auto cfg = dataset::load_manifest(w.data / "manifest.json").config;
    const auto set = experiment::features_in_memory(cfg, 1);
    const auto report = experiment::leave_one_subject_out(set, experiment::TrainConfig{}, 1);
    CHECK(slurp(models / "report.json") == experiment::report_json(report));

    // Retraining is byte-identical.
    test::TempDir again;
    t.out = again.path();
    REQUIRE(cli::cmd_train(t, out, err) == cli::kExitOk);
    for (const char* f : {"fold_1.hugm", "fold_1.hugd", "fold_2.hugm", "fold_2.hugd", "models.json"})
        CHECK(slurp(models / f) == slurp(again / f));
}

TEST_CASE("train rejects bad options") {
    auto& w = ws();
    test::TempDir models;
    std::ostringstream out, err;
    cli::TrainOptions t;
    t.processed = w.proc;
    t.out = models.path();
    t.priors = "whatever";
    CHECK(cli::cmd_train(t, out, err) == cli::kExitData);
    t.priors = "uniform";
    t.folds = "9";
    CHECK(cli::cmd_train(t, out, err) == cli::kExitData);
    t.folds = "loso";
    t.processed = models / "nowhere";
    CHECK(cli::cmd_train(t, out, err) == cli::kExitData);
}

TEST_CASE("stream command over an in-memory recording") {
    auto& w = ws();
    test::TempDir models;
    std::ostringstream out, err;
    cli::TrainOptions t;
    t.processed = w.proc;
    t.out = models.path();
    t.folds = "all";
    t.threads = 1;
    REQUIRE(cli::cmd_train(t, out, err) == cli::kExitOk);

    const auto m = dataset::load_manifest(w.data / "manifest.json");
    std::istringstream in(slurp(w.data / m.entries[0].path));
    cli::StreamOptions s;
    s.models = models.path();
    s.window = 10;
    s.threshold = 0.0;
    std::ostringstream events, log;
    REQUIRE(cli::cmd_stream(s, in, events, log) == cli::kExitOk);
    CHECK(log.str().find("stream: " + std::to_string(m.entries[0].frames) + " frames") != std::string::npos);
    std::size_t lines = 0;
    for (char c : events.str()) lines += c == '\n';
    CHECK(lines == m.entries[0].frames - 9);

    s.fold = "7";
    std::istringstream in2(slurp(w.data / m.entries[0].path));
    CHECK(cli::cmd_stream(s, in2, events, log) == cli::kExitData);
}

TEST_CASE("export-image from a recording and from a cube") {
    auto& w = ws();
    const auto m = dataset::load_manifest(w.data / "manifest.json");
    test::TempDir tmp;
    std::ostringstream out, err;
    cli::ExportOptions x;
    x.input = w.data / m.entries[0].path;
    x.frame = 1;
    x.out = tmp / "a.pgm";
    REQUIRE(cli::cmd_export_image(x, out, err) == cli::kExitOk);
    fs::path cube = w.proc / "cubes" / m.entries[0].path;
    cube.replace_extension(".hugc");
    x.input = cube;
    x.out = tmp / "b.pgm";
    REQUIRE(cli::cmd_export_image(x, out, err) == cli::kExitOk);
    const fs::path img = w.proc / "images" / fs::path(m.entries[0].path).parent_path() /
                         (fs::path(m.entries[0].path).stem().string() + "_1.pgm");
    CHECK(slurp(tmp / "a.pgm") == slurp(img));
    // Cubes store power as f32; the rounding may move a level by a count.
    CHECK(pgm_max_diff(slurp(tmp / "b.pgm"), slurp(img)) <= 2);
    CHECK(slurp(tmp / "a.pgm").rfind("P5\n", 0) == 0);

    x.frame = 100000;
    CHECK(cli::cmd_export_image(x, out, err) == cli::kExitData);
    CHECK(err.str().find("out of range") != std::string::npos);
}

}
