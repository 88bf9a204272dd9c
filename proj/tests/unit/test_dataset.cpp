#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "hug/dataset.hpp"
#include "hug/recording_io.hpp"
#include "support.hpp"

using namespace hug;
using namespace hug::dataset;
namespace fs = std::filesystem;

namespace {

DatasetConfig tiny() {
    DatasetConfig c = preset("default");
    c.name = "tiny";
    c.subjects = 2;
    c.per_class.fill(1);
    c.seed = 321;
    return c;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("preset sizes") {
    CHECK(preset("default").total() == 9 * 7 * 50);
    CHECK(plan(preset("default")).size() == 3150);
    CHECK(preset("extended").total() == 5400);
    const auto ex = preset("exaggerated");
    CHECK(ex.total() == 3150);
    CHECK_FALSE(ex.noise);
    CHECK(ex.kinematics == echosim::Kinematics::exaggerated);
    CHECK(preset_names().size() == 3);
    CHECK_THROWS_AS(preset("nope"), DataError);
}

TEST_CASE("plan is sorted, labelled and seeded distinctly") {
    const auto c = preset("default");
    const auto entries = plan(c);
    std::set<std::uint64_t> scripts, noises;
    std::array<std::size_t, kClassCount> per{};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0) CHECK(entries[i - 1].path < entries[i].path);
        const auto& e = entries[i];
        CHECK(e.subject >= 1);
        CHECK(e.subject <= 9);
        CHECK(e.path.find(std::string(class_name(e.label))) != std::string::npos);
        CHECK(e.frames == 0);
        scripts.insert(e.seeds.script);
        noises.insert(e.seeds.noise);
        ++per[class_index(e.label)];
    }
    CHECK(scripts.size() == entries.size());
    CHECK(noises.size() == entries.size());
    for (auto n : per) CHECK(n == 450);
    auto other = c;
    other.seed = 2;
    CHECK_FALSE(plan(other)[0].seeds == entries[0].seeds);
    CHECK(plan(c)[17] == entries[17]);
}

TEST_CASE("config JSON round trip") {
    auto c = tiny();
    c.snr_db = 7.5;
    c.motion = echosim::MotionModel::stop_and_hop;
    c.params.roi_start_bin = 50;
    c.per_class[3] = 4;
    const std::string text = config_to_json(c);
    CHECK(config_from_json(text) == c);
    CHECK(config_from_json(R"({"preset": "exaggerated"})") == preset("exaggerated"));
    const auto partial = config_from_json(R"({"subjects": 3})", c);
    CHECK(partial.subjects == 3);
    CHECK(partial.snr_db == 7.5);
    CHECK_THROWS_AS(config_from_json("{not json"), DataError);
    CHECK_THROWS_AS(config_from_json(R"({"kinematics": "wild"})"), DataError);
}

TEST_CASE("synthesis writes recordings and a manifest") {
    test::TempDir dir;
    const auto c = tiny();
    const auto m = synth_dataset(c, dir.path(), false, 2);
    CHECK(m.entries.size() == 14);
    CHECK(fs::exists(dir / "manifest.json"));
    const auto back = load_manifest(dir / "manifest.json");
    CHECK(back.config == c);
    CHECK(back.entries == m.entries);
    for (const auto& e : m.entries) {
        const auto rec = io::load_recording(dir.path() / e.path);
        CHECK(rec.frames.size() == e.frames);
        CHECK(rec.label == e.label);
        CHECK(rec.subject == e.subject);
        auto mem = render_entry(c, e);
        io::quantize_to_f32(mem);
        CHECK(mem.frames == rec.frames);
    }
    CHECK(manifest_to_json(back) == read_text_file(dir / "manifest.json"));

    // A second run must not overwrite silently.
    CHECK_THROWS_AS(synth_dataset(c, dir.path(), false, 1), DataError);
    test::TempDir again;
    synth_dataset(c, again.path(), false, 1);
    CHECK(read_text_file(again / "manifest.json") == read_text_file(dir / "manifest.json"));
    const auto first = m.entries.front().path;
    CHECK(read_text_file(again.path() / first) == read_text_file(dir.path() / first));
    CHECK_NOTHROW(synth_dataset(c, dir.path(), true, 1));
}

TEST_CASE("manifest parsing errors") {
    CHECK_THROWS_AS(manifest_from_json("[]"), DataError);
    CHECK_THROWS_AS(manifest_from_json(R"({"format": "other"})"), DataError);
    CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.json"), DataError);
}

}
