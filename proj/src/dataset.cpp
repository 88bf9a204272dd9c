#include "hug/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hug/parallel.hpp"
#include "hug/recording_io.hpp"
#include "json_fields.hpp"

namespace hug::dataset {

namespace fs = std::filesystem;
using detail::json;

std::size_t DatasetConfig::total() const {
    return subjects * std::accumulate(per_class.begin(), per_class.end(), std::size_t{0});
}

std::vector<std::string> preset_names() { return {"default", "extended", "exaggerated"}; }

DatasetConfig preset(const std::string& name) {
    DatasetConfig c;
    c.name = name;
    if (name == "default") return c;
    if (name == "extended") {
        c.per_class[class_index(GestureClass::no_finger)] = 300;
        return c;
    }
    if (name == "exaggerated") {
        c.noise = false;
        c.kinematics = echosim::Kinematics::exaggerated;
        return c;
    }
    throw DataError("unknown preset '" + name + "'");
}

std::vector<ManifestEntry> plan(const DatasetConfig& config) {
    validate(config.params);
    if (config.subjects == 0 || config.subjects > 999) throw DataError("subject count must be in 1..999");
    std::vector<ManifestEntry> out;
    out.reserve(config.total());
    for (std::size_t s = 1; s <= config.subjects; ++s) {
        const std::uint64_t subject_seed = mix_seed(config.seed, 0x5000 + s);
        for (std::size_t c = 0; c < kClassCount; ++c) {
            for (std::size_t i = 0; i < config.per_class[c]; ++i) {
                ManifestEntry e;
                char buf[96];
                std::snprintf(buf, sizeof buf, "s%03zu/%s_%04zu.hugr", s,
                              std::string(class_name(class_from_index(c))).c_str(), i);
                e.path = buf;
                e.label = class_from_index(c);
                e.subject = static_cast<std::uint16_t>(s);
                e.seeds.subject = subject_seed;
                e.seeds.script = mix_seed(subject_seed, (c << 20) | i);
                e.seeds.noise = mix_seed(e.seeds.script, 0x9E);
                e.snr_db = config.snr_db;
                e.noise = config.noise;
                out.push_back(std::move(e));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    return out;
}

echosim::GestureScript script_entry(const DatasetConfig& config, const ManifestEntry& entry) {
    echosim::ScriptOptions so;
    so.kinematics = config.kinematics;
    so.scene_center = config.scene_center;
    return echosim::script_gesture(entry.label, entry.seeds.subject, entry.seeds.script, config.params, so);
}

echosim::Recording render_entry(const DatasetConfig& config, const ManifestEntry& entry) {
    echosim::RenderOptions ro;
    ro.snr_db = entry.snr_db;
    ro.noise = entry.noise;
    ro.motion = config.motion;
    ro.noise_seed = entry.seeds.noise;
    auto rec = echosim::render_echo(script_entry(config, entry), config.params, ro);
    rec.subject = entry.subject;
    return rec;
}

Manifest synth_dataset(const DatasetConfig& config, const fs::path& out_dir, bool force, std::size_t threads) {
    Manifest m;
    m.config = config;
    m.entries = plan(config);
    std::error_code ec;
    if (fs::exists(out_dir) && !fs::is_empty(out_dir) && !force) {
        throw DataError("output directory " + out_dir.string() + " is not empty (use --force)");
    }
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    parallel_for(m.entries.size(), threads, [&](std::size_t i) {
        auto& e = m.entries[i];
        const fs::path path = out_dir / e.path;
        try {
            fs::create_directories(path.parent_path());
            const auto rec = render_entry(config, e);
            e.frames = rec.frames.size();
            io::save_recording(path, rec);
        } catch (const std::exception& ex) {
            throw DataError(path.string() + ": " + ex.what());
        }
    });
    save_manifest(out_dir / "manifest.json", m);
    return m;
}

namespace {

const char* kinematics_name(echosim::Kinematics k) {
    return k == echosim::Kinematics::exaggerated ? "exaggerated" : "standard";
}

const char* motion_name(echosim::MotionModel m) {
    return m == echosim::MotionModel::stop_and_hop ? "stop-and-hop" : "true-motion";
}

json config_json(const DatasetConfig& c) {
    json per = json::object();
    for (std::size_t i = 0; i < kClassCount; ++i) per[std::string(class_name(class_from_index(i)))] = c.per_class[i];
    return json{{"name", c.name},
                {"subjects", c.subjects},
                {"per_class", per},
                {"snr_db", c.snr_db},
                {"noise", c.noise},
                {"kinematics", kinematics_name(c.kinematics)},
                {"motion", motion_name(c.motion)},
                {"scene_center", c.scene_center},
                {"seed", c.seed}};
}

DatasetConfig config_from(const json& doc, DatasetConfig c) {
    if (!doc.is_object()) throw DataError("config must be a JSON object");
    if (doc.contains("preset")) c = preset(doc.at("preset").get<std::string>());
    const json& j = doc.contains("config") ? doc.at("config") : doc;
    detail::read_opt(j, "name", c.name);
    detail::read_opt(j, "subjects", c.subjects);
    detail::read_opt(j, "snr_db", c.snr_db);
    detail::read_opt(j, "noise", c.noise);
    detail::read_opt(j, "scene_center", c.scene_center);
    detail::read_opt(j, "seed", c.seed);
    if (j.contains("per_class")) {
        const auto& per = j.at("per_class");
        if (per.is_number_unsigned()) {
            c.per_class.fill(per.get<std::size_t>());
        } else if (per.is_object()) {
            for (auto it = per.begin(); it != per.end(); ++it) {
                auto gc = parse_class(it.key());
                if (!gc) throw DataError("unknown class '" + it.key() + "' in per_class");
                c.per_class[class_index(*gc)] = it.value().get<std::size_t>();
            }
        } else {
            throw DataError("per_class must be a count or an object");
        }
    }
    if (j.contains("kinematics")) {
        const auto k = j.at("kinematics").get<std::string>();
        if (k == "standard") c.kinematics = echosim::Kinematics::standard;
        else if (k == "exaggerated") c.kinematics = echosim::Kinematics::exaggerated;
        else throw DataError("unknown kinematics '" + k + "'");
    }
    if (j.contains("motion")) {
        const auto k = j.at("motion").get<std::string>();
        if (k == "true-motion") c.motion = echosim::MotionModel::true_motion;
        else if (k == "stop-and-hop") c.motion = echosim::MotionModel::stop_and_hop;
        else throw DataError("unknown motion model '" + k + "'");
    }
    if (doc.contains("params")) c.params = detail::params_from(doc.at("params"), c.params);
    validate(c.params);
    return c;
}

}  // namespace

std::string config_to_json(const DatasetConfig& config) {
    json doc{{"config", config_json(config)}, {"params", detail::params_json(config.params)}};
    return doc.dump(2) + "\n";
}

DatasetConfig config_from_json(const std::string& text, const DatasetConfig& base) {
    try {
        return config_from(detail::parse_json(text, "config"), base);
    } catch (const json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    }
}

std::string manifest_to_json(const Manifest& m) {
    json recs = json::array();
    for (const auto& e : m.entries) {
        recs.push_back(json{{"path", e.path},
                            {"label", class_name(e.label)},
                            {"subject", e.subject},
                            {"seeds", {{"subject", e.seeds.subject}, {"script", e.seeds.script}, {"noise", e.seeds.noise}}},
                            {"snr_db", e.snr_db},
                            {"noise", e.noise},
                            {"frames", e.frames}});
    }
    json doc{{"format", "hug-manifest"},
             {"version", 1},
             {"config", config_json(m.config)},
             {"params", detail::params_json(m.config.params)},
             {"recordings", recs}};
    return doc.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
    const json doc = detail::parse_json(text, "manifest");
    try {
        if (!doc.is_object() || doc.value("format", "") != "hug-manifest") throw DataError("not a dataset manifest");
        Manifest m;
        m.config = config_from(doc, DatasetConfig{});
        for (const auto& r : doc.at("recordings")) {
            ManifestEntry e;
            e.path = r.at("path").get<std::string>();
            auto gc = parse_class(r.at("label").get<std::string>());
            if (!gc) throw DataError("unknown label in manifest entry " + e.path);
            e.label = *gc;
            e.subject = r.at("subject").get<std::uint16_t>();
            e.seeds.subject = r.at("seeds").at("subject").get<std::uint64_t>();
            e.seeds.script = r.at("seeds").at("script").get<std::uint64_t>();
            e.seeds.noise = r.at("seeds").at("noise").get<std::uint64_t>();
            e.snr_db = r.at("snr_db").get<double>();
            e.noise = r.value("noise", true);
            e.frames = r.value("frames", std::size_t{0});
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("manifest: ") + e.what());
    }
}

std::string read_text_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + path.string());
    os << text;
    os.close();
    if (!os) throw DataError("failed writing " + path.string());
}

void save_manifest(const fs::path& path, const Manifest& manifest) { write_text_file(path, manifest_to_json(manifest)); }

Manifest load_manifest(const fs::path& path) {
    try {
        return manifest_from_json(read_text_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace hug::dataset
