#include "hug/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "hug/bank_io.hpp"
#include "hug/cube_io.hpp"
#include "hug/dataset.hpp"
#include "hug/experiment.hpp"
#include "hug/parallel.hpp"
#include "hug/recording_io.hpp"
#include "hug/stream.hpp"
#include "json_fields.hpp"

namespace hug::cli {

namespace fs = std::filesystem;
using detail::json;

namespace {

std::size_t threads_or_default(std::size_t t) { return t == 0 ? default_threads() : t; }

fs::path with_ext(const std::string& rel, const char* ext) {
    fs::path p(rel);
    p.replace_extension(ext);
    return p;
}

fs::path processed_json_path(const fs::path& p) { return fs::is_directory(p) ? p / "processed.json" : p; }

struct ProcessedEntry {
    std::string recording;
    std::string features;
    GestureClass label;
    std::uint16_t subject;
};

std::vector<ProcessedEntry> load_processed(const fs::path& path, fs::path& base) {
    const fs::path file = processed_json_path(path);
    base = file.parent_path();
    const json doc = detail::parse_json(dataset::read_text_file(file), file.string());
    try {
        if (doc.value("format", "") != "hug-processed") throw DataError(file.string() + ": not a processed index");
        std::vector<ProcessedEntry> out;
        for (const auto& r : doc.at("recordings")) {
            auto gc = parse_class(r.at("label").get<std::string>());
            if (!gc) throw DataError(file.string() + ": unknown label");
            out.push_back({r.at("path").get<std::string>(), r.at("features").get<std::string>(), *gc,
                           r.at("subject").get<std::uint16_t>()});
        }
        return out;
    } catch (const json::exception& e) {
        throw DataError(file.string() + ": " + e.what());
    }
}

experiment::FeatureSet load_feature_set(const fs::path& processed) {
    fs::path base;
    const auto entries = load_processed(processed, base);
    experiment::FeatureSet set;
    set.reserve(entries.size());
    for (const auto& e : entries) {
        const fs::path p = base / e.features;
        std::ifstream is(p);
        if (!is) throw DataError("missing features file " + p.string() + " (run process first)");
        try {
            set.push_back({e.recording, e.label, e.subject, tracker::read_features(is)});
        } catch (const DataError& ex) {
            throw DataError(p.string() + ": " + ex.what());
        }
    }
    std::sort(set.begin(), set.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    return set;
}

struct FoldFiles {
    std::string fold;
    std::string bank;
    std::string dictionary;
    std::optional<std::uint16_t> held_out;
};

std::vector<FoldFiles> load_models_index(const fs::path& dir) {
    const fs::path file = dir / "models.json";
    const json doc = detail::parse_json(dataset::read_text_file(file), file.string());
    try {
        std::vector<FoldFiles> out;
        for (const auto& f : doc.at("folds")) {
            FoldFiles ff;
            ff.fold = f.at("fold").get<std::string>();
            ff.bank = f.at("bank").get<std::string>();
            ff.dictionary = f.at("dictionary").get<std::string>();
            if (!f.at("held_out_subject").is_null()) ff.held_out = f.at("held_out_subject").get<std::uint16_t>();
            out.push_back(ff);
        }
        return out;
    } catch (const json::exception& e) {
        throw DataError(file.string() + ": " + e.what());
    }
}

symbolizer::SymbolDictionary load_dictionary(const fs::path& p) {
    std::ifstream is(p);
    if (!is) throw DataError("cannot open " + p.string());
    try {
        return symbolizer::SymbolDictionary::read(is);
    } catch (const DataError& e) {
        throw DataError(p.string() + ": " + e.what());
    }
}

void ensure_output_dir(const fs::path& out, bool force) {
    if (fs::exists(out) && !fs::is_empty(out) && !force)
        throw DataError("output directory " + out.string() + " is not empty (use --force)");
    fs::create_directories(out);
}

}  // namespace

std::optional<std::uint64_t> resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return flag;
    const char* env = std::getenv("HUG_SEED");
    if (!env || !*env) return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    try {
        dataset::DatasetConfig cfg = dataset::preset(o.preset);
        if (!o.config.empty()) cfg = dataset::config_from_json(dataset::read_text_file(o.config), cfg);
        if (auto s = resolve_seed(o.seed)) cfg.seed = *s;
        if (o.snr_db) cfg.snr_db = *o.snr_db;
        if (o.per_class) cfg.per_class.fill(*o.per_class);
        if (o.subjects) cfg.subjects = *o.subjects;
        const auto t0 = std::chrono::steady_clock::now();
        const auto m = dataset::synth_dataset(cfg, o.out, o.force, threads_or_default(o.threads));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::size_t frames = 0;
        for (const auto& e : m.entries) frames += e.frames;
        out << "wrote " << m.entries.size() << " recordings (" << frames << " frames) to " << o.out.string() << " in "
            << static_cast<int>(secs + 0.5) << " s\n";
        return kExitOk;
    } catch (const InvalidParams& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

int cmd_process(const ProcessOptions& o, std::ostream& out, std::ostream& err) {
    dataset::Manifest manifest;
    fs::path base;
    try {
        manifest = dataset::load_manifest(o.manifest);
        base = o.manifest.parent_path();
        ensure_output_dir(o.out, o.force);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }

    const auto& params = manifest.config.params;
    const rdproc::Processor processor(params);
    const auto tcfg = tracker::default_config(params);
    const std::size_t n = manifest.entries.size();
    std::vector<std::string> errors(n);
    std::vector<std::size_t> frames(n, 0);
    std::mutex err_mu;

    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(n, threads_or_default(o.threads), [&](std::size_t i) {
        const auto& e = manifest.entries[i];
        const fs::path src = base / e.path;
        try {
            const auto rec = io::load_recording(src);
            if (!(rec.params == params)) throw DataError("params differ from the manifest");
            rdproc::RdCube cube = rdproc::process_recording(rec, processor);
            cube.subject = e.subject;
            cube.label = e.label;
            tracker::Tracker tr(tcfg);
            tracker::FeatureSequence seq;
            for (const auto& img : cube.images) seq.push_back(tr.push(img));
            frames[i] = seq.size();

            const fs::path feat = o.out / "features" / with_ext(e.path, ".feat");
            fs::create_directories(feat.parent_path());
            std::ofstream fo(feat, std::ios::trunc);
            tracker::write_features(fo, seq, e.path + " " + std::string(class_name(e.label)));
            fo.close();
            if (!fo) throw DataError("failed writing " + feat.string());
            if (o.cubes) {
                const fs::path cp = o.out / "cubes" / with_ext(e.path, ".hugc");
                fs::create_directories(cp.parent_path());
                io::save_cube(cp, cube);
            }
            for (std::size_t k = 0; k < o.export_frames && k < cube.images.size(); ++k) {
                fs::path ip = o.out / "images" / fs::path(e.path).parent_path() /
                              (fs::path(e.path).stem().string() + "_" + std::to_string(k) + ".pgm");
                fs::create_directories(ip.parent_path());
                io::save_pgm(ip, cube.images[k]);
            }
        } catch (const std::exception& ex) {
            std::string msg = ex.what();
            if (msg.find(src.string()) == std::string::npos) msg = src.string() + ": " + msg;
            errors[i] = msg;
            std::lock_guard lock(err_mu);
            err << "error: " << msg << '\n';
        }
    });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json recs = json::array();
    json failed = json::array();
    std::size_t ok = 0, total_frames = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = manifest.entries[i];
        if (!errors[i].empty()) {
            failed.push_back(e.path);
            continue;
        }
        ++ok;
        total_frames += frames[i];
        json r{{"path", e.path},
               {"features", (fs::path("features") / with_ext(e.path, ".feat")).generic_string()},
               {"label", class_name(e.label)},
               {"subject", e.subject},
               {"frames", frames[i]}};
        if (o.cubes) r["cube"] = (fs::path("cubes") / with_ext(e.path, ".hugc")).generic_string();
        recs.push_back(r);
    }
    json doc{{"format", "hug-processed"},
             {"version", 1},
             {"manifest", o.manifest.generic_string()},
             {"params", detail::params_json(params)},
             {"recordings", recs},
             {"failed", failed}};
    try {
        dataset::write_text_file(o.out / "processed.json", doc.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "processed %zu/%zu recordings, %zu frames in %.1f s (%.0f frames/s)\n", ok, n,
                  total_frames, secs, secs > 0 ? total_frames / secs : 0.0);
    out << buf;
    return failed.empty() ? kExitOk : kExitData;
}

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto set = load_feature_set(o.processed);
        if (set.empty()) throw DataError("no processed recordings to train on");
        experiment::TrainConfig cfg;
        cfg.hmm.states = o.states;
        cfg.hmm.iterations = o.iterations;
        cfg.hmm.smoothing = o.smoothing;
        cfg.hmm.seed = resolve_seed(o.seed).value_or(0);
        cfg.hmm.bias = o.uniform_init ? hmm::InitBias::uniform : hmm::InitBias::left_to_right;
        if (o.priors == "uniform") cfg.priors = experiment::PriorPreset::uniform;
        else if (o.priors == "no-finger") cfg.priors = experiment::PriorPreset::no_finger_weighted;
        else throw DataError("unknown prior preset '" + o.priors + "'");
        if (o.states == 0) throw DataError("--states must be at least 1");
        if (o.iterations == 0) throw DataError("--iterations must be at least 1");

        std::vector<std::optional<std::uint16_t>> folds;
        const auto subjects = experiment::subjects_of(set);
        if (o.folds == "loso") {
            for (auto s : subjects) folds.emplace_back(s);
        } else if (o.folds == "all") {
            folds.emplace_back(std::nullopt);
        } else {
            std::stringstream ss(o.folds);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const int s = std::stoi(tok);
                if (std::find(subjects.begin(), subjects.end(), s) == subjects.end())
                    throw DataError("fold " + tok + ": no such subject");
                folds.emplace_back(static_cast<std::uint16_t>(s));
            }
        }
        fs::create_directories(o.out);
        json index = json::array();
        for (const auto& held : folds) {
            const std::string name = held ? std::to_string(*held) : "all";
            std::vector<std::size_t> train;
            for (std::size_t i = 0; i < set.size(); ++i) {
                if (!held || set[i].subject != *held) train.push_back(i);
            }
            const auto fm = experiment::train_fold(set, train, cfg, name, threads_or_default(o.threads));
            const std::string bank = "fold_" + name + ".hugm";
            const std::string dict = "fold_" + name + ".hugd";
            io::save_bank(o.out / bank, fm.bank);
            std::ostringstream ds;
            fm.dictionary.write(ds);
            dataset::write_text_file(o.out / dict, ds.str());
            index.push_back(json{{"fold", name},
                                 {"bank", bank},
                                 {"dictionary", dict},
                                 {"alphabet", fm.dictionary.alphabet_size()},
                                 {"held_out_subject", held ? json(*held) : json(nullptr)}});
            out << "fold " << name << ": " << train.size() << " training sequences, alphabet "
                << fm.dictionary.alphabet_size() << ", bank " << fs::file_size(o.out / bank) << " bytes\n";
        }
        json doc{{"format", "hug-models"},
                 {"version", 1},
                 {"states", o.states},
                 {"iterations", o.iterations},
                 {"smoothing", o.smoothing},
                 {"seed", cfg.hmm.seed},
                 {"priors", o.priors},
                 {"init", o.uniform_init ? "uniform" : "left-to-right"},
                 {"folds", index}};
        dataset::write_text_file(o.out / "models.json", doc.dump(2) + "\n");
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto set = load_feature_set(o.processed);
        const auto folds = load_models_index(o.models);
        experiment::EvalReport report;
        for (const auto& r : set) report.frames += r.features.size();
        for (const auto& f : folds) {
            experiment::FoldModel fm;
            fm.bank = io::load_bank(o.models / f.bank);
            fm.dictionary = load_dictionary(o.models / f.dictionary);
            std::vector<std::size_t> test;
            for (std::size_t i = 0; i < set.size(); ++i) {
                if (!f.held_out || set[i].subject == *f.held_out) test.push_back(i);
            }
            if (test.empty()) throw DataError("fold " + f.fold + " has no held-out recordings in this dataset");
            const auto t0 = std::chrono::steady_clock::now();
            const auto preds = experiment::evaluate_fold(set, test, fm);
            report.classify_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            experiment::add_predictions(report, preds);
            experiment::FoldResult fr{f.fold, 0, preds.size(), fm.dictionary.alphabet_size()};
            for (const auto& p : preds) fr.correct += p.actual == p.predicted;
            report.folds.push_back(fr);
        }
        const fs::path rp = o.report.empty() ? o.models / "report.json" : o.report;
        dataset::write_text_file(rp, experiment::report_json(report));
        out << experiment::report_text(report, o.timing);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

int cmd_stream(const StreamOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
    try {
        const auto folds = load_models_index(o.models);
        auto it = std::find_if(folds.begin(), folds.end(), [&](const FoldFiles& f) { return f.fold == o.fold; });
        if (it == folds.end()) throw DataError("no fold '" + o.fold + "' in " + (o.models / "models.json").string());
        const auto bank = io::load_bank(o.models / it->bank);
        const auto dict = load_dictionary(o.models / it->dictionary);
        stream::StreamConfig cfg{o.window, o.threshold, o.queue};
        stream::StreamStats stats;
        if (o.listen) {
            std::uint16_t port = 0;
            const int lfd = stream::listen_on(*o.listen, &port);
            err << "listening on 127.0.0.1:" << port << '\n';
            stream::FdStreambuf sb(stream::accept_on(lfd));
            std::istream sin(&sb);
            stats = stream::run_stream(sin, dict, bank, cfg, out);
        } else {
            stats = stream::run_stream(in, dict, bank, cfg, out);
        }
        char buf[128];
        std::snprintf(buf, sizeof buf, "stream: %zu frames, %zu events, %.0f frames/s\n", stats.frames, stats.events,
                      stats.seconds > 0 ? stats.frames / stats.seconds : 0.0);
        err << buf;
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

int cmd_export_image(const ExportOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const std::string ext = o.input.extension().string();
        rdproc::RangeDopplerImage img;
        if (ext == ".hugc") {
            const auto cube = io::load_cube(o.input);
            if (o.frame >= cube.images.size())
                throw DataError("frame " + std::to_string(o.frame) + " out of range (" +
                                std::to_string(cube.images.size()) + " frames)");
            img = cube.images[o.frame];
        } else {
            const auto rec = io::load_recording(o.input);
            if (o.frame >= rec.frames.size())
                throw DataError("frame " + std::to_string(o.frame) + " out of range (" +
                                std::to_string(rec.frames.size()) + " frames)");
            const rdproc::Processor proc(rec.params);
            img = proc.process_frame(rec.frames[o.frame], o.frame);
        }
        io::save_pgm(o.out, img);
        out << "wrote " << o.out.string() << " (" << img.range_bins << "x" << img.doppler_bins << ")\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace hug::cli
