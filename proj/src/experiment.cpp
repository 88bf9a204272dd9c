#include "hug/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "hug/parallel.hpp"
#include "hug/recording_io.hpp"
#include "json_fields.hpp"

namespace hug::experiment {

using detail::json;

tracker::FeatureSequence extract_features(const echosim::Recording& rec, const rdproc::Processor& processor,
                                          const tracker::TrackerConfig& cfg) {
    tracker::Tracker tr(cfg);
    tracker::FeatureSequence seq;
    seq.reserve(rec.frames.size());
    for (std::size_t f = 0; f < rec.frames.size(); ++f) seq.push_back(tr.push(processor.process_frame(rec.frames[f], f)));
    return seq;
}

FeatureSet features_in_memory(const dataset::DatasetConfig& config, std::size_t threads) {
    const auto entries = dataset::plan(config);
    const rdproc::Processor processor(config.params);
    const auto cfg = tracker::default_config(config.params);
    FeatureSet set(entries.size());
    parallel_for(entries.size(), threads, [&](std::size_t i) {
        auto rec = dataset::render_entry(config, entries[i]);
        io::quantize_to_f32(rec);
        set[i] = {entries[i].path, entries[i].label, entries[i].subject, extract_features(rec, processor, cfg)};
    });
    return set;
}

std::vector<double> priors_for(PriorPreset preset) {
    return preset == PriorPreset::no_finger_weighted ? hmm::no_finger_weighted_priors(kClassCount)
                                                     : hmm::uniform_priors(kClassCount);
}

FoldModel train_fold(const FeatureSet& set, std::span<const std::size_t> train, const TrainConfig& cfg,
                     const std::string& fold, std::size_t threads) {
    std::vector<std::size_t> order(train.begin(), train.end());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return set[a].key < set[b].key; });
    std::vector<tracker::FeatureSequence> seqs;
    seqs.reserve(order.size());
    for (std::size_t i : order) seqs.push_back(set[i].features);

    FoldModel fm;
    fm.dictionary = symbolizer::SymbolDictionary::build(seqs);
    const std::uint64_t hash = fm.dictionary.hash();
    const std::size_t V = fm.dictionary.alphabet_size();

    std::array<std::vector<std::vector<hmm::Symbol>>, kClassCount> by_class;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& seq = seqs[k];
        if (seq.empty()) continue;
        by_class[class_index(set[order[k]].label)].push_back(symbolizer::symbolize(seq, fm.dictionary).symbols);
    }
    for (std::size_t c = 0; c < kClassCount; ++c) {
        if (by_class[c].empty())
            throw DataError("fold " + fold + ": no training recordings of class " +
                            std::string(class_name(class_from_index(c))));
    }

    fm.bank.models.resize(kClassCount);
    parallel_for(kClassCount, threads, [&](std::size_t c) {
        hmm::TrainOptions opt = cfg.hmm;
        opt.seed = mix_seed(cfg.hmm.seed, c);
        auto r = hmm::baum_welch(by_class[c], V, opt);
        r.model.gesture = class_from_index(c);
        r.model.dictionary_hash = hash;
        fm.bank.models[c] = std::move(r.model);
        fm.loglik_traces[c] = std::move(r.loglik_trace);
        fm.objective_traces[c] = std::move(r.objective_trace);
    });
    fm.bank.priors = priors_for(cfg.priors);
    fm.bank.dictionary_hash = hash;
    fm.bank.alphabet = V;
    fm.bank.iterations = cfg.hmm.iterations;
    fm.bank.smoothing = cfg.hmm.smoothing;
    fm.bank.seed = cfg.hmm.seed;
    fm.bank.fold = fold;
    return fm;
}

std::vector<std::uint16_t> subjects_of(const FeatureSet& set) {
    std::vector<std::uint16_t> s;
    for (const auto& r : set) s.push_back(r.subject);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

std::vector<Prediction> evaluate_fold(const FeatureSet& set, std::span<const std::size_t> test, const FoldModel& model) {
    const std::uint64_t hash = model.dictionary.hash();
    std::vector<Prediction> out;
    out.reserve(test.size());
    for (std::size_t i : test) {
        Prediction p;
        p.index = i;
        p.actual = set[i].label;
        if (set[i].features.empty()) {
            // Nothing observed; fall back to the prior.
            p.predicted = class_from_index(static_cast<std::size_t>(
                std::max_element(model.bank.priors.begin(), model.bank.priors.end()) - model.bank.priors.begin()));
            p.posterior = *std::max_element(model.bank.priors.begin(), model.bank.priors.end());
        } else {
            const auto s = symbolizer::symbolize(set[i].features, model.dictionary);
            const auto c = hmm::classify(model.bank, s.symbols, hash);
            p.predicted = c.map_class;
            p.posterior = c.posterior[c.map_index];
        }
        out.push_back(p);
    }
    return out;
}

std::size_t EvalReport::correct() const {
    std::size_t k = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) k += counts[c][c];
    return k;
}

std::array<std::array<double, kClassCount>, kClassCount> EvalReport::confusion_percent() const {
    std::array<std::array<double, kClassCount>, kClassCount> pct{};
    for (std::size_t a = 0; a < kClassCount; ++a) {
        std::size_t row = 0;
        for (auto v : counts[a]) row += v;
        if (row == 0) continue;
        for (std::size_t e = 0; e < kClassCount; ++e)
            pct[a][e] = 100.0 * static_cast<double>(counts[a][e]) / static_cast<double>(row);
    }
    return pct;
}

std::array<double, kClassCount> EvalReport::class_accuracy() const {
    std::array<double, kClassCount> acc{};
    const auto pct = confusion_percent();
    for (std::size_t a = 0; a < kClassCount; ++a) {
        std::size_t row = 0;
        for (auto v : counts[a]) row += v;
        acc[a] = row == 0 ? std::numeric_limits<double>::quiet_NaN() : pct[a][a];
    }
    return acc;
}

double EvalReport::average_accuracy() const {
    double s = 0.0;
    std::size_t n = 0;
    for (double a : class_accuracy()) {
        if (std::isnan(a)) continue;
        s += a;
        ++n;
    }
    return n == 0 ? 0.0 : s / static_cast<double>(n);
}

double EvalReport::overall_accuracy() const {
    return gestures == 0 ? 0.0 : 100.0 * static_cast<double>(correct()) / static_cast<double>(gestures);
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

void add_predictions(EvalReport& report, std::span<const Prediction> predictions) {
    for (const auto& p : predictions) {
        report.counts[class_index(p.actual)][class_index(p.predicted)] += 1;
        report.gestures += 1;
    }
}

EvalReport leave_one_subject_out(const FeatureSet& set, const TrainConfig& cfg, std::size_t threads,
                                 std::vector<FoldModel>* models) {
    EvalReport report;
    const auto subjects = subjects_of(set);
    if (subjects.size() < 2) throw DataError("leave-one-subject-out needs at least two subjects");
    for (const auto& r : set) report.frames += r.features.size();
    for (std::uint16_t s : subjects) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < set.size(); ++i) (set[i].subject == s ? test : train).push_back(i);
        const std::string fold = std::to_string(s);
        auto fm = train_fold(set, train, cfg, fold, threads);
        const auto t0 = std::chrono::steady_clock::now();
        const auto preds = evaluate_fold(set, test, fm);
        report.classify_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        add_predictions(report, preds);
        FoldResult fr{fold, 0, preds.size(), fm.dictionary.alphabet_size()};
        for (const auto& p : preds) fr.correct += p.actual == p.predicted;
        report.folds.push_back(fr);
        if (models) models->push_back(std::move(fm));
    }
    return report;
}

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

std::string report_json(const EvalReport& r) {
    json classes = json::array();
    for (std::size_t c = 0; c < kClassCount; ++c) classes.push_back(class_name(class_from_index(c)));
    json counts = json::array(), pct = json::array();
    const auto p = r.confusion_percent();
    for (std::size_t a = 0; a < kClassCount; ++a) {
        json rc = json::array(), rp = json::array();
        for (std::size_t e = 0; e < kClassCount; ++e) {
            rc.push_back(r.counts[a][e]);
            rp.push_back(round6(p[a][e]));
        }
        counts.push_back(rc);
        pct.push_back(rp);
    }
    json per_class = json::object();
    const auto acc = r.class_accuracy();
    for (std::size_t c = 0; c < kClassCount; ++c) {
        per_class[std::string(class_name(class_from_index(c)))] =
            std::isnan(acc[c]) ? json(nullptr) : json(round6(acc[c]));
    }
    json folds = json::array();
    for (const auto& f : r.folds) {
        folds.push_back(json{{"fold", f.fold},
                             {"correct", f.correct},
                             {"total", f.total},
                             {"alphabet", f.alphabet},
                             {"accuracy", f.total ? round6(100.0 * f.correct / f.total) : 0.0}});
    }
    const auto ci = wilson_interval(r.correct(), r.gestures);
    json doc{{"classes", classes},
             {"confusion_counts", counts},
             {"confusion_percent", pct},
             {"class_accuracy", per_class},
             {"average_accuracy", round6(r.average_accuracy())},
             {"overall_accuracy", round6(r.overall_accuracy())},
             {"overall_ci95", {round6(100.0 * ci.lo), round6(100.0 * ci.hi)}},
             {"gestures", r.gestures},
             {"correct", r.correct()},
             {"frames", r.frames},
             {"folds", folds}};
    return doc.dump(2) + "\n";
}

std::string report_text(const EvalReport& r, bool include_timing) {
    std::ostringstream os;
    char buf[256];
    const auto p = r.confusion_percent();
    os << "Confusion matrix (%, rows = actual, columns = estimated)\n";
    std::snprintf(buf, sizeof buf, "%-14s", "");
    os << buf;
    for (std::size_t e = 0; e < kClassCount; ++e) {
        std::snprintf(buf, sizeof buf, "%13s", std::string(class_name(class_from_index(e))).c_str());
        os << buf;
    }
    os << '\n';
    for (std::size_t a = 0; a < kClassCount; ++a) {
        std::snprintf(buf, sizeof buf, "%-14s", std::string(class_name(class_from_index(a))).c_str());
        os << buf;
        for (std::size_t e = 0; e < kClassCount; ++e) {
            std::snprintf(buf, sizeof buf, "%13.2f", p[a][e]);
            os << buf;
        }
        os << '\n';
    }
    std::snprintf(buf, sizeof buf, "%-14s", "Average");
    os << buf;
    const auto acc = r.class_accuracy();
    for (std::size_t c = 0; c < kClassCount; ++c) {
        if (std::isnan(acc[c])) std::snprintf(buf, sizeof buf, "%13s", "-");
        else std::snprintf(buf, sizeof buf, "%13.2f", acc[c]);
        os << buf;
    }
    os << '\n';

    os << "\nPer-fold accuracy (held-out subject)\n";
    os << "fold        correct   total   accuracy  alphabet\n";
    for (const auto& f : r.folds) {
        std::snprintf(buf, sizeof buf, "%-10s %8zu %7zu %9.2f%% %9zu\n", f.fold.c_str(), f.correct, f.total,
                      f.total ? 100.0 * f.correct / f.total : 0.0, f.alphabet);
        os << buf;
    }
    const auto ci = wilson_interval(r.correct(), r.gestures);
    std::snprintf(buf, sizeof buf, "\nAverage accuracy: %.2f%%\nOverall: %zu/%zu = %.2f%% (95%% CI %.2f-%.2f%%)\n",
                  r.average_accuracy(), r.correct(), r.gestures, r.overall_accuracy(), 100.0 * ci.lo, 100.0 * ci.hi);
    os << buf;
    if (include_timing && r.classify_seconds > 0.0) {
        std::snprintf(buf, sizeof buf, "Throughput: %.0f gestures/s, %.0f frames/s (classification only)\n",
                      r.gestures / r.classify_seconds, r.frames / r.classify_seconds);
        os << buf;
    }
    return os.str();
}

}  // namespace hug::experiment
