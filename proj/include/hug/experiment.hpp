#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hug/dataset.hpp"
#include "hug/hmm.hpp"
#include "hug/rdproc.hpp"
#include "hug/symbolizer.hpp"
#include "hug/tracker.hpp"

namespace hug::experiment {

struct LabeledSequence {
    std::string key;  // recording path; defines the dictionary traversal order
    GestureClass label = GestureClass::no_finger;
    std::uint16_t subject = 0;
    tracker::FeatureSequence features;
};

/// Sorted by key.
using FeatureSet = std::vector<LabeledSequence>;

tracker::FeatureSequence extract_features(const echosim::Recording& rec, const rdproc::Processor& processor,
                                          const tracker::TrackerConfig& cfg);

/// Renders, quantises to f32 (as a save/load cycle would), processes and
/// tracks every recording of a config without touching the disk. Produces
/// the same features as the file-based path.
FeatureSet features_in_memory(const dataset::DatasetConfig& config, std::size_t threads);

enum class PriorPreset { uniform, no_finger_weighted };

struct TrainConfig {
    hmm::TrainOptions hmm;
    PriorPreset priors = PriorPreset::uniform;
};

std::vector<double> priors_for(PriorPreset preset);

struct FoldModel {
    symbolizer::SymbolDictionary dictionary;
    hmm::ClassifierBank bank;
    std::array<std::vector<double>, kClassCount> loglik_traces;
    std::array<std::vector<double>, kClassCount> objective_traces;
};

/// Dictionary over the training sequences (in key order) and one HMM per
/// class. Throws DataError when a class has no training sequence.
FoldModel train_fold(const FeatureSet& set, std::span<const std::size_t> train, const TrainConfig& cfg,
                     const std::string& fold, std::size_t threads);

std::vector<std::uint16_t> subjects_of(const FeatureSet& set);

struct Prediction {
    std::size_t index = 0;  // into the feature set
    GestureClass actual = GestureClass::no_finger;
    GestureClass predicted = GestureClass::no_finger;
    double posterior = 0.0;
};

/// Classifies the given sequences with one fold's model.
std::vector<Prediction> evaluate_fold(const FeatureSet& set, std::span<const std::size_t> test, const FoldModel& model);

struct FoldResult {
    std::string fold;
    std::size_t correct = 0;
    std::size_t total = 0;
    std::size_t alphabet = 0;
};

struct EvalReport {
    std::array<std::array<std::size_t, kClassCount>, kClassCount> counts{};  // [actual][estimated]
    std::vector<FoldResult> folds;
    std::size_t gestures = 0;
    std::size_t frames = 0;
    double classify_seconds = 0.0;  // not part of the machine-readable report

    std::size_t correct() const;
    /// Row-normalised percentages; an empty row stays 0.
    std::array<std::array<double, kClassCount>, kClassCount> confusion_percent() const;
    /// NaN for a class with no samples.
    std::array<double, kClassCount> class_accuracy() const;
    /// Mean of the per-class diagonal over classes that have samples.
    double average_accuracy() const;
    double overall_accuracy() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval for k successes out of n.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

void add_predictions(EvalReport& report, std::span<const Prediction> predictions);

/// Leave-one-subject-out over every subject present: train on the rest,
/// classify the held-out subject.
EvalReport leave_one_subject_out(const FeatureSet& set, const TrainConfig& cfg, std::size_t threads,
                                 std::vector<FoldModel>* models = nullptr);

/// Sorted keys, no timing; byte-stable for identical inputs.
std::string report_json(const EvalReport& report);
std::string report_text(const EvalReport& report, bool include_timing);

}  // namespace hug::experiment
