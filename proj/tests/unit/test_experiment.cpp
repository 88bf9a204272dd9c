#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "hug/experiment.hpp"

using namespace hug;
using namespace hug::experiment;

namespace {

dataset::DatasetConfig small_exaggerated() {
    auto c = dataset::preset("exaggerated");
    c.subjects = 3;
    c.per_class.fill(3);
    c.seed = 77;
    return c;
}

const FeatureSet& shared_features() {
    static const FeatureSet set = features_in_memory(small_exaggerated(), 1);
    return set;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("Wilson interval") {
    // Closed form evaluated independently for k = 8, n = 10.
    const double z = 1.959963984540054, n = 10, ph = 0.8;
    const double centre = (ph + z * z / (2 * n)) / (1 + z * z / n);
    const double half = z / (1 + z * z / n) * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n));
    const auto ci = wilson_interval(8, 10);
    CHECK(ci.lo == doctest::Approx(centre - half));
    CHECK(ci.hi == doctest::Approx(centre + half));
    CHECK(wilson_interval(0, 10).lo == doctest::Approx(0.0));
    CHECK(wilson_interval(10, 10).hi == doctest::Approx(1.0));
    CHECK(wilson_interval(0, 10).hi == doctest::Approx(0.2775).epsilon(1e-3));
}

TEST_CASE("report arithmetic") {
    EvalReport r;
    std::vector<Prediction> p;
    auto add = [&](GestureClass a, GestureClass e, int times) {
        for (int i = 0; i < times; ++i) p.push_back({p.size(), a, e, 0.9});
    };
    add(GestureClass::no_finger, GestureClass::no_finger, 9);
    add(GestureClass::no_finger, GestureClass::screw, 1);
    add(GestureClass::screw, GestureClass::screw, 2);
    add(GestureClass::screw, GestureClass::button_on, 2);
    add_predictions(r, p);
    CHECK(r.gestures == 14);
    CHECK(r.correct() == 11);
    CHECK(r.overall_accuracy() == doctest::Approx(100.0 * 11 / 14));
    CHECK(r.average_accuracy() == doctest::Approx((90.0 + 50.0) / 2));
    const auto pct = r.confusion_percent();
    CHECK(pct[0][0] == doctest::Approx(90.0));
    CHECK(pct[6][2] == doctest::Approx(50.0));
    CHECK(pct[3][3] == 0.0);
    CHECK(std::isnan(r.class_accuracy()[3]));

    const auto doc = nlohmann::json::parse(report_json(r));
    CHECK(doc["correct"] == 11);
    CHECK(doc["confusion_counts"][6][2] == 2);
    CHECK(doc["class_accuracy"]["button-off"].is_null());
    CHECK(report_json(r) == report_json(r));
    const std::string text = report_text(r, false);
    CHECK(text.find("Confusion matrix") != std::string::npos);
    CHECK(text.find("gestures/s") == std::string::npos);
}

TEST_CASE("in-memory features are deterministic and labelled") {
    const auto& set = shared_features();
    CHECK(set.size() == 3 * 7 * 3);
    for (std::size_t i = 1; i < set.size(); ++i) CHECK(set[i - 1].key < set[i].key);
    CHECK(subjects_of(set) == std::vector<std::uint16_t>{1, 2, 3});
    const auto again = features_in_memory(small_exaggerated(), 2);
    REQUIRE(again.size() == set.size());
    for (std::size_t i = 0; i < set.size(); ++i) CHECK(again[i].features == set[i].features);
}

TEST_CASE("fold training and leave-one-subject-out") {
    const auto& set = shared_features();
    TrainConfig cfg;
    std::vector<FoldModel> models;
    const auto r = leave_one_subject_out(set, cfg, 2, &models);
    REQUIRE(r.folds.size() == 3);
    REQUIRE(models.size() == 3);
    CHECK(r.gestures == set.size());
    for (const auto& m : models) {
        CHECK(m.bank.models.size() == kClassCount);
        CHECK(m.bank.iterations == 10);
        CHECK(m.bank.dictionary_hash == m.dictionary.hash());
        for (const auto& tr : m.objective_traces) {
            REQUIRE(tr.size() == 11);
            for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i] >= tr[i - 1] - 1e-8);
        }
    }
    MESSAGE("small exaggerated LOSO accuracy " << r.average_accuracy());
    CHECK(r.average_accuracy() > 80.0);
    const auto r2 = leave_one_subject_out(set, cfg, 1);
    CHECK(report_json(r2) == report_json(r));

    // A fold whose training set lacks a class is refused.
    std::vector<std::size_t> only_first{0};
    CHECK_THROWS_AS(train_fold(set, only_first, cfg, "x", 1), DataError);
}

TEST_CASE("fold evaluation uses the fold's dictionary") {
    const auto& set = shared_features();
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < set.size(); ++i) (set[i].subject == 1 ? test : train).push_back(i);
    const auto m = train_fold(set, train, TrainConfig{}, "1", 1);
    const auto preds = evaluate_fold(set, test, m);
    CHECK(preds.size() == test.size());
    for (const auto& p : preds) {
        CHECK(p.actual == set[p.index].label);
        CHECK(p.posterior > 0.0);
        CHECK(p.posterior <= 1.0);
    }
    auto other = m;
    other.bank.dictionary_hash ^= 1;
    CHECK_THROWS_AS(evaluate_fold(set, test, other), DataError);
}

}
