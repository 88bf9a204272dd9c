#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hug/params.hpp"

using namespace hug;

TEST_SUITE("params") {

TEST_CASE("default derived resolutions") {
    const FrameParams p;
    const auto d = derive(p);
    const double lambda = 340.0 / 300e3;
    CHECK(d.range_resolution == doctest::Approx(340.0 / 40e3).epsilon(1e-12));
    CHECK(d.velocity_resolution == doctest::Approx(lambda / (2 * 12 * 600e-6)).epsilon(1e-12));
    CHECK(d.unambiguous_range == doctest::Approx(340.0 * 600e-6 / 2).epsilon(1e-12));
    CHECK(d.unambiguous_velocity == doctest::Approx(lambda / (4 * 600e-6)).epsilon(1e-12));
    CHECK(d.velocity_bin_width == doctest::Approx(lambda / (2 * 256 * 600e-6)).epsilon(1e-12));
    CHECK(d.range_bin_width == doctest::Approx(340.0 / 800e3).epsilon(1e-12));

    // Published figures: 0.85 cm, 0.08 m/s, 0.49 m/s.
    CHECK(std::abs(d.range_resolution - 0.0085) <= 1e-4);
    CHECK(std::abs(d.velocity_resolution - 0.08) <= 0.005);
    CHECK(std::abs(d.unambiguous_velocity - 0.49) <= 0.02);
}

TEST_CASE("sample counts") {
    const FrameParams p;
    CHECK(p.pri_samples() == 240);
    CHECK(p.pulse_samples() == 80);
    CHECK(p.frame_period() == doctest::Approx(7.2e-3));
    CHECK(p.wavelength() == doctest::Approx(340.0 / 300e3));
    CHECK(p.pulse_width * p.bandwidth == doctest::Approx(4.0));
}

TEST_CASE("shipped params move only the ROI") {
    FrameParams s = shipped_params();
    CHECK(s.roi_start_bin == 60);
    CHECK(check_params(s).empty());
    s.roi_start_bin = 0;
    CHECK(s == FrameParams{});
}

TEST_CASE("validation lists every violation") {
    FrameParams p;
    p.bandwidth = 0.0;
    p.pulses_per_frame = 0;
    p.fft_points = 7;
    const auto errors = check_params(p);
    CHECK(errors.size() >= 3);
    try {
        validate(p);
        FAIL("expected InvalidParams");
    } catch (const InvalidParams& e) {
        CHECK(e.violations() == errors);
    }
    CHECK_THROWS_AS(derive(p), InvalidParams);
}

TEST_CASE("single invariants") {
    auto fails = [](auto mutate) {
        FrameParams p;
        mutate(p);
        return !check_params(p).empty();
    };
    CHECK(fails([](FrameParams& p) { p.sound_speed = -1; }));
    CHECK(fails([](FrameParams& p) { p.carrier_freq = NAN; }));
    CHECK(fails([](FrameParams& p) { p.pulse_width = p.pri; }));
    CHECK(fails([](FrameParams& p) { p.fast_time_rate = 30e3; }));
    CHECK(fails([](FrameParams& p) { p.pulses_per_frame = 300; }));
    CHECK(fails([](FrameParams& p) { p.range_bins = 0; }));
    CHECK(fails([](FrameParams& p) { p.roi_start_bin = 61; p.range_bins = 180; }));
    CHECK(fails([](FrameParams& p) { p.pulse_width = 1e-7; }));
    CHECK(fails([](FrameParams& p) { p.carrier_freq = 5e3; }));
    CHECK_FALSE(fails([](FrameParams& p) { p.roi_start_bin = 60; }));
}

TEST_CASE("resolutions scale with their parameters") {
    FrameParams p;
    const auto base = derive(p);
    p.bandwidth *= 2;
    p.pulse_width /= 2;
    CHECK(derive(p).range_resolution == doctest::Approx(base.range_resolution / 2));
    p = FrameParams{};
    p.pulses_per_frame *= 2;
    CHECK(derive(p).velocity_resolution == doctest::Approx(base.velocity_resolution / 2));
    CHECK(derive(p).unambiguous_velocity == doctest::Approx(base.unambiguous_velocity));
}

}
