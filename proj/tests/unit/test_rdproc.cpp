#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hug/echosim.hpp"
#include "hug/fft.hpp"
#include "hug/rdproc.hpp"
#include "support.hpp"

using namespace hug;
using echosim::MotionModel;
using echosim::Scatterer;

namespace {

// Correlation of the frame stream with the unit-energy pulse, straight from
// the definition.
CMatrix correlate_oracle(const CMatrix& frame, const std::vector<cplx>& pulse) {
    double e = 0.0;
    for (const auto& v : pulse) e += std::norm(v);
    const double g = 1.0 / std::sqrt(e);
    CMatrix out(frame.rows(), frame.cols());
    const auto& s = frame.data();
    for (std::size_t i = 0; i < s.size(); ++i) {
        cplx acc = 0;
        for (std::size_t k = 0; k < pulse.size() && i + k < s.size(); ++k) acc += s[i + k] * std::conj(pulse[k]);
        out.data()[i] = acc * g;
    }
    return out;
}

std::pair<std::size_t, std::size_t> argmax(const rdproc::RangeDopplerImage& img) {
    const auto it = std::max_element(img.power.begin(), img.power.end());
    const auto i = static_cast<std::size_t>(it - img.power.begin());
    return {i / img.range_bins, i % img.range_bins};
}

}  // namespace

TEST_SUITE("rdproc") {

TEST_CASE("fast and direct matched filters agree with the definition") {
    const FrameParams p;
    const auto pulse = waveform::chirp_pulse(p);
    const auto ref = waveform::matched_reference(pulse);
    CMatrix frame(p.pulses_per_frame, p.pri_samples());
    const auto noise = test::random_complex(frame.size(), 3);
    std::copy(noise.begin(), noise.end(), frame.data().begin());

    const auto oracle = correlate_oracle(frame, pulse.samples);
    CHECK(test::rel_diff(rdproc::matched_filter(frame, ref).data(), oracle.data()) < 1e-12);
    CHECK(test::rel_diff(rdproc::matched_filter_direct(frame, ref).data(), oracle.data()) < 1e-12);
    rdproc::Processor proc(p);
    CHECK(test::rel_diff(proc.compress(frame).data(), oracle.data()) < 1e-12);
}

TEST_CASE("compressed echo peaks at the delay sample across a row boundary") {
    const FrameParams p;
    const double delay_samples = 200.0 - 1e-7;  // pulse runs 40 samples into the next row
    const Scatterer s{delay_samples / p.fast_time_rate * p.sound_speed / 2, 0.0, 1.0, 0};
    const auto f = echosim::render_frame(std::span(&s, 1), p, MotionModel::stop_and_hop);
    const auto c = rdproc::matched_filter(f, waveform::matched_reference(waveform::chirp_pulse(p)));
    for (std::size_t m = 0; m < p.pulses_per_frame; ++m) {
        std::size_t best = 0;
        for (std::size_t k = 0; k < c.cols(); ++k)
            if (std::abs(c(m, k)) > std::abs(c(m, best))) best = k;
        CHECK(best == 200);
        // The last pulse's echo is cut off by the end of the frame after 40 samples.
        const double overlap = m + 1 < p.pulses_per_frame ? 80.0 : 40.0;
        CHECK(std::abs(c(m, best)) == doctest::Approx(overlap / std::sqrt(80.0)).epsilon(1e-6));
    }
}

TEST_CASE("slow-time window") {
    const auto w = rdproc::slow_time_window(12);
    REQUIRE(w.size() == 12);
    for (std::size_t m = 0; m < 12; ++m) {
        CHECK(w[m] > 0.0);
        CHECK(w[m] == doctest::Approx(w[11 - m]));
        CHECK(w[m] == doctest::Approx(std::pow(std::sin(std::numbers::pi * (m + 1) / 13.0), 2)));
    }
}

TEST_CASE("axes") {
    const FrameParams p = shipped_params();
    const auto v = rdproc::velocity_axis(p);
    const auto r = rdproc::range_axis(p);
    const auto d = derive(p);
    CHECK(v.size() == 256);
    CHECK(v[128] == 0.0);
    CHECK(v[129] == doctest::Approx(d.velocity_bin_width));
    CHECK(r.size() == 180);
    CHECK(r[0] == doctest::Approx(60 * d.range_bin_width));
    CHECK(r[179] == doctest::Approx(239 * d.range_bin_width));
}

TEST_CASE("Doppler spectrum matches a windowed zero-padded DFT and Parseval") {
    const FrameParams p = shipped_params();
    CMatrix prof(p.pulses_per_frame, p.pri_samples());
    const auto noise = test::random_complex(prof.size(), 17);
    std::copy(noise.begin(), noise.end(), prof.data().begin());
    const auto spec = rdproc::doppler_spectrum(prof, p);
    REQUIRE(spec.rows() == 256);
    REQUIRE(spec.cols() == 180);
    const auto w = rdproc::slow_time_window(p.pulses_per_frame);
    for (std::size_t j : {0u, 17u, 179u}) {
        std::vector<cplx> col(256, cplx{});
        double time_energy = 0.0;
        for (std::size_t m = 0; m < 12; ++m) {
            col[m] = prof(m, p.roi_start_bin + j) * w[m];
            time_energy += std::norm(col[m]);
        }
        const auto X = test::naive_dft(col, +1);
        double freq_energy = 0.0;
        for (std::size_t b = 0; b < 256; ++b) {
            const cplx want = X[(b + 128) % 256];
            CHECK(std::abs(spec(b, j) - want) < 1e-9 * (1 + std::abs(want)));
            freq_energy += std::norm(spec(b, j));
        }
        CHECK(freq_energy == doctest::Approx(256 * time_energy).epsilon(1e-10));
    }
    const auto img = rdproc::doppler_fft(prof, p);
    for (std::size_t i = 0; i < img.power.size(); ++i) CHECK(img.power[i] == doctest::Approx(std::norm(spec.data()[i])));
}

TEST_CASE("Doppler placement of a moving scatterer") {
    const FrameParams p = shipped_params();
    rdproc::Processor proc(p);
    const double lambda = p.wavelength();
    for (double v : {0.0, 0.08, -0.08, 0.2, -0.3, 0.6}) {
        const Scatterer s{0.06, v, 1.0, 0};
        const auto f = echosim::render_frame(std::span(&s, 1), p, MotionModel::true_motion);
        const auto img = proc.process_frame(f, 3);
        CHECK(img.frame_index == 3);
        const double bins = 2 * v * p.fft_points * p.pri / lambda;
        const double wrapped = std::remainder(bins, static_cast<double>(p.fft_points));
        const auto [row, col] = argmax(img);
        CAPTURE(v);
        CHECK(std::abs(static_cast<double>(row) - (128 + wrapped)) <= 1.0);
        const double range_col = 0.06 / derive(p).range_bin_width - p.roi_start_bin;
        CHECK(std::abs(static_cast<double>(col) - range_col) <= 2 + std::abs(v) * p.frame_period() / derive(p).range_bin_width);
    }
}

TEST_CASE("IQ demodulation reproduces the baseband echo inside the passband") {
    const FrameParams p;
    const std::vector<Scatterer> sc{{0.05, 0.1, 1.0, 0}, {0.08, -0.2, 0.5, 1}};
    const double rate = echosim::default_passband_rate(p);
    CHECK(rate == doctest::Approx(1.2e6));
    const auto pb = echosim::render_passband_frame(sc, p, MotionModel::true_motion, rate);
    const auto bb = rdproc::iq_demodulate(pb, p, rate);
    // Reference: the baseband echo rendered on the passband sample grid, so
    // both sides see the same sampling of the pulse edges.
    FrameParams fine = p;
    fine.fast_time_rate = rate;
    const auto direct = echosim::render_frame(sc, fine, MotionModel::true_motion);
    const std::size_t n = bb.size(), nf = direct.size();
    const double decim = rate / p.fast_time_rate;
    std::vector<cplx> X(n), Y(nf);
    FftPlan(n, FftDirection::forward).execute(bb.data().data(), X.data());
    FftPlan(nf, FftDirection::forward).execute(direct.data().data(), Y.data());
    double err = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const bool neg = k >= n / 2;
        const double f = (neg ? double(k) - double(n) : double(k)) * p.fast_time_rate / double(n);
        if (std::abs(f) > 0.6 * p.bandwidth) continue;
        const cplx want = 0.5 * Y[neg ? nf - (n - k) : k] / decim;
        err += std::norm(X[k] - want);
        ref += std::norm(want);
    }
    CHECK(10 * std::log10(err / ref) < -40.0);
}

TEST_CASE("demodulation filter") {
    const FrameParams p;
    const double rate = 1.2e6;
    const auto h = rdproc::demod_lowpass(p, rate);
    CHECK(h.size() % 2 == 1);
    double dc = 0.0;
    for (double v : h) dc += v;
    CHECK(dc == doctest::Approx(1.0));
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(h[i] == doctest::Approx(h[h.size() - 1 - i]));
    auto gain_db = [&](double f) {
        cplx acc = 0;
        for (std::size_t i = 0; i < h.size(); ++i) acc += h[i] * std::polar(1.0, -2 * std::numbers::pi * f / rate * i);
        return 20 * std::log10(std::abs(acc));
    };
    CHECK(std::abs(gain_db(p.bandwidth / 2)) < 0.1);
    for (double f = 2 * p.bandwidth; f < rate / 2; f += 1000) CHECK(gain_db(f) < -60.0);
    CHECK_THROWS_AS(rdproc::iq_demodulate(std::vector<double>(10), p, rate), DataError);
    CHECK_THROWS_AS(rdproc::iq_demodulate(std::vector<double>(10), p, 4e5), DataError);
}

TEST_CASE("frame shape is checked") {
    const FrameParams p = shipped_params();
    rdproc::Processor proc(p);
    CHECK_THROWS_AS(proc.process_frame(CMatrix(11, 240), 0), DataError);
    CHECK_THROWS_AS(proc.process_frame(CMatrix(12, 239), 0), DataError);
    echosim::Recording rec;
    rec.params = p;
    rec.frames.push_back(CMatrix(12, 241));
    CHECK_THROWS_AS(rdproc::process_recording(rec), DataError);
}

TEST_CASE("process_recording carries metadata") {
    const FrameParams p = shipped_params();
    const auto script = echosim::script_gesture(GestureClass::finger_press, 3, 4, p);
    echosim::RenderOptions o;
    o.noise_seed = 1;
    auto rec = echosim::render_echo(script, p, o);
    rec.subject = 4;
    const auto cube = rdproc::process_recording(rec);
    CHECK(cube.images.size() == rec.frames.size());
    CHECK(cube.label == GestureClass::finger_press);
    CHECK(cube.subject == 4);
    CHECK(cube.params == p);
    for (std::size_t f = 0; f < cube.images.size(); ++f) {
        CHECK(cube.images[f].frame_index == f);
        CHECK(cube.images[f].power.size() == 256 * 180);
    }
}

TEST_CASE("FFT plans") {
    for (std::size_t n : {1u, 2u, 12u, 97u, 256u}) {
        const auto x = test::random_complex(n, n);
        std::vector<cplx> y(n), z(n);
        FftPlan(n, FftDirection::forward).execute(x.data(), y.data());
        CHECK(test::rel_diff(y, test::naive_dft(x, -1)) < 1e-12);
        FftPlan(n, FftDirection::backward).execute(y.data(), z.data());
        for (auto& v : z) v /= static_cast<double>(n);
        CHECK(test::rel_diff(z, x) < 1e-12);
    }
    // Batched strided layout.
    const std::size_t n = 16, batch = 5;
    const auto x = test::random_complex(n * batch, 9);
    std::vector<cplx> y(n * batch);
    FftPlan(n, FftDirection::forward, batch, batch, 1).execute(x.data(), y.data());
    for (std::size_t b = 0; b < batch; ++b) {
        std::vector<cplx> col(n), out(n);
        for (std::size_t j = 0; j < n; ++j) col[j] = x[j * batch + b];
        const auto want = test::naive_dft(col, -1);
        for (std::size_t j = 0; j < n; ++j) out[j] = y[j * batch + b];
        CHECK(test::rel_diff(out, want) < 1e-12);
    }
}

}
