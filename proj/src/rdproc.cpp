#include "hug/rdproc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "hug/fft.hpp"
#include "hug/simd.hpp"

namespace hug::rdproc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Kaiser design target; a few dB over the 60 dB requirement absorbs the
// error of the length formula.
constexpr double kDemodStopbandDb = 65.0;

std::size_t convolution_fft_size(const FrameParams& params, std::size_t ref_len) {
    const std::size_t stream = std::size_t{params.pulses_per_frame} * params.pri_samples();
    return std::bit_ceil(stream + ref_len - 1);
}

void check_frame_shape(const CMatrix& frame, const FrameParams& params) {
    if (frame.rows() != params.pulses_per_frame || frame.cols() != params.pri_samples()) {
        throw DataError("frame shape " + std::to_string(frame.rows()) + "x" + std::to_string(frame.cols()) +
                        " does not match " + std::to_string(params.pulses_per_frame) + "x" +
                        std::to_string(params.pri_samples()));
    }
}

std::vector<cplx> reference_spectrum(const waveform::PulseSamples& reference, std::size_t n) {
    std::vector<cplx> padded(n, cplx{});
    std::copy(reference.samples.begin(), reference.samples.end(), padded.begin());
    std::vector<cplx> spectrum(n);
    FftPlan(n, FftDirection::forward).execute(padded.data(), spectrum.data());
    return spectrum;
}

// Fast convolution of the whole frame stream with the reference; picks the
// aligned lags out of the full convolution.
CMatrix compress_with(const CMatrix& frame, std::span<const cplx> ref_spectrum, std::size_t ref_len) {
    const std::size_t n = ref_spectrum.size();
    const std::size_t stream = frame.size();
    std::vector<cplx> buf(n, cplx{});
    std::copy(frame.data().begin(), frame.data().end(), buf.begin());
    std::vector<cplx> spec(n);
    FftPlan(n, FftDirection::forward).execute(buf.data(), spec.data());
    simd::complex_multiply(spec, ref_spectrum, spec);
    FftPlan(n, FftDirection::backward).execute(spec.data(), buf.data());

    CMatrix out(frame.rows(), frame.cols());
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < stream; ++i) out.data()[i] = buf[i + ref_len - 1] * scale;
    return out;
}

}  // namespace

std::vector<double> velocity_axis(const FrameParams& params) {
    const auto d = derive(params);
    std::vector<double> axis(params.fft_points);
    const auto half = static_cast<double>(params.fft_points / 2);
    for (std::size_t b = 0; b < axis.size(); ++b) axis[b] = (static_cast<double>(b) - half) * d.velocity_bin_width;
    return axis;
}

std::vector<double> range_axis(const FrameParams& params) {
    const auto d = derive(params);
    std::vector<double> axis(params.range_bins);
    for (std::size_t j = 0; j < axis.size(); ++j)
        axis[j] = static_cast<double>(params.roi_start_bin + j) * d.range_bin_width;
    return axis;
}

std::vector<double> slow_time_window(std::size_t pulses) {
    std::vector<double> w(pulses);
    for (std::size_t m = 0; m < pulses; ++m)
        w[m] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(m + 1) / static_cast<double>(pulses + 1));
    return w;
}

std::vector<double> demod_lowpass(const FrameParams& params, double passband_rate) {
    const double pass_edge = 1.2 * params.bandwidth / 2.0;
    const double stop_edge = 2.0 * params.bandwidth;
    const double beta = 0.1102 * (kDemodStopbandDb - 8.7);
    const double transition = kTwoPi * (stop_edge - pass_edge) / passband_rate;
    auto taps = static_cast<std::size_t>(std::ceil((kDemodStopbandDb - 7.95) / (2.285 * transition))) + 1;
    if (taps % 2 == 0) ++taps;
    const double cutoff = (pass_edge + stop_edge) / 2.0 / passband_rate;  // cycles/sample
    const double centre = static_cast<double>(taps - 1) / 2.0;
    const double i0_beta = std::cyl_bessel_i(0.0, beta);

    std::vector<double> h(taps);
    double sum = 0.0;
    for (std::size_t n = 0; n < taps; ++n) {
        const double x = static_cast<double>(n) - centre;
        const double sinc = x == 0.0 ? 2.0 * cutoff : std::sin(kTwoPi * cutoff * x) / (std::numbers::pi * x);
        const double ratio = x / centre;
        const double win = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - ratio * ratio))) / i0_beta;
        h[n] = sinc * win;
        sum += h[n];
    }
    for (auto& v : h) v /= sum;
    return h;
}

CMatrix iq_demodulate(std::span<const double> passband, const FrameParams& params, double passband_rate) {
    validate(params);
    if (passband_rate < 2.0 * (params.carrier_freq + params.bandwidth / 2.0))
        throw DataError("passband rate below 2(fc + B/2)");
    const double ratio = passband_rate / params.fast_time_rate;
    const auto decim = static_cast<std::size_t>(std::llround(ratio));
    if (decim == 0 || std::abs(ratio - static_cast<double>(decim)) > 1e-9)
        throw DataError("passband rate must be an integer multiple of the fast-time rate");
    const std::size_t rows = params.pulses_per_frame;
    const std::size_t cols = params.pri_samples();
    if (passband.size() != rows * cols * decim) throw DataError("passband frame length mismatch");

    std::vector<cplx> mixed(passband.size());
    const double w = kTwoPi * params.carrier_freq / passband_rate;
    for (std::size_t n = 0; n < passband.size(); ++n)
        mixed[n] = passband[n] * std::polar(1.0, -w * static_cast<double>(n));

    const auto h = demod_lowpass(params, passband_rate);
    const auto delay = static_cast<std::ptrdiff_t>((h.size() - 1) / 2);
    const auto len = static_cast<std::ptrdiff_t>(mixed.size());
    CMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        const auto centre = static_cast<std::ptrdiff_t>(i * decim) + delay;
        cplx acc{};
        for (std::size_t k = 0; k < h.size(); ++k) {
            const auto idx = centre - static_cast<std::ptrdiff_t>(k);
            if (idx >= 0 && idx < len) acc += h[k] * mixed[static_cast<std::size_t>(idx)];
        }
        out.data()[i] = acc;
    }
    return out;
}

CMatrix matched_filter(const CMatrix& frame, const waveform::PulseSamples& reference) {
    if (reference.samples.empty()) throw DataError("empty matched-filter reference");
    if (frame.rows() == 0 || frame.cols() == 0) throw DataError("empty frame");
    const std::size_t n = std::bit_ceil(frame.size() + reference.samples.size() - 1);
    const auto spectrum = reference_spectrum(reference, n);
    return compress_with(frame, spectrum, reference.samples.size());
}

CMatrix matched_filter_direct(const CMatrix& frame, const waveform::PulseSamples& reference) {
    const std::size_t len = reference.samples.size();
    if (len == 0) throw DataError("empty matched-filter reference");
    // Correlating against q = reverse(conj(h)) is convolving with h.
    std::vector<cplx> q(reference.samples.rbegin(), reference.samples.rend());
    for (auto& v : q) v = std::conj(v);
    std::vector<cplx> stream(frame.size() + len, cplx{});
    std::copy(frame.data().begin(), frame.data().end(), stream.begin());

    CMatrix out(frame.rows(), frame.cols());
    for (std::size_t i = 0; i < frame.size(); ++i)
        out.data()[i] = simd::complex_dot_conj(std::span<const cplx>(stream.data() + i, len), q);
    return out;
}

namespace {

// Windowed, zero-padded slow-time FFT of every ROI column. Output is
// column-major (n values per range column), not yet shifted. Reuses
// per-thread scratch so the per-frame path does not allocate.
const std::vector<cplx>& slow_time_fft(const CMatrix& profiles, const FrameParams& params) {
    const std::size_t pulses = params.pulses_per_frame;
    const std::size_t n = params.fft_points;
    const std::size_t cols = params.range_bins;
    const std::size_t roi = params.roi_start_bin;
    if (profiles.rows() != pulses || profiles.cols() < roi + cols) throw DataError("profile shape does not match params");

    thread_local std::vector<double> window;
    thread_local std::vector<cplx> buf, raw;
    if (window.size() != pulses) window = slow_time_window(pulses);
    // Only the first `pulses` entries of each column are ever written and the
    // plan preserves its input, so the zero padding survives between frames.
    thread_local std::size_t filled = 0;
    if (buf.size() != n * cols || filled != pulses) {
        buf.assign(n * cols, cplx{});
        filled = pulses;
    }
    raw.resize(n * cols);
    for (std::size_t m = 0; m < pulses; ++m) {
        const cplx* src = profiles.row(m) + roi;
        for (std::size_t j = 0; j < cols; ++j) buf[j * n + m] = src[j] * window[m];
    }
    // e^{+j} kernel so that a positive range rate lands above the centre row.
    FftPlan(n, FftDirection::backward, cols, 1, n).execute(buf.data(), raw.data());
    return raw;
}

// Doppler-major, centre-shifted copy of a column-major spectrum.
template <typename T>
void shift_transpose(const T* src, std::size_t n, std::size_t cols, T* dst) {
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < cols; ++j) {
        const T* col = src + j * n;
        for (std::size_t b = 0; b < n - half; ++b) dst[b * cols + j] = col[b + half];
        for (std::size_t b = n - half; b < n; ++b) dst[b * cols + j] = col[b - (n - half)];
    }
}

}  // namespace

CMatrix doppler_spectrum(const CMatrix& profiles, const FrameParams& params) {
    const auto& raw = slow_time_fft(profiles, params);
    CMatrix out(params.fft_points, params.range_bins);
    shift_transpose(raw.data(), params.fft_points, params.range_bins, out.data().data());
    return out;
}

RangeDopplerImage doppler_fft(const CMatrix& profiles, const FrameParams& params, std::size_t frame_index) {
    const auto& raw = slow_time_fft(profiles, params);
    thread_local std::vector<double> pw;
    pw.resize(raw.size());
    simd::power(raw, pw);
    RangeDopplerImage img;
    img.doppler_bins = params.fft_points;
    img.range_bins = params.range_bins;
    img.power.resize(pw.size());
    shift_transpose(pw.data(), params.fft_points, params.range_bins, img.power.data());
    img.velocity_axis = velocity_axis(params);
    img.range_axis = range_axis(params);
    img.frame_index = frame_index;
    return img;
}

Processor::Processor(const FrameParams& params)
    : params_(validate(params)),
      reference_(waveform::matched_reference(waveform::chirp_pulse(params))),
      fft_size_(convolution_fft_size(params, reference_.samples.size())),
      reference_spectrum_(reference_spectrum(reference_, fft_size_)) {}

CMatrix Processor::compress(const CMatrix& frame) const {
    check_frame_shape(frame, params_);
    return compress_with(frame, reference_spectrum_, reference_.samples.size());
}

RangeDopplerImage Processor::process_frame(const CMatrix& frame, std::size_t frame_index) const {
    return doppler_fft(compress(frame), params_, frame_index);
}

RdCube process_recording(const echosim::Recording& rec, const Processor& processor) {
    if (!(rec.params == processor.params())) throw DataError("recording params differ from processor params");
    RdCube cube;
    cube.params = rec.params;
    cube.label = rec.label;
    cube.subject = rec.subject;
    cube.images.reserve(rec.frames.size());
    for (std::size_t f = 0; f < rec.frames.size(); ++f) cube.images.push_back(processor.process_frame(rec.frames[f], f));
    return cube;
}

RdCube process_recording(const echosim::Recording& rec) { return process_recording(rec, Processor(rec.params)); }

}  // namespace hug::rdproc
