#include "hug/tracker.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hug/simd.hpp"

namespace hug::tracker {

TrackerConfig default_config(const FrameParams& params) {
    const auto d = derive(params);
    TrackerConfig cfg;
    cfg.gate_range = 2.0 * d.range_resolution;
    cfg.gate_velocity = 3.0 * d.velocity_resolution;
    cfg.frame_period = params.frame_period();
    cfg.split_speed = d.velocity_resolution;
    cfg.stop_speed = d.velocity_resolution;
    cfg.slow_speed = d.velocity_resolution;
    cfg.fast_speed = 4.0 * d.velocity_resolution;
    cfg.roi_near = static_cast<double>(params.roi_start_bin) * d.range_bin_width;
    cfg.roi_far = static_cast<double>(params.roi_start_bin + params.range_bins) * d.range_bin_width;
    return cfg;
}

// ---------------------------------------------------------------------------
// Detection

namespace {

// Median of non-negative floats, whose bit patterns sort like their values:
// histogram on exponent plus 4 mantissa bits, then select inside the
// middle bucket(s).
double median_of(const std::vector<float>& v) {
    thread_local std::vector<std::uint32_t> hist;
    thread_local std::vector<float> bucket;
    hist.assign(1u << 12, 0);
    auto key = [](float x) { return std::bit_cast<std::uint32_t>(x) >> 19; };
    for (float x : v) ++hist[key(x)];
    const std::size_t n = v.size();
    const std::size_t lo_k = (n - 1) / 2, hi_k = n / 2;
    std::size_t below = 0;
    std::uint32_t b = 0;
    while (below + hist[b] <= lo_k) below += hist[b++];
    std::uint32_t e = b;
    std::size_t upto = below + hist[b];
    while (upto <= hi_k) upto += hist[++e];
    bucket.clear();
    for (float x : v) {
        const auto kx = key(x);
        if (kx >= b && kx <= e) bucket.push_back(x);
    }
    auto lo = bucket.begin() + static_cast<std::ptrdiff_t>(lo_k - below);
    std::nth_element(bucket.begin(), lo, bucket.end());
    if (lo_k == hi_k) return *lo;
    return 0.5 * (static_cast<double>(*lo) + *std::min_element(lo + 1, bucket.end()));
}

struct Basin {
    std::size_t peak_index;
    double peak;
    std::size_t size;
    std::size_t parent;  // union-find over basin ids
};

std::size_t find_root(std::vector<Basin>& b, std::size_t i) {
    while (b[i].parent != i) {
        b[i].parent = b[b[i].parent].parent;
        i = b[i].parent;
    }
    return i;
}

}  // namespace

double noise_threshold(const rdproc::RangeDopplerImage& image, const TrackerConfig& cfg) {
    if (image.power.empty()) return cfg.absolute_floor;
    thread_local std::vector<float> mag;
    mag.resize(image.power.size());
    simd::magnitude_f32(image.power, mag);
    const double med = median_of(mag);
    for (auto& m : mag) m = static_cast<float>(std::abs(static_cast<double>(m) - med));
    const double mad = median_of(mag);
    const double t = med + cfg.mad_k * mad;
    return std::max(t * t, cfg.absolute_floor);
}

std::vector<Detection> detect(const rdproc::RangeDopplerImage& image, const TrackerConfig& cfg) {
    const std::size_t rows = image.doppler_bins;
    const std::size_t cols = image.range_bins;
    const auto& P = image.power;
    if (rows == 0 || cols == 0 || P.size() != rows * cols) return {};

    const double pmax = *std::max_element(P.begin(), P.end());
    const double threshold =
        std::max(noise_threshold(image, cfg), pmax * std::pow(10.0, -cfg.dynamic_range_db / 10.0));
    if (!(pmax >= threshold)) return {};

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i] >= threshold) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return P[a] != P[b] ? P[a] > P[b] : a < b;
    });

    // Watershed by descending level; a basin meeting a higher one is absorbed
    // unless its peak stands out from the meeting level by the prominence ratio.
    const double prominence = std::pow(10.0, cfg.prominence_db / 10.0);
    constexpr std::uint32_t kUnlabeled = 0xFFFFFFFFu;
    std::vector<std::uint32_t> label(P.size(), kUnlabeled);
    std::vector<Basin> basins;
    std::vector<std::size_t> roots;
    for (std::size_t idx : order) {
        const std::size_t r = idx / cols, c = idx % cols;
        roots.clear();
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const auto nr = static_cast<std::ptrdiff_t>(r) + dr;
                const auto nc = static_cast<std::ptrdiff_t>(c) + dc;
                if (nr < 0 || nc < 0 || nr >= static_cast<std::ptrdiff_t>(rows) ||
                    nc >= static_cast<std::ptrdiff_t>(cols))
                    continue;
                const auto n = static_cast<std::size_t>(nr) * cols + static_cast<std::size_t>(nc);
                if (label[n] == kUnlabeled) continue;
                const std::size_t root = find_root(basins, label[n]);
                if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
            }
        }
        if (roots.empty()) {
            label[idx] = static_cast<std::uint32_t>(basins.size());
            basins.push_back({idx, P[idx], 1, basins.size()});
            continue;
        }
        std::size_t main = roots[0];
        for (std::size_t root : roots) {
            const auto& b = basins[root];
            const auto& m = basins[main];
            if (b.peak > m.peak || (b.peak == m.peak && b.peak_index < m.peak_index)) main = root;
        }
        label[idx] = static_cast<std::uint32_t>(main);
        basins[main].size += 1;
        for (std::size_t root : roots) {
            if (root == main) continue;
            if (basins[root].peak < prominence * P[idx]) {
                basins[root].parent = main;
                basins[main].size += basins[root].size;
            }
        }
    }

    // Intensity-weighted centroid over each basin's core.
    struct Moments {
        double w = 0.0, wr = 0.0, wc = 0.0;
    };
    std::vector<Moments> mom(basins.size());
    const double core = std::pow(10.0, -cfg.core_db / 10.0);
    for (std::size_t idx : order) {
        const std::size_t root = find_root(basins, label[idx]);
        if (P[idx] < core * basins[root].peak) continue;
        auto& m = mom[root];
        m.w += P[idx];
        m.wr += P[idx] * static_cast<double>(idx / cols);
        m.wc += P[idx] * static_cast<double>(idx % cols);
    }

    std::vector<Detection> found;
    for (std::size_t b = 0; b < basins.size(); ++b) {
        if (basins[b].parent != b) continue;
        if (basins[b].size < cfg.min_extent || mom[b].w <= 0.0) continue;
        Detection d;
        d.doppler_bin = mom[b].wr / mom[b].w;
        d.range_bin = mom[b].wc / mom[b].w;
        d.intensity = basins[b].peak;
        d.extent = basins[b].size;
        found.push_back(d);
    }
    // Merge regions whose centroids coincide.
    std::sort(found.begin(), found.end(), [](const Detection& a, const Detection& b) { return a.intensity > b.intensity; });
    std::vector<Detection> merged;
    for (const auto& d : found) {
        bool absorbed = false;
        for (auto& m : merged) {
            const double dr = d.range_bin - m.range_bin, dd = d.doppler_bin - m.doppler_bin;
            if (std::hypot(dr, dd) <= cfg.merge_radius_bins) {
                const double wa = m.intensity, wb = d.intensity;
                m.range_bin = (wa * m.range_bin + wb * d.range_bin) / (wa + wb);
                m.doppler_bin = (wa * m.doppler_bin + wb * d.doppler_bin) / (wa + wb);
                m.extent += d.extent;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(d);
    }

    auto interp = [](const std::vector<double>& axis, double pos) {
        if (axis.size() < 2) return axis.empty() ? pos : axis[0];
        const double step = axis[1] - axis[0];
        return axis[0] + step * pos;
    };
    for (auto& d : merged) {
        d.range = interp(image.range_axis, d.range_bin);
        d.velocity = interp(image.velocity_axis, d.doppler_bin);
    }
    std::sort(merged.begin(), merged.end(), [](const Detection& a, const Detection& b) {
        return a.range != b.range ? a.range < b.range : a.velocity < b.velocity;
    });
    return merged;
}

// ---------------------------------------------------------------------------
// State machine

namespace {

constexpr std::array<std::string_view, kStateCodeCount> kLabels = {"new", "0", "-1", "-2", "1",
                                                                   "2",   "3", "4",  "8",  "del"};

TrackState on_match(TrackState s, double speed, const TrackerConfig& cfg) {
    const bool dynamic = speed >= cfg.split_speed;
    const bool slow = speed < cfg.stop_speed;
    s.matches += 1;
    switch (s.code) {
        case StateCode::fresh:
        case StateCode::uncertain:
            if (s.matches >= cfg.confirm_frames) {
                s.code = dynamic ? StateCode::dynamic_locked : StateCode::static_locked;
            } else {
                s.code = StateCode::uncertain;
            }
            break;
        case StateCode::static_locked:
            s.code = dynamic ? StateCode::to_dynamic : StateCode::static_locked;
            break;
        case StateCode::to_dynamic:
            s.code = dynamic ? StateCode::dynamic_locked : StateCode::static_locked;
            break;
        case StateCode::dynamic_locked:
        case StateCode::to_static:
            if (!slow) {
                s.code = StateCode::dynamic_locked;
                s.stop_count = 0;
                break;
            }
            s.stop_count += 1;
            if (s.stop_count >= cfg.stop_frames) {
                s.code = StateCode::ended;
                s.stop_count = 0;
                s.hold_count = 0;
            } else {
                s.code = StateCode::to_static;
            }
            break;
        case StateCode::ended:
            if (!slow) {
                s.code = StateCode::dynamic_locked;
                s.hold_count = 0;
                break;
            }
            s.hold_count += 1;
            if (s.hold_count >= cfg.hold_frames) {
                s.code = StateCode::static_locked;
                s.hold_count = 0;
            }
            break;
        default:
            break;
    }
    return s;
}

}  // namespace

std::string_view code_label(StateCode code) {
    const auto i = static_cast<std::size_t>(code);
    return i < kLabels.size() ? kLabels[i] : std::string_view("?");
}

std::optional<StateCode> parse_code(std::string_view label) {
    for (std::size_t i = 0; i < kLabels.size(); ++i) {
        if (kLabels[i] == label) return static_cast<StateCode>(i);
    }
    return std::nullopt;
}

TrackEvent TrackEvent::match(double velocity) { return {true, std::abs(velocity)}; }

TrackState advance(const TrackState& state, const TrackEvent& event, const TrackerConfig& cfg) {
    TrackState s = state;
    if (s.code == StateCode::deleted) return s;
    s.age += 1;

    if (!event.matched) {
        if (s.code == StateCode::fresh) {
            s.code = StateCode::deleted;
            return s;
        }
        if (s.frames_missing == 0) s.resume = s.code;
        s.frames_missing += 1;
        switch (s.frames_missing) {
            case 1: s.code = StateCode::uncertain; break;
            case 2: s.code = StateCode::missing1; break;
            case 3: s.code = StateCode::missing2; break;
            default:
                s.code = StateCode::deleted;
                s.frames_missing = 0;
                break;
        }
        return s;
    }

    if (s.frames_missing > 0) {
        s.code = s.resume;
        s.frames_missing = 0;
    }
    return on_match(s, event.speed, cfg);
}

// ---------------------------------------------------------------------------
// Association

int velocity_class(double v, const TrackerConfig& cfg) {
    if (v <= -cfg.fast_speed) return -2;
    if (v <= -cfg.slow_speed) return -1;
    if (v < cfg.slow_speed) return 0;
    if (v < cfg.fast_speed) return 1;
    return 2;
}

int range_class(double r, const TrackerConfig& cfg) {
    const double third = (cfg.roi_far - cfg.roi_near) / 3.0;
    if (r < cfg.roi_near + third) return 0;
    if (r < cfg.roi_near + 2.0 * third) return 1;
    return 2;
}

StepResult step(const TrackSet& tracks, std::span<const Detection> detections, const TrackerConfig& cfg) {
    std::vector<Detection> dets(detections.begin(), detections.end());
    std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        return a.range != b.range ? a.range < b.range : a.velocity < b.velocity;
    });

    StepResult out;
    out.tracks.next_id = tracks.next_id;
    const auto& live = tracks.tracks;

    struct Pair {
        double dist2;
        std::size_t track;
        std::size_t det;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < live.size(); ++i) {
        const auto& t = live[i];
        if (t.code == StateCode::deleted) continue;
        const double lead = cfg.frame_period * static_cast<double>(t.frames_missing + 1);
        const double predicted = t.last.range + t.last.velocity * lead;
        for (std::size_t j = 0; j < dets.size(); ++j) {
            const double dr = (dets[j].range - predicted) / cfg.gate_range;
            const double dv = (dets[j].velocity - t.last.velocity) / cfg.gate_velocity;
            const double d2 = dr * dr + dv * dv;
            if (d2 <= 1.0) pairs.push_back({d2, i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        if (a.track != b.track) return a.track < b.track;
        return a.det < b.det;
    });
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> det_for(live.size(), kNone);
    std::vector<bool> det_used(dets.size(), false);
    for (const auto& p : pairs) {
        if (det_for[p.track] != kNone || det_used[p.det]) continue;
        det_for[p.track] = p.det;
        det_used[p.det] = true;
    }

    for (std::size_t i = 0; i < live.size(); ++i) {
        if (live[i].code == StateCode::deleted) continue;
        TrackState s;
        if (det_for[i] != kNone) {
            const auto& d = dets[det_for[i]];
            s = advance(live[i], TrackEvent::match(d.velocity), cfg);
            s.last = d;
        } else {
            s = advance(live[i], TrackEvent::miss(), cfg);
        }
        if (s.code != StateCode::deleted) out.tracks.tracks.push_back(s);
    }
    for (std::size_t j = 0; j < dets.size(); ++j) {
        if (det_used[j]) continue;
        TrackState s;
        s.track_id = out.tracks.next_id++;
        s.last = dets[j];
        out.tracks.tracks.push_back(s);
    }

    for (const auto& t : out.tracks.tracks) {
        out.features.entries.push_back({t.code, static_cast<std::int8_t>(velocity_class(t.last.velocity, cfg)),
                                        static_cast<std::uint8_t>(range_class(t.last.range, cfg))});
    }
    return out;
}

FeatureVector Tracker::push(const rdproc::RangeDopplerImage& image) {
    const auto dets = detect(image, cfg_);
    return push(dets);
}

FeatureVector Tracker::push(std::span<const Detection> detections) {
    auto r = step(tracks_, detections, cfg_);
    tracks_ = std::move(r.tracks);
    return std::move(r.features);
}

FeatureSequence track_recording(const rdproc::RdCube& cube, const TrackerConfig& cfg) {
    Tracker tr(cfg);
    FeatureSequence seq;
    seq.reserve(cube.images.size());
    for (const auto& img : cube.images) seq.push_back(tr.push(img));
    return seq;
}

// ---------------------------------------------------------------------------
// Text format

std::string format_feature_vector(const FeatureVector& fv) {
    std::string s;
    for (const auto& e : fv.entries) {
        s += '(';
        s += code_label(e.code);
        s += ',';
        s += std::to_string(static_cast<int>(e.velocity_class));
        s += ',';
        s += std::to_string(static_cast<int>(e.range_class));
        s += ')';
    }
    return s;
}

void write_features(std::ostream& os, const FeatureSequence& seq, std::string_view comment) {
    if (!comment.empty()) os << "# " << comment << '\n';
    for (std::size_t m = 0; m < seq.size(); ++m) {
        os << m << ' ' << seq[m].count();
        for (const auto& e : seq[m].entries) {
            os << " (" << code_label(e.code) << ',' << static_cast<int>(e.velocity_class) << ','
               << static_cast<int>(e.range_class) << ')';
        }
        os << '\n';
    }
}

FeatureSequence read_features(std::istream& is) {
    FeatureSequence seq;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw DataError("feature line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t m = 0, n = 0;
        if (!(ls >> m >> n)) fail("expected frame index and count");
        if (m != seq.size()) fail("frame index out of sequence");
        FeatureVector fv;
        std::string tok;
        while (ls >> tok) {
            if (tok.size() < 7 || tok.front() != '(' || tok.back() != ')') fail("bad entry '" + tok + "'");
            const std::string body = tok.substr(1, tok.size() - 2);
            const auto c1 = body.find(',');
            const auto c2 = body.find(',', c1 == std::string::npos ? c1 : c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos) fail("bad entry '" + tok + "'");
            const auto code = parse_code(body.substr(0, c1));
            if (!code || *code == StateCode::deleted) fail("bad state in '" + tok + "'");
            int vc = 0, rc = 0;
            try {
                std::size_t used = 0;
                const std::string vs = body.substr(c1 + 1, c2 - c1 - 1);
                vc = std::stoi(vs, &used);
                if (used != vs.size()) throw std::invalid_argument("v");
                const std::string rs = body.substr(c2 + 1);
                rc = std::stoi(rs, &used);
                if (used != rs.size()) throw std::invalid_argument("r");
            } catch (const std::logic_error&) {
                fail("bad class in '" + tok + "'");
            }
            if (vc < -2 || vc > 2 || rc < 0 || rc > 2) fail("class out of range in '" + tok + "'");
            fv.entries.push_back({*code, static_cast<std::int8_t>(vc), static_cast<std::uint8_t>(rc)});
        }
        if (fv.count() != n) fail("entry count does not match n_m");
        seq.push_back(std::move(fv));
    }
    return seq;
}

}  // namespace hug::tracker
