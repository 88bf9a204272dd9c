#include <doctest.h>

#include <cstring>
#include <sstream>

#include "hug/bank_io.hpp"
#include "hug/binary_io.hpp"
#include "hug/cube_io.hpp"
#include "hug/echosim.hpp"
#include "hug/hmm.hpp"
#include "hug/recording_io.hpp"
#include "support.hpp"

using namespace hug;

namespace {

echosim::Recording small_recording() {
    const FrameParams p = shipped_params();
    auto script = echosim::script_gesture(GestureClass::motion_down, 5, 6, p);
    script.frames.resize(4);
    echosim::RenderOptions o;
    o.noise_seed = 8;
    auto rec = echosim::render_echo(script, p, o);
    rec.subject = 7;
    return rec;
}

std::string bytes_of(const echosim::Recording& rec) {
    std::ostringstream os;
    io::write_recording(os, rec);
    return os.str();
}

hmm::ClassifierBank small_bank() {
    hmm::ClassifierBank bank;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        auto m = hmm::init_model(3, 5, 100 + c);
        m.gesture = class_from_index(c);
        m.dictionary_hash = 0xABCDEF0123456789ull;
        bank.models.push_back(m);
    }
    bank.priors = hmm::uniform_priors(kClassCount);
    bank.dictionary_hash = 0xABCDEF0123456789ull;
    bank.alphabet = 5;
    bank.iterations = 10;
    bank.smoothing = 1e-3;
    bank.seed = 42;
    bank.fold = "3";
    return bank;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("recording round trip through f32") {
    auto rec = small_recording();
    const std::string bytes = bytes_of(rec);
    CHECK(bytes.size() == io::kRecordingHeaderBytes + 4 * io::frame_bytes(rec.params));
    CHECK(bytes.compare(0, 4, "HUGR") == 0);
    std::istringstream is(bytes);
    const auto back = io::read_recording(is);
    io::quantize_to_f32(rec);
    CHECK(back.frames == rec.frames);
    CHECK(back.params == rec.params);
    CHECK(back.label == GestureClass::motion_down);
    CHECK(back.subject == 7);
    CHECK(bytes_of(back) == bytes);
}

TEST_CASE("recording format errors name the byte offset") {
    const std::string good = bytes_of(small_recording());
    {
        std::string bad = good;
        bad[0] = 'X';
        std::istringstream is(bad);
        try {
            io::read_recording(is);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 0);
        }
    }
    {
        std::string bad = good;
        bad[4] = 9;
        std::istringstream is(bad);
        try {
            io::read_recording(is);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 4);
        }
    }
    {
        std::string bad = good;
        bad[io::kRecordingHeaderBytes - 3] = 42;  // label byte
        std::istringstream is(bad);
        try {
            io::read_recording(is);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == io::kRecordingHeaderBytes - 3);
        }
    }
    {
        const std::string cut = good.substr(0, good.size() - 100);
        std::istringstream is(cut);
        CHECK_THROWS_AS(io::read_recording(is), FormatError);
    }
    {
        std::string bad = good;
        const std::uint32_t huge = 0xFFFFFFF0u;
        std::memcpy(bad.data() + io::kRecordingHeaderBytes - 7, &huge, 4);  // frame count
        std::istringstream is(bad);
        CHECK_THROWS_AS(io::read_recording(is), FormatError);
    }
    {
        std::string bad = good;
        const double zero = 0.0;
        std::memcpy(bad.data() + 6 + 16, &zero, 8);  // bandwidth
        std::istringstream is(bad);
        CHECK_THROWS_AS(io::read_recording(is), FormatError);
    }
    CHECK_THROWS_AS(io::load_recording("/nonexistent/x.hugr"), DataError);
}

TEST_CASE("frames stream one at a time") {
    const auto rec = small_recording();
    std::ostringstream os;
    io::write_recording_header(os, {rec.params, io::kUnboundedFrames, rec.label, rec.subject});
    for (const auto& f : rec.frames) io::write_frame(os, f);
    std::istringstream is(os.str());
    io::BinaryReader r(is);
    const auto h = io::read_recording_header(r);
    CHECK(h.frame_count == io::kUnboundedFrames);
    CHECK(r.offset() == io::kRecordingHeaderBytes);
    CMatrix f;
    std::size_t n = 0;
    while (io::read_frame(r, h.params, f)) ++n;
    CHECK(n == 4);
    std::istringstream again(os.str());
    CHECK_THROWS_AS(io::read_recording(again), FormatError);
}

TEST_CASE("cube round trip and PGM export") {
    const auto rec = small_recording();
    const auto cube = rdproc::process_recording(rec);
    std::ostringstream os;
    io::write_cube(os, cube);
    std::istringstream is(os.str());
    const auto back = io::read_cube(is);
    REQUIRE(back.images.size() == cube.images.size());
    CHECK(back.params == cube.params);
    for (std::size_t f = 0; f < cube.images.size(); ++f) {
        CHECK(back.images[f].frame_index == f);
        CHECK(back.images[f].velocity_axis == cube.images[f].velocity_axis);
        for (std::size_t i = 0; i < cube.images[f].power.size(); i += 97)
            CHECK(back.images[f].power[i] == static_cast<double>(static_cast<float>(cube.images[f].power[i])));
    }
    std::string bad = os.str();
    bad.resize(bad.size() - 1);
    std::istringstream cut(bad);
    CHECK_THROWS_AS(io::read_cube(cut), FormatError);

    std::ostringstream pgm;
    io::write_pgm(pgm, cube.images[0]);
    const std::string header = "P5\n180 256\n65535\n";
    CHECK(pgm.str().compare(0, header.size(), header) == 0);
    CHECK(pgm.str().size() == header.size() + 180 * 256 * 2);
    // The brightest pixel maps to full scale.
    const std::string body = pgm.str().substr(header.size());
    std::size_t full = 0;
    for (std::size_t i = 0; i + 1 < body.size(); i += 2)
        full += static_cast<unsigned char>(body[i]) == 0xFF && static_cast<unsigned char>(body[i + 1]) == 0xFF;
    CHECK(full >= 1);
    CHECK_THROWS_AS(io::write_pgm(pgm, rdproc::RangeDopplerImage{}), DataError);
}

TEST_CASE("model bank round trip") {
    const auto bank = small_bank();
    std::ostringstream os;
    io::write_bank(os, bank);
    const std::string bytes = os.str();
    CHECK(bytes.rfind("HUGM 1\nclasses 7\nalphabet 5\ndictionary_hash 0xabcdef0123456789\n", 0) == 0);
    std::istringstream is(bytes);
    const auto back = io::read_bank(is);
    CHECK(back == bank);
    std::ostringstream again;
    io::write_bank(again, back);
    CHECK(again.str() == bytes);
}

TEST_CASE("model bank corruption is rejected") {
    std::ostringstream os;
    io::write_bank(os, small_bank());
    const std::string bytes = os.str();
    auto rejects = [](const std::string& s) {
        std::istringstream is(s);
        CHECK_THROWS_AS(io::read_bank(is), DataError);
    };
    rejects(bytes + "x");
    rejects(bytes.substr(0, bytes.size() - 8));
    rejects("HUGX 1\n" + bytes.substr(7));
    std::string bad = bytes;
    const double nan = std::nan("");
    std::memcpy(bad.data() + bad.size() - 8, &nan, 8);
    rejects(bad);
    bad = bytes;
    const double two = 2.0;
    std::memcpy(bad.data() + bad.find("data\n") + 5, &two, 8);
    rejects(bad);
    CHECK_THROWS_AS(io::load_bank("/nonexistent/bank.hugm"), DataError);
}

}
