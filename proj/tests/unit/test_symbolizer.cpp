#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "hug/symbolizer.hpp"

using namespace hug;
using namespace hug::symbolizer;
using tracker::FeatureEntry;
using tracker::FeatureVector;
using tracker::StateCode;

namespace {

FeatureVector random_vector(std::mt19937& rng) {
    FeatureVector fv;
    const int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
        FeatureEntry e;
        e.code = static_cast<StateCode>(rng() % 9);  // anything but deleted
        e.velocity_class = static_cast<std::int8_t>(static_cast<int>(rng() % 5) - 2);
        e.range_class = static_cast<std::uint8_t>(rng() % 3);
        fv.entries.push_back(e);
    }
    return fv;
}

}  // namespace

TEST_SUITE("symbolizer") {

TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("canonical key ignores track order") {
    FeatureVector a{{{StateCode::dynamic_locked, -2, 2}, {StateCode::static_locked, 0, 1}}};
    FeatureVector b{{a.entries[1], a.entries[0]}};
    CHECK(canonical_key(a) == canonical_key(b));
    CHECK(canonical_key(a) == "(1,0,1)(3,-2,2)");
    CHECK(canonical_key({}) == "-");
    CHECK(decode_key("-").entries.empty());
}

TEST_CASE("decode inverts the key up to ordering") {
    std::mt19937 rng(5);
    for (int i = 0; i < 500; ++i) {
        const auto fv = random_vector(rng);
        auto sorted = fv.entries;
        std::sort(sorted.begin(), sorted.end());
        CHECK(decode_key(canonical_key(fv)).entries == sorted);
        auto shuffled = fv;
        std::shuffle(shuffled.entries.begin(), shuffled.entries.end(), rng);
        CHECK(canonical_key(shuffled) == canonical_key(fv));
    }
    CHECK_THROWS_AS(decode_key("(1,0,1)junk"), DataError);
    CHECK_THROWS_AS(decode_key("(1,0)"), DataError);
}

TEST_CASE("dictionary assigns symbols in first-seen order with UNK last") {
    const FeatureVector empty;
    const FeatureVector one{{{StateCode::static_locked, 0, 1}}};
    const FeatureVector two{{{StateCode::dynamic_locked, 1, 0}, {StateCode::static_locked, 0, 1}}};
    const std::vector<tracker::FeatureSequence> train{{empty, one, one}, {two, empty}};
    const auto d = SymbolDictionary::build(train);
    CHECK(d.alphabet_size() == 4);
    CHECK(d.unk() == 3);
    CHECK(d.encode(empty) == 0);
    CHECK(d.encode(one) == 1);
    CHECK(d.encode(two) == 2);
    const FeatureVector unseen{{{StateCode::ended, 2, 2}}};
    CHECK(d.encode(unseen) == d.unk());
    CHECK(d.key(1) == "(1,0,1)");
    CHECK(d.key(d.unk()) == "<UNK>");
    CHECK_THROWS_AS(d.key(17), DataError);
    const auto s = symbolize({one, unseen, two}, d);
    CHECK(s.symbols == std::vector<Symbol>{1, 3, 2});
    CHECK_THROWS_AS(SymbolDictionary::build(std::span<const tracker::FeatureSequence>{}), DataError);
}

TEST_CASE("dictionary serialisation and hash") {
    std::mt19937 rng(9);
    std::vector<tracker::FeatureSequence> train(5);
    for (auto& seq : train)
        for (int i = 0; i < 40; ++i) seq.push_back(random_vector(rng));
    const auto d = SymbolDictionary::build(train);
    std::ostringstream os;
    d.write(os);
    const std::string text = os.str();
    CHECK(text.rfind("HUGD 1\nalphabet " + std::to_string(d.alphabet_size()) + "\n0 ", 0) == 0);
    std::istringstream is(text);
    const auto back = SymbolDictionary::read(is);
    CHECK(back == d);
    CHECK(back.hash() == d.hash());
    CHECK(d.hash() == fnv1a64(text));

    auto train2 = train;
    std::swap(train2[0], train2[1]);
    const auto d2 = SymbolDictionary::build(train2);
    CHECK(d2.alphabet_size() == d.alphabet_size());
    CHECK(d2.hash() != d.hash());

    auto rejects = [](const std::string& s) {
        std::istringstream in(s);
        CHECK_THROWS_AS(SymbolDictionary::read(in), DataError);
    };
    rejects("HUGX 1\nalphabet 1\n");
    rejects("HUGD 2\nalphabet 1\n");
    rejects("HUGD 1\nalphabet 3\n0 -\n");
    rejects("HUGD 1\nalphabet 3\n0 -\n2 (1,0,1)\n");
    rejects("HUGD 1\nalphabet 3\n0 -\n1 -\n");
    rejects("HUGD 1\nalphabet 2\n0 (1,9,1)\n");
}

}
