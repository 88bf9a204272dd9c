#include "hug/symbolizer.hpp"

#include <algorithm>
#include <sstream>

namespace hug::symbolizer {

namespace {

constexpr const char* kMagic = "HUGD";
constexpr int kVersion = 1;
const std::string kUnkKey = "<UNK>";

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string canonical_key(const tracker::FeatureVector& fv) {
    if (fv.entries.empty()) return "-";
    auto entries = fv.entries;
    std::sort(entries.begin(), entries.end());
    tracker::FeatureVector sorted{std::move(entries)};
    return tracker::format_feature_vector(sorted);
}

tracker::FeatureVector decode_key(const std::string& key) {
    if (key == "-") return {};
    // Reuse the feature line parser: "0 n (..)(..)" with spaces between entries.
    std::string spaced;
    std::size_t n = 0;
    for (char c : key) {
        if (c == '(') {
            spaced += ' ';
            ++n;
        }
        spaced += c;
    }
    std::istringstream is("0 " + std::to_string(n) + spaced);
    auto seq = tracker::read_features(is);
    if (seq.size() != 1) throw DataError("bad dictionary key '" + key + "'");
    return seq[0];
}

void SymbolDictionary::add(const std::string& key) {
    if (index_.count(key)) return;
    index_.emplace(key, static_cast<Symbol>(keys_.size()));
    keys_.push_back(key);
}

SymbolDictionary SymbolDictionary::build(std::span<const tracker::FeatureSequence> training) {
    if (training.empty()) throw DataError("cannot build a dictionary from an empty training set");
    SymbolDictionary d;
    for (const auto& seq : training) {
        for (const auto& fv : seq) d.add(canonical_key(fv));
    }
    return d;
}

Symbol SymbolDictionary::lookup(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? unk() : it->second;
}

const std::string& SymbolDictionary::key(Symbol s) const {
    if (s == unk()) return kUnkKey;
    if (s > unk()) throw DataError("symbol " + std::to_string(s) + " out of range");
    return keys_[s];
}

std::uint64_t SymbolDictionary::hash() const {
    std::ostringstream os;
    write(os);
    return fnv1a64(os.str());
}

void SymbolDictionary::write(std::ostream& os) const {
    os << kMagic << ' ' << kVersion << '\n';
    os << "alphabet " << alphabet_size() << '\n';
    for (std::size_t i = 0; i < keys_.size(); ++i) os << i << ' ' << keys_[i] << '\n';
}

SymbolDictionary SymbolDictionary::read(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != kMagic) throw DataError("not a symbol dictionary");
    if (version != kVersion) throw DataError("unsupported dictionary version " + std::to_string(version));
    std::string word;
    std::size_t alphabet = 0;
    if (!(is >> word >> alphabet) || word != "alphabet" || alphabet == 0) throw DataError("bad dictionary header");
    SymbolDictionary d;
    for (std::size_t i = 0; i + 1 < alphabet; ++i) {
        std::size_t id = 0;
        std::string key;
        if (!(is >> id >> key)) throw DataError("dictionary truncated at entry " + std::to_string(i));
        if (id != i) throw DataError("dictionary ids are not dense at entry " + std::to_string(i));
        if (key != "-") decode_key(key);  // validates
        if (d.index_.count(key)) throw DataError("duplicate dictionary key '" + key + "'");
        d.add(key);
    }
    return d;
}

SymbolSequence symbolize(const tracker::FeatureSequence& x, const SymbolDictionary& dict) {
    SymbolSequence s;
    s.symbols.reserve(x.size());
    for (const auto& fv : x) s.symbols.push_back(dict.encode(fv));
    return s;
}

}  // namespace hug::symbolizer
