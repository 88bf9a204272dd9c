#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hug/common.hpp"
#include "hug/tracker.hpp"

namespace hug::symbolizer {

using Symbol = std::uint32_t;

/// Canonical key of a feature vector: its (state, vclass, rclass) tuples
/// sorted, rendered as "(s,v,r)(s,v,r)...". The empty vector is "-".
std::string canonical_key(const tracker::FeatureVector& fv);
/// Inverse of canonical_key, up to the canonical ordering.
tracker::FeatureVector decode_key(const std::string& key);

class SymbolDictionary {
public:
    SymbolDictionary() = default;

    /// Symbols for every distinct key, in first-seen order over the given
    /// sequences, then UNK. Throws DataError on an empty training set.
    static SymbolDictionary build(std::span<const tracker::FeatureSequence> training);

    std::size_t alphabet_size() const noexcept { return keys_.size() + 1; }
    Symbol unk() const noexcept { return static_cast<Symbol>(keys_.size()); }

    /// Symbol of a key, or UNK.
    Symbol lookup(const std::string& key) const;
    Symbol encode(const tracker::FeatureVector& fv) const { return lookup(canonical_key(fv)); }
    /// Key of a symbol; "<UNK>" for UNK. Throws DataError when out of range.
    const std::string& key(Symbol s) const;

    /// FNV-1a 64 of the serialized form; ties models to the dictionary they were trained on.
    std::uint64_t hash() const;

    void write(std::ostream& os) const;
    static SymbolDictionary read(std::istream& is);

    bool operator==(const SymbolDictionary& o) const { return keys_ == o.keys_; }

private:
    std::vector<std::string> keys_;
    std::map<std::string, Symbol> index_;

    void add(const std::string& key);
};

struct SymbolSequence {
    std::vector<Symbol> symbols;
    GestureClass label = GestureClass::no_finger;
    std::uint16_t subject = 0;

    std::size_t length() const noexcept { return symbols.size(); }
};

SymbolSequence symbolize(const tracker::FeatureSequence& x, const SymbolDictionary& dict);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace hug::symbolizer
