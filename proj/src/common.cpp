#include "hug/common.hpp"

#include <array>

namespace hug {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::string out = "invalid params:";
    for (const auto& s : v) {
        out += ' ';
        out += s;
        out += ';';
    }
    return out;
}

constexpr std::array<std::string_view, kClassCount> kClassNames = {
    "no-finger", "finger-press", "button-on", "button-off", "motion-up", "motion-down", "screw",
};

}  // namespace

InvalidParams::InvalidParams(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

FormatError::FormatError(const std::string& what, std::uint64_t offset)
    : DataError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

std::string_view class_name(GestureClass c) { return kClassNames.at(class_index(c)); }

std::optional<GestureClass> parse_class(std::string_view name) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (kClassNames[i] == name) return static_cast<GestureClass>(i);
    }
    // The gesture list elsewhere calls button-off "button down".
    if (name == "button-down") return GestureClass::button_off;
    return std::nullopt;
}

GestureClass class_from_index(std::size_t index) {
    if (index >= kClassCount) throw DataError("gesture label out of range: " + std::to_string(index));
    return static_cast<GestureClass>(index);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace hug
