#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "hug/hmm.hpp"

namespace hug::io {

// "HUGM" model bank: a text header terminated by a line "data", then raw
// little-endian f64: priors, then per class pi (K), A (K*K), phi (K*V).
//   HUGM 1
//   classes 7
//   alphabet V
//   dictionary_hash 0x0123456789abcdef
//   iterations 10
//   smoothing 0.001
//   seed 0
//   fold 3
//   class 0 no-finger 6
//   ...
//   data
inline constexpr int kBankVersion = 1;

void write_bank(std::ostream& os, const hmm::ClassifierBank& bank);
hmm::ClassifierBank read_bank(std::istream& is);
void save_bank(const std::filesystem::path& path, const hmm::ClassifierBank& bank);
hmm::ClassifierBank load_bank(const std::filesystem::path& path);

}  // namespace hug::io
