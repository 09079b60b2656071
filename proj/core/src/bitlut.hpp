#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace vc {

// Bit permutation with XOR mask, evaluated one byte at a time.
// Each pair moves source bit `first` to destination bit `second` (both from the LSB).
class BitLut {
 public:
  BitLut() = default;
  BitLut(unsigned src_bits, const std::vector<std::pair<unsigned, unsigned>>& pairs, std::uint64_t xor_mask)
      : chunks_((src_bits + 7) / 8), tables_(chunks_ * 256, 0), mask_(xor_mask) {
    for (auto [s, d] : pairs) {
      const unsigned c = s / 8, bit = s % 8;
      for (unsigned v = 0; v < 256; ++v)
        if ((v >> bit) & 1) tables_[c * 256 + v] |= std::uint64_t{1} << d;
    }
  }

  std::uint64_t operator()(std::uint64_t x) const {
    std::uint64_t out = mask_;
    for (unsigned c = 0; c < chunks_; ++c) out ^= tables_[c * 256 + ((x >> (8 * c)) & 255)];
    return out;
  }

 private:
  unsigned chunks_ = 0;
  std::vector<std::uint64_t> tables_;
  std::uint64_t mask_ = 0;
};

}  // namespace vc
