#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vc/gkr.hpp"

namespace vc {

// Carry-bit predicates, extended multilinearly from their truth tables.
// carry_bit_eval(i, k, c_in, c_out) is 1 on booleans iff c_out is the carry of i + k + c_in.
Fe carry_bit_eval(Fe i, Fe k, Fe c_in, Fe c_out);
// sum_bit_eval(i, k, c_in) is 1 on booleans iff i + k + c_in is odd.
Fe sum_bit_eval(Fe i, Fe k, Fe c_in);

// Bit vectors below are least-significant bit first. `k` may be shorter than `i`; missing
// bits are zero. c[j] is the carry out of position j, and the carry into position 0 is zero.
Fe carry_chain_eval(const Point& i, const Point& k, const Point& c);
// Sum bits of i + k under the carries c, LSB first.
Point sum_bits_eval(const Point& i, const Point& k, const Point& c);

// Sum-check over the subtraction layer V(i, k) = T[(i + k) mod n] - P[k], with
// text_bits = log n and pattern_bits = log m. Variables are interleaved per bit
// position j = 0, 1, ...: i_j, then k_j when j < pattern_bits, then c_j.
struct PatternLayerShape {
  unsigned text_bits = 0;
  unsigned pattern_bits = 0;
  unsigned num_vars() const { return 2 * text_bits + pattern_bits; }
  std::vector<unsigned> degrees() const;
};

struct PatternLayerPoint {
  Point i, k, c;  // LSB first
  Point text_point() const;     // point on T~, coordinate 0 most significant
  Point pattern_point() const;  // point on P~, coordinate 0 most significant
  Point gate_point() const;     // (i, k) as a layer label point
};
PatternLayerPoint split_pattern_point(const PatternLayerShape& shape, const Point& x);

// beta(z, (i, k)) * Phi(i, k, c) * (T~(sum bits) - P~(k)), evaluated densely.
Fe pattern_layer_polynomial(std::span<const Fe> text, std::span<const Fe> pattern, const Point& z, const Point& x);
SumcheckInstance pattern_layer_instance(std::span<const Fe> text, std::span<const Fe> pattern, const Point& z);
// Final check value given the two input claims.
Fe pattern_layer_expected(const PatternLayerShape& shape, const Point& z, const Point& x, Fe text_claim,
                          Fe pattern_claim);

class PatternLayerProver : public RoundProver {
 public:
  PatternLayerProver(std::span<const Fe> text, std::span<const Fe> pattern, const Point& z);
  RoundMessage round(unsigned j) override;
  void bind(Fe r) override;
  // (T~ at the text point, P~ at the pattern point) once every variable is bound.
  std::pair<Fe, Fe> claims() const { return {text_[0], pattern_[0]}; }
  const PatternLayerShape& shape() const { return shape_; }
  // Terms enumerated in each round so far.
  const std::vector<std::uint64_t>& live_terms() const { return live_; }
  std::uint64_t work() const { return work_; }

 private:
  enum class Slot { kI, kK, kC };
  Slot slot() const;
  void aggregate_suffix();
  RoundMessage carry_round();

  PatternLayerShape shape_;
  Point zi_, zk_;                 // LSB first
  std::vector<Fe> text_, pattern_;  // bit 0 of the index is the lowest unbound position
  unsigned pos_ = 0;              // current bit position
  unsigned round_ = 0;
  Fe prefix_ = Fe::one();         // beta and carry factors of bound positions
  Fe carry_in_;                   // bound carry into the current position
  Fe ri_, rk_;
  // Suffix aggregates for the current position, by carry-out bit.
  Fe text_lo_[2], text_hi_[2], pattern_lo_, pattern_hi_;
  std::vector<Fe> beta_i_, beta_k_;
  std::vector<std::uint64_t> live_;
  std::uint64_t work_ = 0;
};

struct PatternOptions {
  bool naive_layer_prover = false;  // brute-force prover for the subtraction layer
  GkrOptions gkr{};
};

// Cyclic occurrences of `pattern` in `text`; both lengths powers of two, m <= n.
std::uint64_t count_occurrences_naive(std::span<const Fe> text, std::span<const Fe> pattern);

ProveResult prove_patternmatch(std::span<const Fe> text, std::span<const Fe> pattern, std::uint64_t seed,
                               const PatternOptions& opt = {});
// `input` streams the circuit input (text at [0, n), pattern at [n, n + m)). On accept,
// outputs[0] is the occurrence count.
Verdict verify_patternmatch(std::uint64_t n, std::uint64_t m, const InputStream& input,
                            std::span<const std::uint8_t> transcript, const PatternOptions& opt = {});

}  // namespace vc
