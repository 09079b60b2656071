#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vc/circuit.hpp"
#include "vc/gkr.hpp"

namespace vc {

// B = 2^log_copies side-by-side copies of a base circuit with arbitrary wiring. A gate of
// the super-circuit is labelled (x, copy) with the copy index as the low-order block,
// i.e. label = x * B + copy. Base gates must be add or mul.
struct SuperCircuit {
  LayeredCircuit base;
  unsigned log_copies = 0;

  std::uint64_t copies() const { return std::uint64_t{1} << log_copies; }
  unsigned depth() const { return base.depth(); }
  unsigned log_size(unsigned layer) const { return base.log_size(layer) + log_copies; }
  void validate() const;
};

// Converts copy-major data (copy 0's n values, then copy 1's, ...) to label order.
std::vector<Fe> interleave_copies(std::span<const Fe> copy_major, std::uint64_t copies);
std::vector<Fe> deinterleave_copies(std::span<const Fe> label_order, std::uint64_t copies);

// Per-layer values of the super-circuit in label order; values[0] is the output layer.
LayerValues evaluate_super(const SuperCircuit& sc, std::span<const Fe> input);

// Verifier-side wiring evaluator for the base circuit. Cost per call is O(S_i) and does
// not depend on the number of copies.
class WiringPreprocessor {
 public:
  explicit WiringPreprocessor(const LayeredCircuit& base) : base_(base) {}
  WiringValues eval(unsigned layer, const Point& p, const Point& w1, const Point& w2);
  std::uint64_t gate_visits() const { return visits_; }

 private:
  const LayeredCircuit& base_;
  std::uint64_t visits_ = 0;
};

WiringPreprocessor preprocess_verifier(const LayeredCircuit& base);

// Variables are ordered (p1, w1, g1, p2): base gate label, first and second in-neighbor
// labels, then the copy index.
std::vector<unsigned> dataparallel_degrees(const SuperCircuit& sc, unsigned layer);

// beta(z, (p1, p2)) * (add~(p1,w1,g1) (V~(w1,p2) + V~(g1,p2)) + mult~(p1,w1,g1) V~(w1,p2) V~(g1,p2)),
// everything evaluated densely.
Fe dataparallel_layer_polynomial(const SuperCircuit& sc, unsigned layer, const Point& z,
                                 std::span<const Fe> next_values, const Point& x);

class DataParallelLayerProver : public RoundProver {
 public:
  DataParallelLayerProver(const SuperCircuit& sc, unsigned layer, const Point& z, std::span<const Fe> next_values);
  RoundMessage round(unsigned j) override;
  void bind(Fe r) override;
  // V~_{i+1}(w1, p2) and V~_{i+1}(g1, p2) at the bound point.
  std::pair<Fe, Fe> claims() const;
  std::uint64_t work() const { return work_; }

 private:
  void enter_second_phase();
  unsigned s_out_, s_in_, b_;
  std::vector<Gate> gates_;
  Point z1_, z2_;
  std::vector<Fe> beta2_;
  std::span<const Fe> next_;
  std::vector<Fe> gate_sum_;  // per gate: sum over copies of beta2 * gate value
  std::vector<Fe> weight_;    // per gate: chi of its label bits at the bound coordinates
  Fe beta1_ = Fe::one();
  EvalTable left_, right_;  // V~_{i+1} with leading w1 (resp. g1) coordinates bound
  EvalTable beta_copy_;
  Fe add_, mul_;
  bool second_phase_ = false;
  unsigned round_ = 0;
  std::uint64_t work_ = 0;
};

// Runs the layer iterations 1..d-1 from a claim on V~*_1. The two claims produced by each
// layer share the copy coordinates and are merged with a line over the first s_{i+1}
// coordinates, except at the input layer where both are returned.
std::vector<PendingClaim> prove_dataparallel(const SuperCircuit& sc, const LayerValues& values, PendingClaim top,
                                             TranscriptWriter& w, std::uint64_t* work = nullptr);
std::vector<PendingClaim> verify_dataparallel(const SuperCircuit& sc, PendingClaim top, TranscriptReader& rd,
                                              WiringPreprocessor& prep);

// Counting pipeline: every output of every copy is summed by an addition-tree sum-check,
// then the copies are verified as above.
ProveResult prove_counting(const SuperCircuit& sc, std::span<const Fe> input, std::uint64_t seed);
Verdict verify_counting(const SuperCircuit& sc, const InputStream& input, std::span<const std::uint8_t> transcript,
                        std::uint64_t* gate_visits = nullptr);

// Base circuit with one output: the product of the selected fields of an n-field record.
// The number of selected fields must be a power of two.
LayeredCircuit build_conjunction_predicate(unsigned fields, std::vector<unsigned> selected);

}  // namespace vc
