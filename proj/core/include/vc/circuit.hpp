#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vc/field.hpp"
#include "vc/mle.hpp"

namespace vc {

// kCopy is a fan-in-1 gate (in2 == in1); kSub appears only in the pattern-matching layer.
enum class GateOp : std::uint8_t { kAdd, kMul, kCopy, kSub };

struct Gate {
  GateOp op = GateOp::kAdd;
  std::uint64_t in1 = 0;
  std::uint64_t in2 = 0;
};

inline Fe apply_gate(GateOp op, Fe a, Fe b) {
  switch (op) {
    case GateOp::kAdd: return a + b;
    case GateOp::kMul: return a * b;
    case GateOp::kCopy: return a;
    case GateOp::kSub: return a - b;
  }
  return a;
}

// Where one output bit of an in-neighbor function comes from. Bit positions are
// 0-based, MSB first.
struct BitSource {
  bool constant = false;
  unsigned value = 0;      // constant bit value
  unsigned input_bit = 0;  // position in the gate label
  bool negate = false;

  static BitSource from(unsigned bit, bool neg = false) { return {false, 0, bit, neg}; }
  static BitSource fixed(unsigned v) { return {true, v, 0, false}; }
  friend bool operator==(const BitSource&, const BitSource&) = default;
};

// An in-neighbor function as a list of output-bit sources (size s_{i+1}).
struct BitMap {
  std::vector<BitSource> bits;
  std::uint64_t apply(std::uint64_t label, unsigned label_bits) const;
  // Point ~in(r) for a field point r over the gate label.
  Point apply(const Point& r) const;
  friend bool operator==(const BitMap&, const BitMap&) = default;
};

// Behaviour under one assignment rho of the selector bits.
struct WiringCase {
  GateOp op = GateOp::kAdd;
  BitMap in1;
  BitMap in2;  // ignored for kCopy
};

// Regular wiring: selector bits S fix rho; under each rho the gate
// type is constant and every in-neighbor output bit depends on at most one label bit.
struct RegularWiring {
  unsigned out_bits = 0;  // s_i
  unsigned in_bits = 0;   // s_{i+1}
  std::vector<unsigned> selector_bits;
  std::vector<WiringCase> cases;  // indexed by rho, first selector bit most significant
  bool similar = true;            // pending claims may be merged with a line

  std::size_t case_of(std::uint64_t label) const;
  Gate gate(std::uint64_t label) const;
  // Checks structural invariants; throws std::invalid_argument.
  void validate() const;
  // Distinct in-neighbor maps, in first-use order (case 0 in1, case 0 in2, case 1 in1, ...).
  std::vector<BitMap> distinct_maps() const;
  // Output positions where two maps disagree.
  static std::vector<unsigned> differing_bits(const BitMap& a, const BitMap& b);
};

RegularWiring bintree_wiring(unsigned out_bits, GateOp op);

struct Layer {
  unsigned log_size = 0;
  std::function<Gate(std::uint64_t)> gate_at;
  std::optional<RegularWiring> wiring;
  bool addition_tree = false;  // in1 = (p,0), in2 = (p,1), add
  std::shared_ptr<const std::vector<Gate>> explicit_gates;

  std::uint64_t size() const { return std::uint64_t{1} << log_size; }
};

// Layers 1..d-1 are stored with layers[0] the output layer; layer d is the input.
struct LayeredCircuit {
  std::vector<Layer> layers;
  unsigned input_log_size = 0;

  unsigned depth() const { return static_cast<unsigned>(layers.size()) + 1; }
  unsigned log_size(unsigned layer_index) const {  // 1-based, input is depth()
    return layer_index == depth() ? input_log_size : layers.at(layer_index - 1).log_size;
  }
  std::uint64_t total_gates() const;
};

// values[0] = V_1 (outputs), ..., values[d-1] = input.
using LayerValues = std::vector<std::vector<Fe>>;

LayerValues evaluate(const LayeredCircuit& c, std::vector<Fe> input);

Layer layer_from_wiring(RegularWiring w, bool addition_tree = false);
Layer layer_from_gates(std::vector<Gate> gates, unsigned in_log_size);

// Exhaustive check of descriptor vs gate generator for layers up to 2^16 gates, sampled above.
void check_descriptor(const Layer& layer, std::uint64_t samples = 4096, std::uint64_t seed = 7);

struct WiringValues {
  Fe add;
  Fe mul;
};
// add~_i and mult~_i at (p, w1, w2) by enumerating gates; layer_index 1-based.
// `gate_visits` accumulates the number of gates enumerated.
WiringValues wiring_predicate_eval(const LayeredCircuit& c, unsigned layer_index, const Point& p,
                                   const Point& w1, const Point& w2, std::uint64_t* gate_visits = nullptr);

LayeredCircuit build_binary_tree(std::uint64_t n, GateOp op);

inline constexpr unsigned kFltBits = 61;  // q = 2^61 - 1

// DISTINCT: squaring layer, doubling layer, running-product layers, selection, add tree.
LayeredCircuit build_distinct_circuit(std::uint64_t n);
// Layers appended on top of an n-gate layer: squaring ... selection (no add tree).
// Returns them in output-first order.
std::vector<Layer> build_flt_layers(unsigned log_n);
// Number of running-product layers in the FLT chain.
unsigned flt_product_layers();

LayeredCircuit build_matmult_circuit(std::uint64_t n);
// Matrix input layout (0,i,j) -> A_ij, (1,i,j) -> B_ij.
std::vector<Fe> matmult_input(std::span<const Fe> a, std::span<const Fe> b);

// Pattern matching over a cyclic text of length n (power of two) and pattern of length m.
// Input layout: text at [0, n), pattern at [n, n+m), zeros to 2n. Layer d-1 is the
// subtraction layer (no descriptor); output is the sum over i of I_i^{q-1}.
LayeredCircuit build_patternmatch_layers(std::uint64_t n, std::uint64_t m);
std::vector<Fe> patternmatch_input(std::span<const Fe> text, std::span<const Fe> pattern);

// Dense frequency vector of length n.
std::vector<Fe> ingest_stream(std::span<const StreamUpdate> updates, std::uint64_t n);

bool is_power_of_two(std::uint64_t n);
unsigned log2_exact(std::uint64_t n);

}  // namespace vc
