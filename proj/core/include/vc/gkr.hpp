#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vc/circuit.hpp"
#include "vc/mle.hpp"
#include "vc/sumcheck.hpp"
#include "vc/transcript.hpp"

namespace vc {

struct LayerClaim {
  unsigned layer = 0;  // 1-based
  Point point;
  Fe value;
};

struct LineRestriction {
  Point w1, w2;
  std::vector<Fe> h;  // h(0), ..., h(deg)
  Point at(Fe t) const;
};

// ---- Layer polynomials (point oracles) -------------------------------------------

// Sum over rho of I_rho(r) * G_rho(claims of in1, in2), with claims indexed as in
// RegularWiring::distinct_maps().
Fe combine_layer_claims(const RegularWiring& w, const Point& r, std::span<const Fe> map_claims);

// beta(z,p) * W(p) with every V~_{i+1} evaluation done densely.
Fe layer_polynomial_general(const RegularWiring& w, const Point& z, std::span<const Fe> next_values,
                            const Point& p);
// Binary trees: beta(z,p) * G(V~(p,0), V~(p,1)).
Fe layer_polynomial_bintree(GateOp op, const Point& z, std::span<const Fe> next_values, const Point& p);

enum class DistinctLayer { kProduct, kDoubling, kSquaring };
Fe layer_polynomial_distinct(DistinctLayer kind, const Point& z, std::span<const Fe> next_values,
                             const Point& p);

// Per-variable degree bounds of beta * W.
std::vector<unsigned> layer_degrees(const RegularWiring& w);

SumcheckInstance layer_instance(const RegularWiring& w, const Point& z, std::span<const Fe> next_values,
                                Fe claimed, std::function<Fe(const Point&)> oracle);

// ---- Fast prover ------------------------------------------------------------------

// Linear-time layer prover driven by the regular-wiring descriptor: a beta table C and
// one V table per distinct in-neighbor map, each bound as challenges arrive.
class FastLayerProver : public RoundProver {
 public:
  FastLayerProver(const RegularWiring& w, const Point& z, std::span<const Fe> next_values);
  ~FastLayerProver() override;
  RoundMessage round(unsigned j) override;
  void bind(Fe r) override;
  // Claimed V~_{i+1} values per distinct map; valid after all variables are bound.
  std::vector<Fe> claims() const;
  std::uint64_t work() const { return work_; }
  const std::vector<unsigned>& degrees() const { return degrees_; }

 private:
  struct MapState;
  struct CaseState;
  const RegularWiring& w_;
  Point z_;
  EvalTable beta_;
  std::vector<MapState> maps_;
  std::vector<CaseState> cases_;
  std::vector<unsigned> degrees_;
  unsigned round_ = 0;
  std::uint64_t work_ = 0;
};

// ---- Reduction to one point ---------------------------------------------------------

// Prover: h(t) = V~(l(t)) for t = 0..degree.
LineRestriction prove_line(const Point& w1, const Point& w2, unsigned degree, std::span<const Fe> values);
// Verifier: endpoint check h(0) = v1, h(1) = v2, then the continuation claim at l(r*).
LayerClaim reduce_to_one_point(unsigned layer, Fe v1, Fe v2, const LineRestriction& line, Fe r_star);

// ---- Addition-tree shortcut ---------------------------------------------------------

// g(p) = V~_leaves(z, p) over the tree-depth variables; degree 1 per variable.
class AdditionTreeProver : public RoundProver {
 public:
  AdditionTreeProver(std::span<const Fe> leaves, const Point& z);
  RoundMessage round(unsigned j) override;
  void bind(Fe r) override;
  unsigned depth() const { return depth_; }
  Fe final_value() const { return table_[0]; }

 private:
  EvalTable table_;
  unsigned depth_ = 0;
};

SumcheckInstance addition_tree_instance(std::span<const Fe> leaves, const Point& z);

// ---- Protocol drivers ---------------------------------------------------------------

struct GkrOptions {
  bool addition_tree_shortcut = false;
  bool table_input_check = false;  // dense evaluation instead of the streaming pass
  ProtocolId protocol = ProtocolId::kCircuit;
  std::uint16_t size_param = 0;
};

inline constexpr std::size_t kMaxPendingClaims = 256;

// Invokes sink(index, delta) for every input update, in any order.
using InputStream = std::function<void(const std::function<void(std::uint64_t, Fe)>&)>;
InputStream dense_stream(std::span<const Fe> values);
InputStream update_stream(std::span<const StreamUpdate> updates);

struct ProveResult {
  std::vector<Fe> outputs;
  TranscriptWriter writer{TranscriptHeader{}};
  double eval_ms = 0;
  double proof_ms = 0;
  std::uint64_t work = 0;
};

struct Verdict {
  bool accepted = false;
  bool malformed = false;
  std::string reason;
  std::vector<Fe> outputs;
  TranscriptStats stats;
  double verify_ms = 0;
};

ProveResult prove_circuit(const LayeredCircuit& c, std::vector<Fe> input, std::uint64_t seed,
                          const GkrOptions& opt = {});
Verdict verify_circuit(const LayeredCircuit& c, const InputStream& input, std::span<const std::uint8_t> transcript,
                       const GkrOptions& opt = {});

// Building blocks shared with composite protocols. Layers are 1-based; `to` may be the
// input layer. Claims are reduced to one point whenever the next layer is not the input.
struct PendingClaim {
  Point point;
  Fe value;
};
std::vector<PendingClaim> prove_layers(const LayeredCircuit& c, LayerValues& values, unsigned from, unsigned to,
                                       std::vector<PendingClaim> claims, TranscriptWriter& w, const GkrOptions& opt,
                                       std::uint64_t* work = nullptr);
std::vector<PendingClaim> verify_layers(const LayeredCircuit& c, unsigned from, unsigned to,
                                        std::vector<PendingClaim> claims, TranscriptReader& rd, const GkrOptions& opt);
// Checks every claim against the streamed input in one pass (or densely).
void check_input_claims(unsigned input_log_size, const std::vector<PendingClaim>& claims, const InputStream& input,
                        bool table_method);

// Output opening: all outputs are sent, z is drawn from F*.
PendingClaim prove_outputs(std::span<const Fe> outputs, TranscriptWriter& w);
PendingClaim verify_outputs(unsigned log_outputs, TranscriptReader& rd, std::vector<Fe>* outputs_out = nullptr);

}  // namespace vc
