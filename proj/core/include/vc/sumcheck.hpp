#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vc/field.hpp"
#include "vc/mle.hpp"
#include "vc/transcript.hpp"

namespace vc {

// g_j evaluated at 0, 1, ..., deg_j.
struct RoundMessage {
  std::vector<Fe> evals;
  unsigned degree() const { return evals.empty() ? 0 : static_cast<unsigned>(evals.size() - 1); }
};

struct SumcheckInstance {
  unsigned num_vars = 0;
  std::vector<unsigned> degrees;
  Fe claimed_sum;
  std::function<Fe(const Point&)> oracle;
};

// Brute-force round message over all boolean suffixes; `bound` holds r_1..r_{j-1} and
// j is 1-based. `calls` accumulates oracle invocations.
RoundMessage prover_round_naive(const SumcheckInstance& inst, std::span<const Fe> bound, unsigned j,
                                std::uint64_t* calls = nullptr);

// Lagrange interpolation through (0, evals[0]), ..., (d, evals[d]).
Fe interpolate_at(std::span<const Fe> evals, Fe r);

struct RoundCheck {
  bool accepted = true;
  std::string reason;
};

// Checks expected = g_j(0) + g_j(1) and |msg| = degree + 1.
RoundCheck verifier_check_round(Fe expected, const RoundMessage& msg, unsigned degree);
RoundCheck verifier_check_round(const RoundMessage& prev, const RoundMessage& msg, Fe r_prev,
                                unsigned degree);

enum class ChallengeMode { kField, kNonzero };

// Source of prover round messages; round(j) is called with j = 0..v-1, then bind(r_j).
class RoundProver {
 public:
  virtual ~RoundProver() = default;
  virtual RoundMessage round(unsigned j) = 0;
  virtual void bind(Fe r) = 0;
};

class NaiveRoundProver : public RoundProver {
 public:
  explicit NaiveRoundProver(const SumcheckInstance& inst) : inst_(inst) {}
  RoundMessage round(unsigned j) override {
    return prover_round_naive(inst_, bound_, j + 1, &calls_);
  }
  void bind(Fe r) override { bound_.push_back(r); }
  std::uint64_t oracle_calls() const { return calls_; }

 private:
  const SumcheckInstance& inst_;
  std::vector<Fe> bound_;
  std::uint64_t calls_ = 0;
};

// Prover side of one sum-check. Each round is one transcript record; `layer` tags the
// first record. Returns the challenge vector.
Point prove_sumcheck(RoundProver& prover, std::span<const unsigned> degrees, TranscriptWriter& w,
                     ChallengeMode mode, std::optional<std::uint16_t> layer = std::nullopt);

struct SumcheckClaim {
  Point r;
  Fe value;  // value g(r) the final round message commits to
};

// Verifier side; throws RejectError on a failed round. The terminal claim is returned
// to the caller rather than checked.
SumcheckClaim verify_sumcheck(Fe claimed_sum, std::span<const unsigned> degrees, TranscriptReader& rd,
                              ChallengeMode mode, std::optional<std::uint16_t> layer = std::nullopt);

struct SumcheckResult {
  bool accepted = false;
  std::string reason;
  Point r;
  Fe final_value;
  std::vector<std::uint8_t> transcript;
  TranscriptStats stats;
};

// Runs prover and verifier in-process and finishes with a direct oracle check g(r).
SumcheckResult run_sumcheck(const SumcheckInstance& inst, RoundProver& prover, std::uint64_t seed);

// Verifies stored transcript bytes against an instance.
SumcheckResult reverify_sumcheck(const SumcheckInstance& inst, std::span<const std::uint8_t> bytes);

}  // namespace vc
