#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vc/protocols.hpp"

namespace vc {

enum class Mutation { kNone, kFlipOutput, kFlipRoundEval, kTruncate, kReplay, kCorruptLine };

inline constexpr Mutation kAllMutations[] = {Mutation::kFlipOutput, Mutation::kFlipRoundEval, Mutation::kTruncate,
                                             Mutation::kReplay, Mutation::kCorruptLine};

const char* mutation_name(Mutation m);
Mutation parse_mutation(const std::string& name);  // throws std::invalid_argument

// Applies one random mutation of the given kind to an honest transcript. Returns nullopt
// when the transcript has no message the mutation can target.
//   kFlipOutput:    perturb one element of the claimed answer
//   kFlipRoundEval: perturb one evaluation in a sum-check round message
//   kTruncate:      drop the last element of one prover message
//   kReplay:        resend an earlier round message of the same shape in place of a later one
//   kCorruptLine:   perturb one of the two claimed values a line or input check starts from
std::optional<std::vector<std::uint8_t>> mutate(const TranscriptWriter& honest, Mutation m, Rng& rng);

struct FuzzStats {
  Mutation mutation = Mutation::kNone;
  std::uint64_t trials = 0;
  std::uint64_t applicable = 0;  // trials where the mutation had a target
  std::uint64_t rejected = 0;    // rejections or malformed verdicts among applicable trials
  std::uint64_t errors = 0;      // verifier exceptions other than reject or malformed
  bool all_rejected() const { return rejected == applicable; }
};

// One honest proof, then `trials` independent mutations of it, each verified.
FuzzStats fuzz_soundness(const ProtocolInstance& inst, Mutation m, std::uint64_t trials, Rng& rng);

}  // namespace vc
