#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vc/protocols.hpp"

namespace vc {

struct BenchReport {
  ProtocolId protocol = ProtocolId::kCircuit;
  std::uint64_t size = 0;
  double eval_ms = 0;      // circuit evaluation (or the computation being proved)
  double proofgen_ms = 0;  // proof generation on top of evaluation
  double verifier_ms = 0;
  std::uint64_t rounds = 0;
  std::uint64_t bytes = 0;
  bool accepted = false;

  double prover_ms() const { return eval_ms + proofgen_ms; }
};

// Rounds and bytes come from the verifier's pass over the serialized transcript; if it
// rejected early, from the prover's record list of the same transcript.
BenchReport make_report(const ProtocolInstance& inst, const ProveResult& proof, const Verdict& verdict);
// Proves, serializes and verifies once.
BenchReport run_once(const ProtocolInstance& inst, std::uint64_t seed, std::vector<std::uint8_t>* transcript = nullptr);

struct BenchConfig {
  std::vector<ProtocolId> protocols;
  std::vector<std::uint64_t> sizes;  // applied to every protocol
  std::uint64_t seed = 1;
};
std::vector<BenchReport> bench_suite(const BenchConfig& config);

// Tab-separated: protocol, size, rounds, bytes, prover_ms, proofgen_ms, verifier_ms, verdict.
std::string tsv_header();
std::string to_tsv(const BenchReport& r);
// Aligned human-readable table including the proof-generation to evaluation ratio.
std::string format_table(std::span<const BenchReport> rows);

}  // namespace vc
