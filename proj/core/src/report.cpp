#include "vc/report.hpp"

#include <iomanip>
#include <sstream>

namespace vc {

BenchReport make_report(const ProtocolInstance& inst, const ProveResult& proof, const Verdict& verdict) {
  BenchReport r;
  r.protocol = inst.protocol;
  r.size = inst.size;
  r.eval_ms = proof.eval_ms;
  r.proofgen_ms = proof.proof_ms;
  r.verifier_ms = verdict.verify_ms;
  const TranscriptStats stats = verdict.accepted ? verdict.stats : proof.writer.stats();
  r.rounds = stats.rounds;
  r.bytes = stats.bytes();
  r.accepted = verdict.accepted;
  return r;
}

BenchReport run_once(const ProtocolInstance& inst, std::uint64_t seed, std::vector<std::uint8_t>* transcript) {
  ProveResult proof = inst.prove(seed);
  const auto bytes = proof.writer.serialize();
  Verdict v = inst.verify(bytes);
  if (transcript) *transcript = bytes;
  return make_report(inst, proof, v);
}

std::vector<BenchReport> bench_suite(const BenchConfig& config) {
  std::vector<BenchReport> out;
  Rng rng(config.seed);
  for (ProtocolId id : config.protocols)
    for (std::uint64_t size : config.sizes) out.push_back(run_once(random_instance(id, size, rng), rng()));
  return out;
}

std::string tsv_header() { return "protocol\tsize\trounds\tbytes\tprover_ms\tproofgen_ms\tverifier_ms\tverdict"; }

std::string to_tsv(const BenchReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << protocol_name(r.protocol) << '\t' << r.size << '\t' << r.rounds << '\t'
     << r.bytes << '\t' << r.prover_ms() << '\t' << r.proofgen_ms << '\t' << r.verifier_ms << '\t'
     << (r.accepted ? "accept" : "reject");
  return os.str();
}

std::string format_table(std::span<const BenchReport> rows) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "protocol" << std::right << std::setw(10) << "size" << std::setw(8) << "rounds"
     << std::setw(11) << "comm KB" << std::setw(12) << "eval ms" << std::setw(13) << "proofgen ms" << std::setw(10)
     << "pg/eval" << std::setw(12) << "verify ms" << std::setw(9) << "verdict" << '\n';
  os << std::fixed;
  for (const auto& r : rows) {
    os << std::left << std::setw(16) << protocol_name(r.protocol) << std::right << std::setw(10) << r.size
       << std::setw(8) << r.rounds << std::setw(11) << std::setprecision(3) << r.bytes / 1024.0 << std::setw(12)
       << std::setprecision(2) << r.eval_ms << std::setw(13) << r.proofgen_ms << std::setw(10)
       << std::setprecision(3);
    if (r.eval_ms > 0)
      os << r.proofgen_ms / r.eval_ms;
    else
      os << "-";
    os << std::setw(12) << std::setprecision(2) << r.verifier_ms << std::setw(9) << (r.accepted ? "accept" : "reject")
       << '\n';
  }
  return os.str();
}

}  // namespace vc
