#include "vc/sumcheck.hpp"

#include <stdexcept>

namespace vc {

RoundMessage prover_round_naive(const SumcheckInstance& inst, std::span<const Fe> bound, unsigned j,
                                std::uint64_t* calls) {
  if (j < 1 || j > inst.num_vars || bound.size() != j - 1)
    throw std::invalid_argument("prover_round_naive: bad round index");
  const unsigned v = inst.num_vars;
  const unsigned deg = inst.degrees.at(j - 1);
  const unsigned rest = v - j;
  RoundMessage msg;
  msg.evals.assign(deg + 1, Fe::zero());
  Point x(v);
  for (unsigned k = 0; k + 1 < j; ++k) x[k] = bound[k];
  for (unsigned t = 0; t <= deg; ++t) {
    x[j - 1] = Fe(t);
    Fe acc;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << rest); ++s) {
      for (unsigned k = 0; k < rest; ++k) x[j + k] = Fe((s >> (rest - 1 - k)) & 1);
      acc += inst.oracle(x);
      if (calls) ++*calls;
    }
    msg.evals[t] = acc;
  }
  return msg;
}

Fe interpolate_at(std::span<const Fe> evals, Fe r) {
  const std::size_t n = evals.size();
  if (n == 0) throw std::invalid_argument("interpolate_at: no evaluations");
  if (r.value() < n) return evals[r.value()];
  // Barycentric form over nodes 0..n-1 with weights w_i = 1 / prod_{k != i} (i - k).
  Fe numer_all = Fe::one();
  for (std::size_t k = 0; k < n; ++k) numer_all *= r - Fe(k);
  Fe acc;
  for (std::size_t i = 0; i < n; ++i) {
    Fe denom = Fe::one();
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) denom *= Fe(i) - Fe(k);
    acc += evals[i] * (denom * (r - Fe(i))).inv();
  }
  return acc * numer_all;
}

RoundCheck verifier_check_round(Fe expected, const RoundMessage& msg, unsigned degree) {
  if (msg.evals.size() != degree + 1) return {false, "degree"};
  const Fe at_one = degree == 0 ? msg.evals[0] : msg.evals[1];
  if (msg.evals[0] + at_one != expected) return {false, "round sum"};
  return {};
}

RoundCheck verifier_check_round(const RoundMessage& prev, const RoundMessage& msg, Fe r_prev,
                                unsigned degree) {
  return verifier_check_round(interpolate_at(prev.evals, r_prev), msg, degree);
}

Point prove_sumcheck(RoundProver& prover, std::span<const unsigned> degrees, TranscriptWriter& w,
                     ChallengeMode mode, std::optional<std::uint16_t> layer) {
  Point r;
  r.reserve(degrees.size());
  for (unsigned j = 0; j < degrees.size(); ++j) {
    w.begin(RecordKind::kRound, j == 0 ? layer : std::nullopt);
    RoundMessage msg = prover.round(j);
    w.send(msg.evals);
    Fe rj = mode == ChallengeMode::kNonzero ? w.challenge_nonzero() : w.challenge();
    prover.bind(rj);
    r.push_back(rj);
  }
  return r;
}

SumcheckClaim verify_sumcheck(Fe claimed_sum, std::span<const unsigned> degrees, TranscriptReader& rd,
                              ChallengeMode mode, std::optional<std::uint16_t> layer) {
  SumcheckClaim out;
  Fe expected = claimed_sum;
  for (unsigned j = 0; j < degrees.size(); ++j) {
    rd.begin(j == 0 ? layer : std::nullopt);
    RoundMessage msg{rd.receive(degrees[j] + 1)};
    RoundCheck c = verifier_check_round(expected, msg, degrees[j]);
    if (!c.accepted) throw RejectError("sum-check round " + std::to_string(j + 1) + ": " + c.reason);
    Fe rj = mode == ChallengeMode::kNonzero ? rd.challenge_nonzero() : rd.challenge();
    expected = interpolate_at(msg.evals, rj);
    out.r.push_back(rj);
  }
  out.value = expected;
  return out;
}

SumcheckResult reverify_sumcheck(const SumcheckInstance& inst, std::span<const std::uint8_t> bytes) {
  SumcheckResult res;
  res.transcript.assign(bytes.begin(), bytes.end());
  try {
    TranscriptReader rd(bytes);
    if (rd.header().protocol != ProtocolId::kSumcheck || rd.header().size_param != inst.num_vars)
      throw RejectError("transcript header does not match the instance");
    SumcheckClaim c = verify_sumcheck(inst.claimed_sum, inst.degrees, rd, ChallengeMode::kField);
    rd.finish();
    res.r = c.r;
    res.final_value = c.value;
    res.stats = rd.stats();
    if (inst.oracle(c.r) != c.value) throw RejectError("final evaluation check");
    res.accepted = true;
  } catch (const RejectError& e) {
    res.reason = e.what();
  } catch (const MalformedError& e) {
    res.reason = e.what();
  }
  return res;
}

SumcheckResult run_sumcheck(const SumcheckInstance& inst, RoundProver& prover, std::uint64_t seed) {
  TranscriptWriter w({ProtocolId::kSumcheck, static_cast<std::uint16_t>(inst.num_vars), seed});
  prove_sumcheck(prover, inst.degrees, w, ChallengeMode::kField);
  return reverify_sumcheck(inst, w.serialize());
}

}  // namespace vc
