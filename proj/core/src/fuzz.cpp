#include "vc/fuzz.hpp"

#include <stdexcept>

namespace vc {

namespace {

template <class Pred>
std::vector<std::size_t> select(const std::vector<TranscriptRecord>& recs, Pred pred) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < recs.size(); ++i)
    if (pred(recs[i])) out.push_back(i);
  return out;
}

std::size_t pick(const std::vector<std::size_t>& v, Rng& rng) { return v[rng() % v.size()]; }

}  // namespace

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::kNone: return "none";
    case Mutation::kFlipOutput: return "flip-output";
    case Mutation::kFlipRoundEval: return "flip-round-eval";
    case Mutation::kTruncate: return "truncate";
    case Mutation::kReplay: return "replay";
    case Mutation::kCorruptLine: return "corrupt-line";
  }
  return "unknown";
}

Mutation parse_mutation(const std::string& name) {
  for (Mutation m : {Mutation::kNone, Mutation::kFlipOutput, Mutation::kFlipRoundEval, Mutation::kTruncate,
                     Mutation::kReplay, Mutation::kCorruptLine})
    if (name == mutation_name(m)) return m;
  throw std::invalid_argument("unknown mutation '" + name + "'");
}

std::optional<std::vector<std::uint8_t>> mutate(const TranscriptWriter& honest, Mutation m, Rng& rng) {
  std::vector<TranscriptRecord> recs = honest.records();
  switch (m) {
    case Mutation::kNone:
      break;
    case Mutation::kFlipOutput: {
      auto idx = select(recs, [](const TranscriptRecord& r) { return r.answer && !r.prover.empty(); });
      if (idx.empty()) return std::nullopt;
      auto& p = recs[pick(idx, rng)].prover;
      p[rng() % p.size()] += random_nonzero(rng);
      break;
    }
    case Mutation::kFlipRoundEval: {
      auto idx = select(recs, [](const TranscriptRecord& r) { return r.kind == RecordKind::kRound && !r.prover.empty(); });
      if (idx.empty()) return std::nullopt;
      auto& p = recs[pick(idx, rng)].prover;
      p[rng() % p.size()] += random_nonzero(rng);
      break;
    }
    case Mutation::kTruncate: {
      auto idx = select(recs, [](const TranscriptRecord& r) { return !r.prover.empty(); });
      if (idx.empty()) return std::nullopt;
      recs[pick(idx, rng)].prover.pop_back();
      break;
    }
    case Mutation::kReplay: {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t j = 0; j < recs.size(); ++j) {
        if (recs[j].kind != RecordKind::kRound) continue;
        for (std::size_t i = 0; i < j; ++i)
          if (recs[i].kind == RecordKind::kRound && recs[i].prover.size() == recs[j].prover.size() &&
              recs[i].prover != recs[j].prover)
            pairs.emplace_back(i, j);
      }
      if (pairs.empty()) return std::nullopt;
      auto [from, to] = pairs[rng() % pairs.size()];
      recs[to].prover = recs[from].prover;
      break;
    }
    case Mutation::kCorruptLine: {
      auto idx = select(recs, [](const TranscriptRecord& r) { return r.kind == RecordKind::kClaims && r.prover.size() >= 2; });
      if (idx.empty()) return std::nullopt;
      recs[pick(idx, rng)].prover[rng() % 2] += random_nonzero(rng);
      break;
    }
  }
  return serialize_records(honest.header(), recs);
}

FuzzStats fuzz_soundness(const ProtocolInstance& inst, Mutation m, std::uint64_t trials, Rng& rng) {
  FuzzStats st;
  st.mutation = m;
  st.trials = trials;
  const ProveResult honest = inst.prove(rng());
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto bytes = mutate(honest.writer, m, rng);
    if (!bytes) continue;
    ++st.applicable;
    try {
      if (!inst.verify(*bytes).accepted) ++st.rejected;
    } catch (const std::exception&) {
      ++st.rejected;
      ++st.errors;
    }
  }
  return st;
}

}  // namespace vc
