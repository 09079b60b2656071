#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vc/field.hpp"

namespace vc {

enum class ProtocolId : std::uint8_t {
  kSumcheck = 1,
  kCircuit = 2,
  kMatmulGkr = 3,
  kMatmulTree = 4,
  kMatmulSpecial = 5,
  kMatrixPower = 6,
  kDistinct = 7,
  kPattern = 8,
  kDataParallel = 9,
};

const char* protocol_name(ProtocolId id);

struct TranscriptHeader {
  ProtocolId protocol = ProtocolId::kSumcheck;
  std::uint16_t size_param = 0;
  std::uint64_t seed = 0;
};

// Raised by verifiers on a failed check.
class RejectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when transcript bytes cannot be parsed.
class MalformedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RecordKind : std::uint8_t { kOpening, kRound, kClaims };

// One accounted round: a prover message followed by the verifier's reply (possibly empty).
struct TranscriptRecord {
  RecordKind kind = RecordKind::kRound;
  std::optional<std::uint16_t> layer;
  std::vector<Fe> prover;
  std::vector<Fe> challenges;
  bool answer = false;  // prover part is the computed answer, excluded from byte counts
};

struct TranscriptStats {
  std::uint64_t rounds = 0;
  std::uint64_t prover_elements = 0;  // excludes answer records
  std::uint64_t answer_elements = 0;
  std::uint64_t bytes() const { return 8 * prover_elements; }
};

// Prover-side transcript. Challenges are drawn from a generator seeded by the header
// seed, strictly after the prover message they answer has been appended.
class TranscriptWriter {
 public:
  explicit TranscriptWriter(TranscriptHeader header);

  void begin(RecordKind kind, std::optional<std::uint16_t> layer = std::nullopt);
  void send(std::span<const Fe> elems);
  void send(Fe e) { send(std::span<const Fe>(&e, 1)); }
  void send_answer(std::span<const Fe> elems);
  Fe challenge();
  Fe challenge_nonzero();

  const TranscriptHeader& header() const { return header_; }
  std::vector<TranscriptRecord>& records() { return records_; }
  const std::vector<TranscriptRecord>& records() const { return records_; }
  TranscriptStats stats() const;
  std::vector<std::uint8_t> serialize() const;

 private:
  TranscriptRecord& current();
  TranscriptHeader header_;
  Rng rng_;
  std::vector<TranscriptRecord> records_;
};

std::vector<std::uint8_t> serialize_records(const TranscriptHeader& header,
                                            const std::vector<TranscriptRecord>& records);
TranscriptHeader parse_header(std::span<const std::uint8_t> bytes);

// Verifier-side view of serialized bytes. Reads are driven by the verifier, which
// knows the message shapes; recorded challenges must match the seeded generator.
class TranscriptReader {
 public:
  explicit TranscriptReader(std::span<const std::uint8_t> bytes);

  const TranscriptHeader& header() const { return header_; }
  void begin(std::optional<std::uint16_t> layer = std::nullopt);
  std::vector<Fe> receive(std::size_t count);
  Fe receive_one();
  std::vector<Fe> receive_answer(std::size_t count);
  Fe challenge();
  Fe challenge_nonzero();
  // Throws RejectError if unread bytes remain.
  void finish() const;

  TranscriptStats stats() const { return stats_; }

 private:
  Fe read_element();
  Fe check_challenge(Fe expected);
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  TranscriptHeader header_;
  Rng rng_;
  TranscriptStats stats_;
};

}  // namespace vc
