#include "vc/transcript.hpp"

namespace vc {

namespace {
constexpr std::size_t kHeaderBytes = 11;
}

const char* protocol_name(ProtocolId id) {
  switch (id) {
    case ProtocolId::kSumcheck: return "sumcheck";
    case ProtocolId::kCircuit: return "circuit";
    case ProtocolId::kMatmulGkr: return "matmul-gkr";
    case ProtocolId::kMatmulTree: return "matmul-tree";
    case ProtocolId::kMatmulSpecial: return "matmul-special";
    case ProtocolId::kMatrixPower: return "matpow";
    case ProtocolId::kDistinct: return "distinct";
    case ProtocolId::kPattern: return "pattern";
    case ProtocolId::kDataParallel: return "dataparallel";
  }
  return "unknown";
}

TranscriptWriter::TranscriptWriter(TranscriptHeader header) : header_(header), rng_(header.seed) {}

void TranscriptWriter::begin(RecordKind kind, std::optional<std::uint16_t> layer) {
  records_.push_back(TranscriptRecord{kind, layer, {}, {}, false});
}

TranscriptRecord& TranscriptWriter::current() {
  if (records_.empty()) begin(RecordKind::kRound);
  return records_.back();
}

void TranscriptWriter::send(std::span<const Fe> elems) {
  auto& rec = current();
  rec.prover.insert(rec.prover.end(), elems.begin(), elems.end());
}

void TranscriptWriter::send_answer(std::span<const Fe> elems) {
  send(elems);
  records_.back().answer = true;
}

Fe TranscriptWriter::challenge() {
  Fe r = random_element(rng_);
  current().challenges.push_back(r);
  return r;
}

Fe TranscriptWriter::challenge_nonzero() {
  Fe r = random_nonzero(rng_);
  current().challenges.push_back(r);
  return r;
}

TranscriptStats TranscriptWriter::stats() const {
  TranscriptStats s;
  for (const auto& rec : records_) {
    ++s.rounds;
    (rec.answer ? s.answer_elements : s.prover_elements) += rec.prover.size();
  }
  return s;
}

std::vector<std::uint8_t> serialize_records(const TranscriptHeader& header,
                                            const std::vector<TranscriptRecord>& records) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(header.protocol));
  out.push_back(static_cast<std::uint8_t>(header.size_param));
  out.push_back(static_cast<std::uint8_t>(header.size_param >> 8));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(header.seed >> (8 * i)));
  for (const auto& rec : records) {
    if (rec.layer) {
      out.push_back(static_cast<std::uint8_t>(*rec.layer));
      out.push_back(static_cast<std::uint8_t>(*rec.layer >> 8));
    }
    for (Fe e : rec.prover) append_le(out, e);
    for (Fe e : rec.challenges) append_le(out, e);
  }
  return out;
}

std::vector<std::uint8_t> TranscriptWriter::serialize() const { return serialize_records(header_, records_); }

TranscriptHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw MalformedError("transcript shorter than its header");
  TranscriptHeader h;
  std::uint8_t id = bytes[0];
  if (id < 1 || id > 9) throw MalformedError("unknown protocol id");
  h.protocol = static_cast<ProtocolId>(id);
  h.size_param = static_cast<std::uint16_t>(bytes[1] | (bytes[2] << 8));
  for (int i = 0; i < 8; ++i) h.seed |= static_cast<std::uint64_t>(bytes[3 + i]) << (8 * i);
  return h;
}

TranscriptReader::TranscriptReader(std::span<const std::uint8_t> bytes)
    : bytes_(bytes), pos_(kHeaderBytes), header_(parse_header(bytes)), rng_(header_.seed) {}

void TranscriptReader::begin(std::optional<std::uint16_t> layer) {
  ++stats_.rounds;
  if (!layer) return;
  if (pos_ + 2 > bytes_.size()) throw MalformedError("transcript truncated");
  std::uint16_t got = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
  pos_ += 2;
  if (got != *layer) throw RejectError("layer separator mismatch");
}

Fe TranscriptReader::read_element() {
  if (pos_ + 8 > bytes_.size()) throw MalformedError("transcript truncated");
  std::span<const std::uint8_t, 8> chunk(bytes_.data() + pos_, 8);
  pos_ += 8;
  try {
    return load_le(chunk);
  } catch (const std::invalid_argument&) {
    throw RejectError("non-canonical field element");
  }
}

std::vector<Fe> TranscriptReader::receive(std::size_t count) {
  std::vector<Fe> out(count);
  for (auto& e : out) e = read_element();
  stats_.prover_elements += count;
  return out;
}

Fe TranscriptReader::receive_one() { return receive(1)[0]; }

std::vector<Fe> TranscriptReader::receive_answer(std::size_t count) {
  std::vector<Fe> out(count);
  for (auto& e : out) e = read_element();
  stats_.answer_elements += count;
  return out;
}

Fe TranscriptReader::check_challenge(Fe expected) {
  Fe got = read_element();
  if (got != expected) throw RejectError("recorded challenge does not match the seeded generator");
  return expected;
}

Fe TranscriptReader::challenge() { return check_challenge(random_element(rng_)); }
Fe TranscriptReader::challenge_nonzero() { return check_challenge(random_nonzero(rng_)); }

void TranscriptReader::finish() const {
  if (pos_ != bytes_.size()) throw RejectError("trailing bytes after the final message");
}

}  // namespace vc
