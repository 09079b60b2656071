#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "vc/fuzz.hpp"
#include "vc/io.hpp"
#include "vc/report.hpp"

using vc::Fe;
using vc::Mutation;
using vc::ProtocolId;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path = fs::temp_directory_path() / (std::string("vc_harness_") + info->test_suite_name() + "_" + info->name());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Size the serialized bytes must have given the record list, counted independently of
// any verifier: header, layer tags, then 8 bytes per element.
std::uint64_t expected_size(const vc::TranscriptWriter& w) {
  std::uint64_t bytes = 11;
  for (const auto& r : w.records()) bytes += (r.layer ? 2 : 0) + 8 * (r.prover.size() + r.challenges.size());
  return bytes;
}

const std::pair<ProtocolId, std::uint64_t> kSmall[] = {
    {ProtocolId::kMatmulGkr, 4},  {ProtocolId::kMatmulTree, 4}, {ProtocolId::kMatmulSpecial, 8},
    {ProtocolId::kMatrixPower, 4}, {ProtocolId::kDistinct, 16},  {ProtocolId::kPattern, 16},
    {ProtocolId::kDataParallel, 8}, {ProtocolId::kCircuit, 16},
};

}  // namespace

TEST(Io, MatrixRoundTripAndPadding) {
  TempDir dir;
  const auto file = dir.path / "m.txt";
  {
    std::ofstream out(file);
    out << "1 2 3\n# comment\n4 -5 6\n7 8 9\n";
  }
  auto m = vc::read_matrix_file(file);
  EXPECT_EQ(m.rows, 3u);
  EXPECT_EQ(m.n, 4u);
  EXPECT_EQ(m.entries[1 * 4 + 1], -Fe(5));
  EXPECT_EQ(m.entries[3 * 4 + 3], Fe(0));
  EXPECT_EQ(m.max_abs_entry, 9u);
  vc::write_matrix_file(dir.path / "m2.txt", m.entries, 4);
  EXPECT_EQ(vc::read_matrix_file(dir.path / "m2.txt").entries, m.entries);
  {
    std::ofstream out(dir.path / "bad.txt");
    out << "1 2\n3\n";
  }
  EXPECT_THROW(vc::read_matrix_file(dir.path / "bad.txt"), vc::InputError);
  EXPECT_THROW(vc::read_matrix_file(dir.path / "missing.txt"), vc::InputError);
  EXPECT_THROW(vc::parse_elements("1 x 3"), vc::InputError);
}

TEST(Io, StreamAndRecordFiles) {
  TempDir dir;
  std::vector<vc::StreamUpdate> ups{{3, 1}, {7, -2}, {3, 5}, {1ull << 40, 1}};
  vc::write_stream_file(dir.path / "s.bin", ups);
  auto back = vc::read_stream_file(dir.path / "s.bin");
  ASSERT_EQ(back.size(), ups.size());
  for (std::size_t i = 0; i < ups.size(); ++i) {
    EXPECT_EQ(back[i].index, ups[i].index);
    EXPECT_EQ(back[i].delta, ups[i].delta);
  }
  vc::write_bytes(dir.path / "odd.bin", std::vector<std::uint8_t>(17));
  EXPECT_THROW(vc::read_stream_file(dir.path / "odd.bin"), vc::InputError);
  {
    std::ofstream out(dir.path / "r.txt");
    out << "1 0 1 1\n0 0 1 0\n";
  }
  auto recs = vc::read_records_file(dir.path / "r.txt");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1][2], Fe(1));
  EXPECT_EQ(vc::next_power_of_two(5), 8u);
  EXPECT_EQ(vc::next_power_of_two(8), 8u);
}

TEST(Report, CountsMatchRawTranscript) {
  vc::Rng rng(111);
  for (auto [id, size] : kSmall) {
    SCOPED_TRACE(vc::protocol_name(id));
    auto inst = vc::random_instance(id, size, rng);
    auto proof = inst.prove(rng());
    const auto bytes = proof.writer.serialize();
    auto v = inst.verify(bytes);
    ASSERT_TRUE(v.accepted) << v.reason;
    auto rep = vc::make_report(inst, proof, v);
    EXPECT_EQ(rep.rounds, proof.writer.records().size());
    std::uint64_t elems = 0;
    for (const auto& r : proof.writer.records())
      if (!r.answer) elems += r.prover.size();
    EXPECT_EQ(rep.bytes, 8 * elems);
    EXPECT_EQ(bytes.size(), expected_size(proof.writer));
    EXPECT_EQ(rep.protocol, id);
    EXPECT_EQ(rep.size, size);
  }
}

TEST(Report, TranscriptRoundTripReproducesVerdict) {
  TempDir dir;
  vc::Rng rng(112);
  for (auto [id, size] : kSmall) {
    SCOPED_TRACE(vc::protocol_name(id));
    auto inst = vc::random_instance(id, size, rng);
    std::vector<std::uint8_t> bytes;
    auto rep = vc::run_once(inst, rng(), &bytes);
    ASSERT_TRUE(rep.accepted);
    vc::write_bytes(dir.path / "t.bin", bytes);
    const auto back = vc::read_bytes(dir.path / "t.bin");
    EXPECT_EQ(back, bytes);
    auto v1 = inst.verify(bytes), v2 = inst.verify(back);
    EXPECT_EQ(v1.accepted, v2.accepted);
    EXPECT_EQ(v1.outputs, v2.outputs);
    EXPECT_EQ(v1.stats.rounds, rep.rounds);
    // A rejected transcript also reproduces its verdict and reason.
    auto bad = back;
    bad[bad.size() / 2] ^= 0x01;
    auto r1 = inst.verify(bad), r2 = inst.verify(std::vector<std::uint8_t>(bad));
    EXPECT_FALSE(r1.accepted);
    EXPECT_EQ(r1.reason, r2.reason);
  }
}

TEST(Report, TsvAndTable) {
  vc::BenchReport r{ProtocolId::kMatmulSpecial, 1024, 5.0, 0.5, 1.25, 11, 336, true};
  EXPECT_EQ(vc::to_tsv(r), "matmul-special\t1024\t11\t336\t5.500\t0.500\t1.250\taccept");
  EXPECT_EQ(vc::tsv_header(), "protocol\tsize\trounds\tbytes\tprover_ms\tproofgen_ms\tverifier_ms\tverdict");
  std::vector<vc::BenchReport> rows{r};
  auto table = vc::format_table(rows);
  EXPECT_NE(table.find("matmul-special"), std::string::npos);
  EXPECT_NE(table.find("0.100"), std::string::npos);  // proofgen / eval
}

TEST(Report, BenchSuiteRows) {
  vc::BenchConfig cfg{{ProtocolId::kMatmulSpecial, ProtocolId::kCircuit}, {4, 8}, 3};
  auto rows = vc::bench_suite(cfg);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_TRUE(r.accepted);
  EXPECT_EQ(rows[0].rounds, 3u);
  EXPECT_EQ(rows[1].rounds, 4u);
}

TEST(Fuzz, ControlIsAlwaysAccepted) {
  vc::Rng rng(113);
  for (auto [id, size] : kSmall) {
    auto st = vc::fuzz_soundness(vc::random_instance(id, size, rng), Mutation::kNone, 20, rng);
    EXPECT_EQ(st.applicable, 20u);
    EXPECT_EQ(st.rejected, 0u) << vc::protocol_name(id);
  }
}

TEST(Fuzz, EveryMutationIsRejected) {
  vc::Rng rng(114);
  for (auto [id, size] : kSmall) {
    auto inst = vc::random_instance(id, size, rng);
    for (Mutation m : vc::kAllMutations) {
      auto st = vc::fuzz_soundness(inst, m, 100, rng);
      EXPECT_TRUE(st.all_rejected()) << vc::protocol_name(id) << " " << vc::mutation_name(m) << ": " << st.rejected
                                     << "/" << st.applicable;
      EXPECT_EQ(st.errors, 0u) << vc::protocol_name(id) << " " << vc::mutation_name(m);
    }
  }
}

TEST(Fuzz, MutationsChangeTheTranscript) {
  vc::Rng rng(115);
  auto inst = vc::random_instance(ProtocolId::kMatmulGkr, 4, rng);
  auto proof = inst.prove(1);
  const auto honest = proof.writer.serialize();
  EXPECT_EQ(*vc::mutate(proof.writer, Mutation::kNone, rng), honest);
  for (Mutation m : vc::kAllMutations) {
    auto bytes = vc::mutate(proof.writer, m, rng);
    ASSERT_TRUE(bytes.has_value()) << vc::mutation_name(m);
    EXPECT_NE(*bytes, honest);
    if (m == Mutation::kTruncate) EXPECT_EQ(bytes->size() + 8, honest.size());
  }
  auto special = vc::random_instance(ProtocolId::kMatmulSpecial, 4, rng).prove(1);
  EXPECT_FALSE(vc::mutate(special.writer, Mutation::kCorruptLine, rng).has_value());
  EXPECT_EQ(vc::parse_mutation("replay"), Mutation::kReplay);
  EXPECT_THROW(vc::parse_mutation("nope"), std::invalid_argument);
}
