#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>

#include "vc/fuzz.hpp"
#include "vc/io.hpp"
#include "vc/report.hpp"

namespace vc::cli {

namespace {

constexpr std::uint64_t kLargeEntry = std::uint64_t{1} << 26;
constexpr std::size_t kLargeDim = 512;

struct InputArgs {
  std::string a_file, b_file, m_file;
  std::size_t n = 0;
  std::uint64_t input_seed = 1;
  std::optional<unsigned> k;
  bool in_place = false;
  std::string stream_file;
  std::uint64_t universe = 0;
  std::string text, text_file, pattern, pattern_file;
  bool cyclic = false;
  std::string records_file;
  std::vector<unsigned> select;
  unsigned fields = 4;
  bool print_output = false;
};

struct RunArgs {
  std::uint64_t seed = 1;
  std::string out_file, tsv_file;
};

// What the CLI proves plus how to present its answer.
struct Prepared {
  ProtocolInstance inst;
  std::string answer_kind;  // "matrix", "count"
  std::size_t rows = 0;     // unpadded matrix dimension
};

void add_run_options(CLI::App* sub, RunArgs& run) {
  sub->add_option("--seed", run.seed, "Verifier randomness seed, recorded in the transcript header");
  sub->add_option("--out", run.out_file, "Write the transcript to this file");
  sub->add_option("--tsv", run.tsv_file, "Append a tab-separated report line to this file");
}

void add_matrix_options(CLI::App* sub, InputArgs& in, bool square_only) {
  if (square_only) {
    sub->add_option("--m", in.m_file, "Matrix file (one row per line)");
    sub->add_option("--k", in.k, "Compute M^(2^k)");
  } else {
    sub->add_option("--a", in.a_file, "Left matrix file (one row per line)");
    sub->add_option("--b", in.b_file, "Right matrix file");
  }
  sub->add_option("--n", in.n, "Dimension of generated matrices when no files are given");
  sub->add_option("--input-seed", in.input_seed, "Seed for generated inputs");
  sub->add_flag("--print-output", in.print_output, "Print the proven matrix");
}

void add_stream_options(CLI::App* sub, InputArgs& in) {
  sub->add_option("--stream", in.stream_file, "Binary stream of 16-byte (index, delta) records");
  sub->add_option("--universe", in.universe, "Universe size (rounded up to a power of two)");
  sub->add_option("--n", in.n, "Universe of a generated stream when no file is given");
  sub->add_option("--input-seed", in.input_seed, "Seed for generated inputs");
}

void add_pattern_options(CLI::App* sub, InputArgs& in) {
  sub->add_option("--text", in.text, "Text as a string");
  sub->add_option("--text-file", in.text_file, "Text as whitespace-separated integer symbols");
  sub->add_option("--pattern", in.pattern, "Pattern as a string (length a power of two)");
  sub->add_option("--pattern-file", in.pattern_file, "Pattern as integer symbols");
  sub->add_flag("--cyclic", in.cyclic, "Count wrap-around matches too; the text length must be a power of two");
}

void add_dataparallel_options(CLI::App* sub, InputArgs& in) {
  sub->add_option("--records", in.records_file, "One record per line, integer fields");
  sub->add_option("--select", in.select, "Fields whose product is counted (a power of two >= 2 of them)")
      ->delimiter(',');
  sub->add_option("--n", in.n, "Number of generated 0/1 records when no file is given");
  sub->add_option("--fields", in.fields, "Fields per generated record");
  sub->add_option("--input-seed", in.input_seed, "Seed for generated inputs");
}

std::vector<Fe> small_random(Rng& rng, std::size_t count, std::uint64_t bound) {
  std::vector<Fe> out(count);
  for (auto& v : out) v = Fe(rng() % bound);
  return out;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

std::size_t generated_dim(const InputArgs& in) {
  require(in.n >= 1, "give matrix files or --n");
  return in.n;
}

void warn_large(std::size_t n, std::uint64_t max_abs, std::ostream& err) {
  if (n >= kLargeDim && max_abs > kLargeEntry)
    err << "warning: entries exceed 2^26 at n >= 512; integer products may wrap modulo 2^61-1\n";
}

Prepared prepare_matmul(ProtocolId id, const InputArgs& in, std::ostream& err) {
  Prepared p;
  p.answer_kind = "matrix";
  std::vector<Fe> a, b;
  std::size_t n = 0;
  if (!in.a_file.empty() || !in.b_file.empty()) {
    require(!in.a_file.empty() && !in.b_file.empty(), "give both --a and --b");
    Matrix ma = read_matrix_file(in.a_file), mb = read_matrix_file(in.b_file);
    require(ma.rows == mb.rows, "matrices have different dimensions");
    n = std::max<std::size_t>(ma.n, 2);
    p.rows = ma.rows;
    a = pad_matrix(ma.entries, ma.n, n);
    b = pad_matrix(mb.entries, mb.n, n);
    warn_large(ma.rows, std::max(ma.max_abs_entry, mb.max_abs_entry), err);
  } else {
    p.rows = generated_dim(in);
    n = std::max<std::size_t>(next_power_of_two(p.rows), 2);
    Rng rng(in.input_seed);
    a = pad_matrix(small_random(rng, p.rows * p.rows, 1024), p.rows, n);
    b = pad_matrix(small_random(rng, p.rows * p.rows, 1024), p.rows, n);
  }
  if (id == ProtocolId::kMatmulSpecial)
    p.inst = matmul_special_instance(std::move(a), std::move(b), n, in.in_place);
  else
    p.inst = matmul_gkr_instance(std::move(a), std::move(b), n, id == ProtocolId::kMatmulTree);
  return p;
}

Prepared prepare_matpow(const InputArgs& in, std::optional<unsigned> header_k, std::ostream& err) {
  Prepared p;
  p.answer_kind = "matrix";
  std::vector<Fe> m;
  std::size_t n = 0;
  if (!in.m_file.empty()) {
    Matrix mm = read_matrix_file(in.m_file);
    n = std::max<std::size_t>(mm.n, 2);
    p.rows = mm.rows;
    m = pad_matrix(mm.entries, mm.n, n);
    warn_large(mm.rows, mm.max_abs_entry, err);
  } else {
    p.rows = generated_dim(in);
    n = std::max<std::size_t>(next_power_of_two(p.rows), 2);
    Rng rng(in.input_seed);
    m = pad_matrix(small_random(rng, p.rows * p.rows, 4), p.rows, n);
  }
  const unsigned k = in.k.value_or(header_k.value_or(1));
  require(k >= 1, "--k must be at least 1");
  p.inst = matrix_power_instance(std::move(m), n, k);
  return p;
}

Prepared prepare_distinct(const InputArgs& in) {
  Prepared p;
  p.answer_kind = "count";
  std::vector<StreamUpdate> ups;
  std::uint64_t universe = in.universe;
  if (!in.stream_file.empty()) {
    ups = read_stream_file(in.stream_file);
  } else {
    require(in.n >= 1, "give --stream or --n");
    universe = std::max(universe, static_cast<std::uint64_t>(in.n));
    Rng rng(in.input_seed);
    ups.resize(std::max<std::size_t>(1, in.n / 2));
    for (auto& u : ups) u = {rng() % in.n, 1};
  }
  std::uint64_t max_index = 0;
  for (const auto& u : ups) {
    max_index = std::max(max_index, u.index);
    require(u.delta < static_cast<std::int64_t>(kModulus) && u.delta > -static_cast<std::int64_t>(kModulus),
            "stream delta out of range");
  }
  if (universe == 0) universe = max_index + 1;
  require(max_index < universe, "stream index " + std::to_string(max_index) + " outside the universe");
  require(universe <= (std::uint64_t{1} << 30), "universe too large");
  universe = std::max<std::uint64_t>(next_power_of_two(universe), 2);
  p.inst = distinct_instance(std::move(ups), universe);
  return p;
}

std::vector<Fe> symbols(const std::string& str) {
  std::vector<Fe> out;
  for (unsigned char ch : str) out.push_back(Fe(ch));
  return out;
}

Prepared prepare_pattern(const InputArgs& in) {
  Prepared p;
  p.answer_kind = "count";
  require(in.text.empty() != in.text_file.empty(), "give exactly one of --text, --text-file");
  require(in.pattern.empty() != in.pattern_file.empty(), "give exactly one of --pattern, --pattern-file");
  std::vector<Fe> text = in.text_file.empty() ? symbols(in.text) : read_sequence_file(in.text_file);
  std::vector<Fe> pattern = in.pattern_file.empty() ? symbols(in.pattern) : read_sequence_file(in.pattern_file);
  require(!pattern.empty() && is_power_of_two(pattern.size()), "pattern length must be a power of two");
  require(pattern.size() <= text.size(), "pattern longer than the text");
  if (in.cyclic) {
    require(is_power_of_two(text.size()), "--cyclic needs a power-of-two text length");
  } else {
    // Pad with a symbol absent from the pattern so no window wraps around into a match.
    std::set<std::uint64_t> used;
    for (Fe v : pattern) used.insert(v.value());
    std::uint64_t sentinel = 0;
    while (used.count(sentinel)) ++sentinel;
    text.resize(next_power_of_two(text.size() + 1), Fe(sentinel));
  }
  p.inst = pattern_instance(std::move(text), std::move(pattern));
  return p;
}

Prepared prepare_dataparallel(const InputArgs& in) {
  Prepared p;
  p.answer_kind = "count";
  std::vector<std::vector<Fe>> recs;
  if (!in.records_file.empty()) {
    recs = read_records_file(in.records_file);
    require(!recs.empty(), "no records");
  } else {
    require(in.n >= 1 && in.fields >= 1, "give --records or --n");
    Rng rng(in.input_seed);
    for (std::size_t r = 0; r < in.n; ++r) recs.push_back(small_random(rng, in.fields, 2));
  }
  const std::vector<unsigned> select = in.select.empty() ? std::vector<unsigned>{0, 1} : in.select;
  const std::size_t fields = std::max<std::size_t>(next_power_of_two(recs[0].size()), 2);
  const std::size_t copies = std::max<std::size_t>(next_power_of_two(recs.size()), 2);
  for (unsigned f : select) require(f < recs[0].size(), "selected field " + std::to_string(f) + " out of range");
  LayeredCircuit base;
  try {
    base = build_conjunction_predicate(static_cast<unsigned>(fields), select);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::vector<Fe> input(copies * fields);
  for (std::size_t r = 0; r < recs.size(); ++r)
    std::copy(recs[r].begin(), recs[r].end(), input.begin() + static_cast<std::ptrdiff_t>(r * fields));
  p.inst = dataparallel_instance(SuperCircuit{std::move(base), log2_exact(copies)}, input);
  return p;
}

Prepared prepare(ProtocolId id, const InputArgs& in, std::ostream& err, std::optional<unsigned> header_k = {}) {
  switch (id) {
    case ProtocolId::kMatmulGkr:
    case ProtocolId::kMatmulTree:
    case ProtocolId::kMatmulSpecial: return prepare_matmul(id, in, err);
    case ProtocolId::kMatrixPower: return prepare_matpow(in, header_k, err);
    case ProtocolId::kDistinct: return prepare_distinct(in);
    case ProtocolId::kPattern: return prepare_pattern(in);
    case ProtocolId::kDataParallel: return prepare_dataparallel(in);
    default: break;
  }
  throw InputError(std::string("no command-line driver for protocol ") + protocol_name(id));
}

void print_answer(const Prepared& p, const std::vector<Fe>& outputs, bool force, std::ostream& out) {
  if (p.answer_kind == "count") {
    out << "result: " << decode_signed(outputs.at(0)) << '\n';
    return;
  }
  const std::size_t n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(outputs.size()))));
  if (!force && p.rows > 8) {
    out << "result: " << p.rows << "x" << p.rows << " matrix (use --print-output to show it)\n";
    return;
  }
  out << "result:\n";
  for (std::size_t i = 0; i < p.rows; ++i) {
    for (std::size_t j = 0; j < p.rows; ++j) out << (j ? " " : "") << decode_signed(outputs[i * n + j]);
    out << '\n';
  }
}

void append_tsv(const std::string& file, const std::vector<BenchReport>& rows) {
  if (file.empty()) return;
  const bool fresh = !std::filesystem::exists(file) || std::filesystem::file_size(file) == 0;
  std::ofstream os(file, std::ios::app);
  if (!os) throw InputError("cannot write " + file);
  if (fresh) os << tsv_header() << '\n';
  for (const auto& r : rows) os << to_tsv(r) << '\n';
}

void print_report(const BenchReport& rep, std::ostream& out) {
  std::vector<BenchReport> rows{rep};
  out << format_table(rows) << to_tsv(rep) << '\n';
}

int print_verdict(const Verdict& v, std::ostream& out) {
  if (v.accepted) {
    out << "verdict: accept\n";
    return 0;
  }
  out << "verdict: reject (" << v.reason << ")\n";
  return 1;
}

int run_protocol(ProtocolId id, const InputArgs& in, const RunArgs& run, std::ostream& out, std::ostream& err) {
  Prepared p = prepare(id, in, err);
  ProveResult proof = p.inst.prove(run.seed);
  const auto bytes = proof.writer.serialize();
  if (!run.out_file.empty()) write_bytes(run.out_file, bytes);
  Verdict v = p.inst.verify(bytes);
  const BenchReport rep = make_report(p.inst, proof, v);
  if (v.accepted) print_answer(p, v.outputs, in.print_output, out);
  print_report(rep, out);
  append_tsv(run.tsv_file, {rep});
  return print_verdict(v, out);
}

int verify_transcript(const std::string& file, const InputArgs& in, std::ostream& out, std::ostream& err) {
  const auto bytes = read_bytes(file);
  TranscriptHeader header;
  try {
    header = parse_header(bytes);
  } catch (const MalformedError& e) {
    out << "verdict: reject (" << e.what() << ")\n";
    return 1;
  }
  static const std::set<ProtocolId> kDriven{ProtocolId::kMatmulGkr,  ProtocolId::kMatmulTree, ProtocolId::kMatmulSpecial,
                                            ProtocolId::kMatrixPower, ProtocolId::kDistinct,   ProtocolId::kPattern,
                                            ProtocolId::kDataParallel};
  if (!kDriven.count(header.protocol)) {
    out << "verdict: reject (transcript is for " << protocol_name(header.protocol) << ")\n";
    return 1;
  }
  std::optional<unsigned> header_k;
  if (header.protocol == ProtocolId::kMatrixPower) header_k = header.size_param >> 8;
  Prepared p = prepare(header.protocol, in, err, header_k);
  Verdict v = p.inst.verify(bytes);
  out << "protocol: " << protocol_name(header.protocol) << "\nseed: " << header.seed << '\n';
  if (v.accepted) {
    print_answer(p, v.outputs, in.print_output, out);
    out << "rounds: " << v.stats.rounds << "\nbytes: " << v.stats.bytes() << '\n';
  }
  return print_verdict(v, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prove and verify outsourced computations with interactive proofs"};
  app.require_subcommand(1);
  InputArgs in;
  RunArgs runargs;

  struct Cmd {
    CLI::App* app;
    ProtocolId id;
  };
  std::vector<Cmd> protocol_cmds;
  auto* mgkr = app.add_subcommand("matmul-gkr", "Matrix product through the general circuit protocol");
  add_matrix_options(mgkr, in, false);
  protocol_cmds.push_back({mgkr, ProtocolId::kMatmulGkr});
  auto* mtree = app.add_subcommand("matmul-tree", "Matrix product, general protocol with the addition-tree shortcut");
  add_matrix_options(mtree, in, false);
  protocol_cmds.push_back({mtree, ProtocolId::kMatmulTree});
  auto* mspec = app.add_subcommand("matmul-special", "Matrix product through the single sum-check protocol");
  add_matrix_options(mspec, in, false);
  mspec->add_flag("--in-place", in.in_place, "Fold the input matrices in place while proving");
  protocol_cmds.push_back({mspec, ProtocolId::kMatmulSpecial});
  auto* mpow = app.add_subcommand("matpow", "Repeated squaring M^(2^k)");
  add_matrix_options(mpow, in, true);
  protocol_cmds.push_back({mpow, ProtocolId::kMatrixPower});
  auto* dist = app.add_subcommand("distinct", "Number of distinct items in a stream of updates");
  add_stream_options(dist, in);
  protocol_cmds.push_back({dist, ProtocolId::kDistinct});
  auto* pat = app.add_subcommand("pattern", "Occurrences of a pattern in a text");
  add_pattern_options(pat, in);
  protocol_cmds.push_back({pat, ProtocolId::kPattern});
  auto* dp = app.add_subcommand("dataparallel", "Count records whose selected fields multiply to one");
  add_dataparallel_options(dp, in);
  protocol_cmds.push_back({dp, ProtocolId::kDataParallel});
  for (auto& c : protocol_cmds) add_run_options(c.app, runargs);

  std::vector<std::string> bench_protocols{"matmul-gkr", "matmul-tree", "matmul-special", "matpow",
                                           "distinct",   "pattern",     "dataparallel"};
  std::vector<std::uint64_t> bench_sizes{16, 64};
  auto* bench = app.add_subcommand("bench", "Run a table of randomized instances");
  bench->add_option("--protocols", bench_protocols, "Protocols to run")->delimiter(',');
  bench->add_option("--sizes", bench_sizes, "Sizes to run for every protocol")->delimiter(',');
  bench->add_option("--seed", runargs.seed, "Seed for instances and verifier randomness");
  bench->add_option("--tsv", runargs.tsv_file, "Append tab-separated lines to this file");

  std::string fuzz_protocol = "matmul-special";
  std::uint64_t fuzz_size = 16, fuzz_trials = 500;
  std::vector<std::string> fuzz_mutations;
  auto* fuzz = app.add_subcommand("fuzz", "Mutate honest transcripts and count rejections");
  fuzz->add_option("--protocol", fuzz_protocol, "Protocol to attack (also 'circuit' for a multiplication tree)");
  fuzz->add_option("--size", fuzz_size, "Instance size");
  fuzz->add_option("--trials", fuzz_trials, "Trials per mutation");
  fuzz->add_option("--mutation", fuzz_mutations, "Mutations (default: all)")->delimiter(',');
  fuzz->add_option("--seed", runargs.seed, "Seed");

  std::string transcript_file;
  auto* vt = app.add_subcommand("verify-transcript", "Re-verify a stored transcript against the inputs");
  vt->add_option("--transcript", transcript_file, "Transcript file")->required();
  add_matrix_options(vt, in, false);
  vt->add_option("--m", in.m_file, "Matrix file for matpow");
  vt->add_option("--k", in.k, "Exponent level for matpow (default: from the header)");
  vt->add_flag("--in-place", in.in_place, "Accepted for symmetry with matmul-special; verification is unchanged");
  vt->add_option("--stream", in.stream_file, "Stream file for distinct");
  vt->add_option("--universe", in.universe, "Universe for distinct");
  add_pattern_options(vt, in);
  vt->add_option("--records", in.records_file, "Records file for dataparallel");
  vt->add_option("--select", in.select, "Selected fields for dataparallel")->delimiter(',');
  vt->add_option("--fields", in.fields, "Fields per generated record");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    for (auto& c : protocol_cmds)
      if (c.app->parsed()) return run_protocol(c.id, in, runargs, out, err);

    if (bench->parsed()) {
      BenchConfig cfg;
      for (const auto& name : bench_protocols) cfg.protocols.push_back(parse_protocol(name));
      cfg.sizes = bench_sizes;
      cfg.seed = runargs.seed;
      for (auto s : cfg.sizes) require(is_power_of_two(s) && s >= 2, "bench sizes must be powers of two >= 2");
      const auto rows = bench_suite(cfg);
      out << format_table(rows) << tsv_header() << '\n';
      for (const auto& r : rows) out << to_tsv(r) << '\n';
      append_tsv(runargs.tsv_file, rows);
      return std::all_of(rows.begin(), rows.end(), [](const BenchReport& r) { return r.accepted; }) ? 0 : 1;
    }

    if (fuzz->parsed()) {
      const ProtocolId id = parse_protocol(fuzz_protocol);
      require(is_power_of_two(fuzz_size) && fuzz_size >= 2, "--size must be a power of two >= 2");
      std::vector<Mutation> muts;
      if (fuzz_mutations.empty())
        muts.assign(std::begin(kAllMutations), std::end(kAllMutations));
      else
        for (const auto& name : fuzz_mutations) muts.push_back(parse_mutation(name));
      Rng rng(runargs.seed);
      const ProtocolInstance inst = random_instance(id, fuzz_size, rng);
      bool ok = true;
      out << "protocol\tsize\tmutation\ttrials\tapplicable\trejected\n";
      for (Mutation m : muts) {
        const FuzzStats st = fuzz_soundness(inst, m, fuzz_trials, rng);
        out << fuzz_protocol << '\t' << fuzz_size << '\t' << mutation_name(m) << '\t' << st.trials << '\t'
            << st.applicable << '\t' << st.rejected << '\n';
        ok = ok && (m == Mutation::kNone ? st.rejected == 0 : st.all_rejected());
      }
      return ok ? 0 : 1;
    }

    if (vt->parsed()) return verify_transcript(transcript_file, in, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace vc::cli
