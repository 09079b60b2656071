// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset. Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vc/dataparallel.hpp"
#include "vc/fuzz.hpp"
#include "vc/gkr.hpp"
#include "vc/matmul.hpp"
#include "vc/patternmatch.hpp"
#include "vc/protocols.hpp"
#include "vc/report.hpp"

using vc::BitSource;
using vc::Fe;
using vc::GateOp;
using vc::Point;
using vc::ProtocolId;
using vc::RegularWiring;

namespace {

// ---- Pinned targets and tolerances ---------------------------------------------------

constexpr int kEquivalenceSeeds = 50;
constexpr double kEquivalenceBudgetS = 300;

constexpr int kCompletenessInstances = 200;

constexpr int kFuzzTrials = 500;
constexpr int kFuzzInstances = 5;  // honest transcripts per (protocol, mutation); trials split evenly

constexpr std::uint64_t kSpecialRounds1024 = 11;
constexpr std::uint64_t kSpecialRounds2048 = 12;

constexpr double kMatmultRounds = 190, kMatmultRoundSlack = 2;
constexpr double kMatmultKB = 4.4, kTreeKB = 0.76, kDistinctKB = 40.76;
constexpr double kTreeRounds = 35;
constexpr double kDistinctRounds = 1361;
constexpr double kBytesTolerance = 0.10, kDistinctRoundTolerance = 0.05;
constexpr double kRoundCountBudgetS = 600;

constexpr double kOverheadRatioMax = 0.10;
constexpr std::uint64_t kMultsPerEntry = 24;

constexpr double kDoublingRatioLow = 6, kDoublingRatioHigh = 11;
constexpr int kGrowthReps = 5;

constexpr int kMleInstances = 200;
constexpr unsigned kMleMaxVars = 16;
constexpr std::uint64_t kChiWorkPerEntry = 4;

constexpr int kIdentityDraws = 300;
constexpr unsigned kIdentityMaxVars = 4;

// ---- Helpers ----------------------------------------------------------------------------

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report.
struct Failures {
  std::uint64_t count = 0;
  std::vector<std::string> first;
  void add(const std::string& what) {
    if (count++ < 12) first.push_back(what);
  }
  std::string summary() const {
    std::string s = std::to_string(count) + " failure(s)";
    for (const auto& f : first) s += "; " + f;
    return s;
  }
};

Point random_point(vc::Rng& rng, std::size_t dim, bool nonzero = true) {
  Point p;
  for (std::size_t k = 0; k < dim; ++k) p.push_back(nonzero ? vc::random_nonzero(rng) : vc::random_element(rng));
  return p;
}

Point boolean_point(std::uint64_t label, unsigned bits) {
  Point p(bits);
  for (unsigned k = 0; k < bits; ++k) p[k] = Fe((label >> (bits - 1 - k)) & 1);
  return p;
}

Point cat(Point x, const Point& y) {
  x.insert(x.end(), y.begin(), y.end());
  return x;
}

// Runs a fast prover against the brute-force prover with shared challenges. Returns the
// challenges, or nullopt on the first differing round.
std::optional<Point> naive_equivalent(vc::RoundProver& fast, const vc::SumcheckInstance& inst, vc::Rng& rng,
                                      bool nonzero = true) {
  Point bound;
  for (unsigned j = 0; j < inst.num_vars; ++j) {
    if (fast.round(j).evals != vc::prover_round_naive(inst, bound, j + 1).evals) return std::nullopt;
    Fe r = nonzero ? vc::random_nonzero(rng) : vc::random_element(rng);
    fast.bind(r);
    bound.push_back(r);
  }
  return bound;
}

// Random regular wiring with out_bits output and in_bits input label bits.
RegularWiring random_wiring(vc::Rng& rng, unsigned out_bits, unsigned in_bits, unsigned max_selectors) {
  RegularWiring w;
  w.out_bits = out_bits;
  w.in_bits = in_bits;
  std::vector<unsigned> positions(out_bits);
  for (unsigned b = 0; b < out_bits; ++b) positions[b] = b;
  std::shuffle(positions.begin(), positions.end(), rng);
  const unsigned sel = std::min<unsigned>(static_cast<unsigned>(rng() % (max_selectors + 1)), out_bits);
  w.selector_bits.assign(positions.begin(), positions.begin() + sel);
  std::vector<unsigned> free_bits(positions.begin() + sel, positions.end());
  auto random_map = [&] {
    vc::BitMap m;
    for (unsigned o = 0; o < in_bits; ++o) {
      if (free_bits.empty() || rng() % 4 == 0)
        m.bits.push_back(BitSource::fixed(static_cast<unsigned>(rng() % 2)));
      else
        m.bits.push_back(BitSource::from(free_bits[rng() % free_bits.size()], rng() % 3 == 0));
    }
    return m;
  };
  const GateOp ops[] = {GateOp::kAdd, GateOp::kMul, GateOp::kCopy};
  for (std::size_t rho = 0; rho < (std::size_t{1} << sel); ++rho) {
    vc::WiringCase c;
    c.op = ops[rng() % 3];
    c.in1 = random_map();
    if (c.op != GateOp::kCopy) c.in2 = rng() % 5 == 0 ? c.in1 : random_map();
    w.cases.push_back(std::move(c));
  }
  w.similar = rng() % 2;
  w.validate();
  return w;
}

// Circuit whose layers all carry random regular wirings; log_sizes lists layers output
// first, the last entry being the input.
vc::LayeredCircuit random_regular_circuit(vc::Rng& rng, const std::vector<unsigned>& log_sizes,
                                          unsigned max_selectors = 2) {
  vc::LayeredCircuit c;
  c.input_log_size = log_sizes.back();
  for (std::size_t i = 0; i + 1 < log_sizes.size(); ++i)
    c.layers.push_back(vc::layer_from_wiring(random_wiring(rng, log_sizes[i], log_sizes[i + 1], max_selectors)));
  return c;
}

// Hand-made layer with selectors, negations, constants, a copy case and a repeated source bit.
vc::LayeredCircuit irregular_mix() {
  RegularWiring w;
  w.out_bits = 5;
  w.in_bits = 5;
  w.selector_bits = {1, 4};
  auto f = [](unsigned b, bool neg = false) { return BitSource::from(b, neg); };
  auto k = [](unsigned v) { return BitSource::fixed(v); };
  w.cases.push_back({GateOp::kMul, {{f(0), f(2, true), k(1), f(3), f(3)}}, {{f(3), f(0), f(2), k(0), f(2, true)}}});
  w.cases.push_back({GateOp::kAdd, {{f(2), f(2), f(0), f(3, true), k(1)}}, {{f(0, true), k(1), f(2), f(3), f(3)}}});
  w.cases.push_back({GateOp::kCopy, {{f(3), f(2), f(0), k(0), f(0)}}, {}});
  w.cases.push_back({GateOp::kMul, {{f(0), f(2, true), k(1), f(3), f(3)}}, {{f(0), f(2, true), k(1), f(3), f(3)}}});
  vc::LayeredCircuit c;
  c.input_log_size = 5;
  c.layers.push_back(vc::layer_from_wiring(w));
  return c;
}

// Random add/mul circuit with arbitrary gate wiring (no descriptor).
vc::LayeredCircuit random_gate_circuit(vc::Rng& rng, const std::vector<unsigned>& log_sizes) {
  vc::LayeredCircuit c;
  c.input_log_size = log_sizes.back();
  for (std::size_t i = 0; i + 1 < log_sizes.size(); ++i) {
    const std::uint64_t in_n = std::uint64_t{1} << log_sizes[i + 1];
    std::vector<vc::Gate> gates;
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << log_sizes[i]); ++g)
      gates.push_back({rng() % 2 ? GateOp::kAdd : GateOp::kMul, rng() % in_n, rng() % in_n});
    c.layers.push_back(vc::layer_from_gates(gates, log_sizes[i + 1]));
  }
  return c;
}

// Checks every described layer of c on one random input. Returns false on a mismatch in
// a round message or a final claim.
bool layers_match_naive(const vc::LayeredCircuit& c, vc::Rng& rng, std::string& where) {
  auto vals = vc::evaluate(c, vc::random_vector(rng, std::size_t{1} << c.input_log_size));
  for (unsigned i = 1; i < c.depth(); ++i) {
    if (!c.layers[i - 1].wiring) continue;
    const RegularWiring& w = *c.layers[i - 1].wiring;
    Point z = random_point(rng, w.out_bits);
    if (rng() % 4 == 0 && !z.empty()) z[rng() % z.size()] = Fe(0);
    const auto& next = vals[i];
    auto inst = vc::layer_instance(w, z, next, vc::eval_mle_table(vals[i - 1], z),
                                   [&](const Point& p) { return vc::layer_polynomial_general(w, z, next, p); });
    vc::FastLayerProver fast(w, z, next);
    auto r = naive_equivalent(fast, inst, rng);
    auto maps = w.distinct_maps();
    bool ok = r.has_value() && fast.claims().size() == maps.size();
    for (std::size_t k = 0; ok && k < maps.size(); ++k) ok = fast.claims()[k] == vc::eval_mle_table(next, maps[k].apply(*r));
    if (!ok) {
      where = "layer " + std::to_string(i);
      return false;
    }
  }
  return true;
}

std::vector<Fe> joined(const std::vector<Fe>& a, const std::vector<Fe>& b) {
  auto ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return ab;
}

// ---- Extra protocol instances ----------------------------------------------------------

// Plain GKR over a circuit with general regular wiring.
vc::ProtocolInstance general_circuit_instance(vc::LayeredCircuit c, std::vector<Fe> input, vc::GkrOptions opt) {
  auto circuit = std::make_shared<const vc::LayeredCircuit>(std::move(c));
  auto in = std::make_shared<const std::vector<Fe>>(std::move(input));
  opt.size_param = static_cast<std::uint16_t>(circuit->input_log_size);
  vc::ProtocolInstance inst;
  inst.protocol = ProtocolId::kCircuit;
  inst.size = in->size();
  inst.prove = [circuit, in, opt](std::uint64_t seed) { return vc::prove_circuit(*circuit, *in, seed, opt); };
  inst.verify = [circuit, in, opt](std::span<const std::uint8_t> bytes) {
    return vc::verify_circuit(*circuit, vc::dense_stream(*in), bytes, opt);
  };
  return inst;
}

// Stand-alone sum-check over a product of `factors` random multilinear tables.
vc::ProtocolInstance sumcheck_instance(unsigned vars, unsigned factors, vc::Rng& rng) {
  auto tables = std::make_shared<std::vector<std::vector<Fe>>>();
  for (unsigned f = 0; f < factors; ++f) tables->push_back(vc::random_vector(rng, std::size_t{1} << vars));
  auto inst = std::make_shared<vc::SumcheckInstance>();
  inst->num_vars = vars;
  inst->degrees.assign(vars, factors);
  inst->oracle = [tables](const Point& x) {
    Fe prod = Fe::one();
    for (const auto& t : *tables) prod *= vc::eval_mle_table(t, x);
    return prod;
  };
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << vars); ++s) {
    Fe prod = Fe::one();
    for (const auto& t : *tables) prod *= t[s];
    inst->claimed_sum += prod;
  }
  vc::ProtocolInstance out;
  out.protocol = ProtocolId::kSumcheck;
  out.size = std::uint64_t{1} << vars;
  out.prove = [inst](std::uint64_t seed) {
    vc::ProveResult res;
    res.writer = vc::TranscriptWriter({ProtocolId::kSumcheck, static_cast<std::uint16_t>(inst->num_vars), seed});
    vc::NaiveRoundProver prover(*inst);
    vc::prove_sumcheck(prover, inst->degrees, res.writer, vc::ChallengeMode::kField);
    return res;
  };
  out.verify = [inst](std::span<const std::uint8_t> bytes) {
    auto r = vc::reverify_sumcheck(*inst, bytes);
    vc::Verdict v;
    v.accepted = r.accepted;
    v.reason = r.reason;
    v.stats = r.stats;
    return v;
  };
  return out;
}

// A named family of random instances used by the completeness and fuzz criteria.
struct Family {
  std::string name;
  std::function<vc::ProtocolInstance(vc::Rng&)> make;
};

std::uint64_t pick(vc::Rng& rng, std::initializer_list<std::uint64_t> sizes) {
  return *(sizes.begin() + rng() % sizes.size());
}

std::vector<Family> families(bool small) {
  auto lib = [small](ProtocolId id, std::initializer_list<std::uint64_t> sizes, std::uint64_t fuzz_size) {
    std::vector<std::uint64_t> options(sizes);
    return Family{vc::protocol_name(id), [id, options, small, fuzz_size](vc::Rng& rng) {
                    const std::uint64_t size = small ? fuzz_size : options[rng() % options.size()];
                    return vc::random_instance(id, size, rng);
                  }};
  };
  std::vector<Family> out{
      lib(ProtocolId::kCircuit, {2, 4, 16, 64, 256}, 16),
      lib(ProtocolId::kMatmulGkr, {2, 4, 8}, 4),
      lib(ProtocolId::kMatmulTree, {2, 4, 8}, 4),
      lib(ProtocolId::kMatmulSpecial, {2, 4, 8, 16, 32}, 8),
      lib(ProtocolId::kMatrixPower, {2, 4, 8}, 4),
      lib(ProtocolId::kDistinct, {2, 8, 32, 128}, 16),
      lib(ProtocolId::kPattern, {2, 4, 8, 16, 64}, 16),
      lib(ProtocolId::kDataParallel, {1, 2, 8, 32}, 8),
  };
  out.push_back({"circuit-general", [small](vc::Rng& rng) {
                   vc::LayeredCircuit c;
                   switch (rng() % 5) {
                     case 0: c = irregular_mix(); break;
                     case 1: c = vc::build_distinct_circuit(small ? 4 : pick(rng, {2, 4, 8})); break;
                     case 2: c = vc::build_matmult_circuit(small ? 2 : pick(rng, {2, 4})); break;
                     default: c = random_regular_circuit(rng, {2, 3, 3, 4}, 1); break;
                   }
                   vc::GkrOptions opt;
                   opt.addition_tree_shortcut = rng() % 2;
                   opt.table_input_check = rng() % 2;
                   return general_circuit_instance(c, vc::random_vector(rng, std::size_t{1} << c.input_log_size), opt);
                 }});
  out.push_back({"sumcheck", [small](vc::Rng& rng) {
                   return sumcheck_instance(small ? 4 : static_cast<unsigned>(1 + rng() % 6),
                                            static_cast<unsigned>(1 + rng() % 3), rng);
                 }});
  return out;
}

// ---- Criteria ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = Clock::now();
  vc::Rng rng(1001);
  std::vector<std::pair<std::string, int>> done;
  Failures fail;
  auto family = [&](const std::string& name, const std::function<bool(int, std::string&)>& one_seed) {
    int ok = 0;
    for (int s = 0; s < kEquivalenceSeeds; ++s) {
      std::string where;
      if (one_seed(s, where))
        ++ok;
      else
        fail.add(name + " seed " + std::to_string(s) + " " + where);
    }
    done.emplace_back(name, ok);
  };

  family("tree layers", [&](int s, std::string& where) {
    auto c = vc::build_binary_tree(std::uint64_t{2} << (s % 5), s % 2 ? GateOp::kAdd : GateOp::kMul);
    return layers_match_naive(c, rng, where);
  });
  family("distinct layers", [&](int s, std::string& where) {
    return layers_match_naive(vc::build_distinct_circuit(s % 2 ? 4 : 2), rng, where);
  });
  family("matmult layers", [&](int s, std::string& where) {
    return layers_match_naive(vc::build_matmult_circuit(s % 2 ? 4 : 2), rng, where);
  });
  family("pattern circuit layers", [&](int, std::string& where) {
    return layers_match_naive(vc::build_patternmatch_layers(4, 2), rng, where);
  });
  family("general regular layers", [&](int s, std::string& where) {
    if (s % 3 == 0) return layers_match_naive(irregular_mix(), rng, where);
    const unsigned out = 1 + rng() % 5, mid = 1 + rng() % 4, in = 1 + rng() % 5;
    return layers_match_naive(random_regular_circuit(rng, {out, mid, in}, 3), rng, where);
  });
  family("addition tree", [&](int s, std::string& where) {
    const unsigned k = 1 + s % 8;
    auto leaves = vc::random_vector(rng, std::size_t{1} << k);
    Point z = random_point(rng, rng() % k);
    auto inst = vc::addition_tree_instance(leaves, z);
    vc::AdditionTreeProver fast(leaves, z);
    auto r = naive_equivalent(fast, inst, rng);
    where = "k=" + std::to_string(k);
    return r && fast.final_value() == vc::eval_mle_table(leaves, cat(z, *r));
  });
  family("data-parallel layers", [&](int s, std::string& where) {
    static const std::vector<std::pair<std::vector<unsigned>, unsigned>> shapes{
        {{2, 3, 3}, 2}, {{1, 2, 2}, 3}, {{0, 1, 2}, 4}, {{2, 2, 2}, 0}, {{3, 1, 1}, 2}};
    const auto& [sizes, b] = shapes[s % shapes.size()];
    vc::SuperCircuit sc{random_gate_circuit(rng, sizes), b};
    auto vals = vc::evaluate_super(sc, vc::random_vector(rng, std::size_t{1} << sc.log_size(sc.depth())));
    for (unsigned layer = 1; layer < sc.depth(); ++layer) {
      if ((std::uint64_t{1} << sc.log_size(layer)) > 1024) return false;
      Point z = random_point(rng, sc.log_size(layer), false);
      vc::SumcheckInstance inst;
      inst.degrees = vc::dataparallel_degrees(sc, layer);
      inst.num_vars = static_cast<unsigned>(inst.degrees.size());
      inst.claimed_sum = vc::eval_mle_table(vals[layer - 1], z);
      const auto& next = vals[layer];
      inst.oracle = [&, layer, z](const Point& x) { return vc::dataparallel_layer_polynomial(sc, layer, z, next, x); };
      vc::DataParallelLayerProver pr(sc, layer, z, next);
      auto r = naive_equivalent(pr, inst, rng);
      where = "layer " + std::to_string(layer);
      if (!r) return false;
      const unsigned so = sc.base.log_size(layer), si = sc.base.log_size(layer + 1);
      Point p2(r->begin() + so + 2 * si, r->end());
      Point w1 = cat(Point(r->begin() + so, r->begin() + so + si), p2);
      Point g1 = cat(Point(r->begin() + so + si, r->begin() + so + 2 * si), p2);
      if (pr.claims() != std::pair{vc::eval_mle_table(next, w1), vc::eval_mle_table(next, g1)}) return false;
    }
    return true;
  });
  family("matrix product", [&](int s, std::string& where) {
    const std::size_t n = std::size_t{2} << (s % 3);
    const unsigned log_n = vc::log2_exact(n);
    auto a = vc::random_vector(rng, n * n), b = vc::random_vector(rng, n * n);
    Point r1 = random_point(rng, log_n, false), r2 = random_point(rng, log_n, false);
    auto inst = vc::matmul_instance(a, b, n, r1, r2);
    vc::MatmulRoundProver copy(a, b, n, r1, r2);
    auto r3 = naive_equivalent(copy, inst, rng, false);
    where = "n=" + std::to_string(n);
    if (!r3 || copy.row_value() != vc::eval_mle_table(a, cat(r1, *r3)) ||
        copy.col_value() != vc::eval_mle_table(b, cat(*r3, r2)))
      return false;
    auto ia = a, ib = b;
    auto in_place = vc::MatmulRoundProver::in_place(ia, ib, n, r1, r2);
    where += " in place";
    return naive_equivalent(in_place, inst, rng, false).has_value();
  });
  family("pattern layer", [&](int s, std::string& where) {
    auto text = vc::random_vector(rng, 4), pattern = vc::random_vector(rng, 2);
    Point z = random_point(rng, 3, s % 2 == 0);
    auto inst = vc::pattern_layer_instance(text, pattern, z);
    vc::PatternLayerProver pr(text, pattern, z);
    auto r = naive_equivalent(pr, inst, rng);
    if (!r) return false;
    auto p = vc::split_pattern_point(pr.shape(), *r);
    return pr.claims() == std::pair{vc::eval_mle_table(text, p.text_point()), vc::eval_mle_table(pattern, p.pattern_point())};
  });

  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  for (const auto& [name, ok] : done) os << name << " " << ok << "/" << kEquivalenceSeeds << ", ";
  os << "time " << elapsed << " s (limit " << kEquivalenceBudgetS << ")";
  if (fail.count) os << "; " << fail.summary();
  return {fail.count == 0 && elapsed < kEquivalenceBudgetS, os.str()};
}

Outcome criterion2() {
  vc::Rng rng(1002);
  Failures fail;
  std::ostringstream os;
  for (const auto& fam : families(false)) {
    int accepted = 0;
    for (int t = 0; t < kCompletenessInstances; ++t) {
      auto inst = fam.make(rng);
      vc::ProveResult proof;
      vc::Verdict v;
      try {
        proof = inst.prove(rng());
        v = inst.verify(proof.writer.serialize());
      } catch (const std::exception& e) {
        v.reason = std::string("exception: ") + e.what();
      }
      // The pattern verifier reports the occurrence count rather than the raw circuit output.
      const bool comparable = inst.protocol != ProtocolId::kPattern && !proof.outputs.empty() && !v.outputs.empty();
      if (v.accepted && (!comparable || v.outputs == proof.outputs))
        ++accepted;
      else
        fail.add(fam.name + " size " + std::to_string(inst.size) + ": " +
                 (v.accepted ? "outputs differ " + std::to_string(v.outputs.size()) + "/" + std::to_string(proof.outputs.size()) : v.reason));
    }
    os << fam.name << " " << accepted << "/" << kCompletenessInstances << ", ";
  }
  if (fail.count) os << fail.summary();
  return {fail.count == 0, os.str()};
}

Outcome criterion3() {
  vc::Rng rng(1003);
  Failures fail;
  std::ostringstream os;
  std::uint64_t total = 0;
  std::vector<std::string> not_applicable;
  const int per_instance = kFuzzTrials / kFuzzInstances;
  for (const auto& fam : families(true)) {
    std::vector<vc::ProtocolInstance> instances;
    for (int k = 0; k < kFuzzInstances; ++k) instances.push_back(fam.make(rng));
    // Control: unmutated transcripts must all be accepted.
    std::uint64_t control_rejected = 0;
    for (const auto& inst : instances)
      control_rejected += vc::fuzz_soundness(inst, vc::Mutation::kNone, per_instance, rng).rejected;
    if (control_rejected) fail.add(fam.name + " control rejected " + std::to_string(control_rejected));
    for (vc::Mutation m : vc::kAllMutations) {
      vc::FuzzStats sum;
      for (const auto& inst : instances) {
        auto st = vc::fuzz_soundness(inst, m, per_instance, rng);
        sum.trials += st.trials;
        sum.applicable += st.applicable;
        sum.rejected += st.rejected;
      }
      total += sum.trials;
      if (sum.applicable == 0) {
        not_applicable.push_back(fam.name + "/" + vc::mutation_name(m));
        continue;
      }
      if (sum.applicable != sum.trials)
        fail.add(fam.name + " " + vc::mutation_name(m) + " applicable " + std::to_string(sum.applicable) + "/" +
                 std::to_string(sum.trials));
      if (!sum.all_rejected())
        fail.add(fam.name + " " + vc::mutation_name(m) + " rejected " + std::to_string(sum.rejected) + "/" +
                 std::to_string(sum.applicable));
    }
  }
  os << families(true).size() << " protocols x " << std::size(vc::kAllMutations) << " mutations x " << kFuzzTrials
     << " trials (" << total << " mutated transcripts); no target message in";
  for (const auto& na : not_applicable) os << " " << na;
  if (fail.count) os << "; " << fail.summary();
  return {fail.count == 0, os.str()};
}

// Honest special-purpose product proof with a diagonal right factor, so that the
// product itself costs O(n^2).
std::uint64_t special_rounds(std::size_t n, vc::Rng& rng, std::string& reason) {
  auto a = vc::random_vector(rng, n * n);
  std::vector<Fe> b(n * n);
  auto diag = vc::random_vector(rng, n);
  for (std::size_t j = 0; j < n; ++j) b[j * n + j] = diag[j];
  auto d = a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] *= diag[j];
  auto proof = vc::prove_matmul(a, b, d, n, rng());
  auto ab = joined(a, b);
  auto v = vc::verify_matmul(n, vc::dense_stream(ab), proof.writer.serialize());
  if (!v.accepted) {
    reason = v.reason;
    return 0;
  }
  return v.stats.rounds;
}

Outcome criterion4() {
  vc::Rng rng(1004);
  std::string r1, r2;
  const auto at1024 = special_rounds(1024, rng, r1);
  const auto at2048 = special_rounds(2048, rng, r2);
  std::ostringstream os;
  os << "n=1024 rounds " << at1024 << " (want " << kSpecialRounds1024 << "), n=2048 rounds " << at2048 << " (want "
     << kSpecialRounds2048 << ")" << r1 << r2;
  return {at1024 == kSpecialRounds1024 && at2048 == kSpecialRounds2048, os.str()};
}

bool within(double value, double target, double rel) { return value >= target * (1 - rel) && value <= target * (1 + rel); }

Outcome criterion5() {
  const auto t0 = Clock::now();
  vc::Rng rng(1006);
  auto plain = vc::run_once(vc::random_instance(ProtocolId::kMatmulGkr, 256, rng), rng());
  auto tree = vc::run_once(vc::random_instance(ProtocolId::kMatmulTree, 256, rng), rng());
  auto distinct = vc::run_once(vc::random_instance(ProtocolId::kDistinct, std::uint64_t{1} << 20, rng), rng());
  const double elapsed = seconds_since(t0);
  auto kb = [](const vc::BenchReport& r) { return r.bytes / 1024.0; };

  const bool plain_ok = plain.accepted && std::abs(double(plain.rounds) - kMatmultRounds) <= kMatmultRoundSlack &&
                        within(kb(plain), kMatmultKB, kBytesTolerance);
  const bool tree_ok = tree.accepted && double(tree.rounds) == kTreeRounds && within(kb(tree), kTreeKB, kBytesTolerance);
  const bool distinct_ok = distinct.accepted && within(double(distinct.rounds), kDistinctRounds, kDistinctRoundTolerance) &&
                           within(kb(distinct), kDistinctKB, kBytesTolerance);
  std::ostringstream os;
  os.precision(4);
  os << "matmult n=256 " << plain.rounds << " rounds " << kb(plain) << " KB (want " << kMatmultRounds << "+-"
     << kMatmultRoundSlack << ", " << kMatmultKB << " KB); with addition tree " << tree.rounds << " rounds " << kb(tree)
     << " KB (want " << kTreeRounds << ", " << kTreeKB << " KB); distinct n=2^20 " << distinct.rounds << " rounds "
     << kb(distinct) << " KB (want " << kDistinctRounds << ", " << kDistinctKB << " KB); time " << elapsed
     << " s (limit " << kRoundCountBudgetS << ")";
  return {plain_ok && tree_ok && distinct_ok && elapsed < kRoundCountBudgetS, os.str()};
}

Outcome criterion6() {
  vc::Rng rng(1007);
  const std::size_t n = 1024;
  auto a = vc::random_vector(rng, n * n), b = vc::random_vector(rng, n * n);
  const auto t0 = Clock::now();
  auto d = vc::matmul_naive(a, b, n);
  const double naive_ms = seconds_since(t0) * 1e3;
  double proof_ms = 1e300;
  vc::MatmulStats stats;
  bool accepted = true;
  for (int rep = 0; rep < 3; ++rep) {
    vc::MatmulStats s;
    auto proof = vc::prove_matmul(a, b, d, n, rng(), &s);
    proof_ms = std::min(proof_ms, proof.proof_ms);
    stats = s;
    if (rep == 0) accepted = vc::verify_matmul(n, vc::dense_stream(joined(a, b)), proof.writer.serialize()).accepted;
  }
  const double ratio = proof_ms / naive_ms;
  std::ostringstream os;
  os.precision(4);
  os << "n=1024 proof " << proof_ms << " ms vs naive product " << naive_ms << " ms, ratio " << ratio << " (limit "
     << kOverheadRatioMax << "); mults " << stats.mults << " (limit " << kMultsPerEntry * n * n << ")"
     << (accepted ? "" : "; proof rejected");
  return {accepted && ratio <= kOverheadRatioMax && stats.mults <= kMultsPerEntry * n * n, os.str()};
}

// CPU time of the calling thread; unlike wall time it excludes intervals where the
// process is descheduled.
double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return ts.tv_sec * 1e3 + ts.tv_nsec / 1e6;
}

// Proof generation for the MATMULT circuit, timed the same way prove_circuit does but
// with both clocks.
std::pair<double, double> matmult_proof_ms(const vc::LayeredCircuit& c, const std::vector<Fe>& input, std::uint64_t seed) {
  vc::LayerValues values = vc::evaluate(c, input);
  vc::TranscriptWriter w({ProtocolId::kMatmulGkr, static_cast<std::uint16_t>(c.input_log_size), seed});
  const auto wall0 = Clock::now();
  const double cpu0 = thread_cpu_ms();
  auto top = vc::prove_outputs(values[0], w);
  vc::prove_layers(c, values, 1, c.depth(), {top}, w, vc::GkrOptions{});
  return {seconds_since(wall0) * 1e3, thread_cpu_ms() - cpu0};
}

Outcome criterion7() {
  vc::Rng rng(1008);
  const std::size_t sizes[] = {64, 128, 256};
  std::vector<vc::LayeredCircuit> circuits;
  std::vector<std::vector<Fe>> inputs;
  for (std::size_t n : sizes) {
    circuits.push_back(vc::build_matmult_circuit(n));
    inputs.push_back(vc::random_vector(rng, 2 * n * n));
  }
  // Same number of interleaved repetitions per size; the minimum filters scheduler noise.
  double wall[3] = {1e300, 1e300, 1e300}, cpu[3] = {1e300, 1e300, 1e300};
  for (int rep = 0; rep < kGrowthReps; ++rep)
    for (std::size_t k = 0; k < 3; ++k) {
      auto [w, c] = matmult_proof_ms(circuits[k], inputs[k], rng());
      wall[k] = std::min(wall[k], w);
      cpu[k] = std::min(cpu[k], c);
    }
  const double r1 = cpu[1] / cpu[0], r2 = cpu[2] / cpu[1];
  auto in_band = [](double r) { return r >= kDoublingRatioLow && r <= kDoublingRatioHigh; };
  std::ostringstream os;
  os.precision(4);
  os << "proof cpu ms n=64 " << cpu[0] << ", n=128 " << cpu[1] << ", n=256 " << cpu[2] << "; ratios " << r1 << ", "
     << r2 << " (band [" << kDoublingRatioLow << ", " << kDoublingRatioHigh << "], best of " << kGrowthReps
     << "); wall ms " << wall[0] << ", " << wall[1] << ", " << wall[2] << " (ratios " << wall[1] / wall[0] << ", "
     << wall[2] / wall[1] << ")";
  return {in_band(r1) && in_band(r2), os.str()};
}

Outcome criterion8() {
  vc::Rng rng(1009);
  Failures fail;
  std::uint64_t worst_work_num = 0, worst_work_den = 1;
  for (int t = 0; t < kMleInstances; ++t) {
    const unsigned v = 1 + static_cast<unsigned>(t % kMleMaxVars);
    const std::uint64_t n = std::uint64_t{1} << v;
    std::vector<vc::StreamUpdate> ups(1 + rng() % (2 * n));
    for (auto& u : ups) u = {rng() % n, static_cast<std::int64_t>(rng() % 2001) - 1000};
    Point w = random_point(rng, v, false);
    if (t % 7 == 0) w[rng() % v] = Fe(0);
    if (t % 11 == 0) w[rng() % v] = Fe(1);
    const Fe streamed = vc::eval_mle_stream(ups, w);
    const auto freq = vc::ingest_stream(ups, n);
    std::uint64_t work = 0;
    auto chi = vc::build_chi_table(w, &work);
    Fe memo;
    for (std::uint64_t b = 0; b < n; ++b) memo += freq[b] * chi[b];
    if (streamed != memo || memo != vc::eval_mle_table(freq, w)) fail.add("instance " + std::to_string(t) + " v=" + std::to_string(v));
    if (work > kChiWorkPerEntry * n) fail.add("chi table work " + std::to_string(work) + " at n=" + std::to_string(n));
    if (work * worst_work_den > worst_work_num * n) worst_work_num = work, worst_work_den = n;
  }
  std::ostringstream os;
  os << kMleInstances << " instances up to n=2^" << kMleMaxVars << ", max chi-table work " << worst_work_num << "/"
     << worst_work_den << " per entry bound " << kChiWorkPerEntry;
  if (fail.count) os << "; " << fail.summary();
  return {fail.count == 0, os.str()};
}

Outcome criterion9() {
  vc::Rng rng(1010);
  Failures fail;
  // Product identity: sum over the middle index of A~(r1, p) B~(p, r2) is the MLE of AB.
  for (int t = 0; t < kIdentityDraws; ++t) {
    const std::size_t n = std::size_t{2} << (t % 2);  // 2 or 4 variables in D~
    const unsigned log_n = vc::log2_exact(n);
    auto a = vc::random_vector(rng, n * n), b = vc::random_vector(rng, n * n);
    Point r1 = random_point(rng, log_n, false), r2 = random_point(rng, log_n, false);
    Fe sum;
    for (std::uint64_t p = 0; p < n; ++p)
      sum += vc::eval_mle_table(a, cat(r1, boolean_point(p, log_n))) * vc::eval_mle_table(b, cat(boolean_point(p, log_n), r2));
    if (sum != vc::eval_mle_table(vc::matmul_naive(a, b, n), cat(r1, r2))) fail.add("product draw " + std::to_string(t));
  }
  // Beta identity: sum over p of beta(z, p) W(p) is W~(z).
  for (int t = 0; t < kIdentityDraws; ++t) {
    const unsigned v = 1 + t % kIdentityMaxVars;
    auto table = vc::random_vector(rng, std::size_t{1} << v);
    Point z = random_point(rng, v, false);
    Fe sum;
    for (std::uint64_t p = 0; p < table.size(); ++p) sum += vc::beta_eval(z, boolean_point(p, v)) * table[p];
    if (sum != vc::eval_mle_table(table, z)) fail.add("beta draw " + std::to_string(t));
  }
  // Layer identity: the layer polynomial sums over the gate labels to V~_i(z).
  for (int t = 0; t < kIdentityDraws; ++t) {
    const unsigned out = 1 + t % kIdentityMaxVars, in = 1 + static_cast<unsigned>(rng() % kIdentityMaxVars);
    auto c = t % 5 == 0 ? vc::build_binary_tree(std::uint64_t{2} << (out - 1), t % 2 ? GateOp::kAdd : GateOp::kMul)
                        : random_regular_circuit(rng, {out, in}, 2);
    const RegularWiring& w = *c.layers[0].wiring;
    auto vals = vc::evaluate(c, vc::random_vector(rng, std::size_t{1} << c.input_log_size));
    Point z = random_point(rng, w.out_bits, false);
    Fe sum;
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << w.out_bits); ++p)
      sum += vc::layer_polynomial_general(w, z, vals[1], boolean_point(p, w.out_bits));
    if (sum != vc::eval_mle_table(vals[0], z)) fail.add("layer draw " + std::to_string(t));
  }
  std::ostringstream os;
  os << kIdentityDraws << " draws each of the product, beta and layer identities at <= " << kIdentityMaxVars
     << " variables";
  if (fail.count) os << "; " << fail.summary();
  return {fail.count == 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"naive-equivalence", criterion1}, {"completeness", criterion2},       {"soundness-fuzz", criterion3},
      {"special-rounds", criterion4},    {"round-communication", criterion5}, {"special-overhead", criterion6},
      {"prover-growth", criterion7},     {"mle-streaming-vs-memo", criterion8}, {"brute-force-identities", criterion9},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
