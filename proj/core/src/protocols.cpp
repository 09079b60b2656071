#include "vc/protocols.hpp"

#include <chrono>
#include <memory>
#include <stdexcept>

#include "vc/matmul.hpp"
#include "vc/patternmatch.hpp"

namespace vc {

namespace {

std::vector<Fe> joined(const std::vector<Fe>& a, const std::vector<Fe>& b) {
  std::vector<Fe> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return ab;
}

ProtocolInstance circuit_instance(ProtocolId id, std::uint64_t size, LayeredCircuit c, std::vector<Fe> input,
                                  GkrOptions opt) {
  opt.protocol = id;
  auto circuit = std::make_shared<const LayeredCircuit>(std::move(c));
  auto in = std::make_shared<const std::vector<Fe>>(std::move(input));
  ProtocolInstance inst;
  inst.protocol = id;
  inst.size = size;
  inst.prove = [circuit, in, opt](std::uint64_t seed) { return prove_circuit(*circuit, *in, seed, opt); };
  inst.verify = [circuit, in, opt](std::span<const std::uint8_t> t) {
    return verify_circuit(*circuit, dense_stream(*in), t, opt);
  };
  return inst;
}

std::vector<Fe> random_symbols(Rng& rng, std::size_t len, unsigned alphabet) {
  std::vector<Fe> out(len);
  for (auto& v : out) v = Fe(rng() % alphabet);
  return out;
}

}  // namespace

ProtocolInstance matmul_gkr_instance(std::vector<Fe> a, std::vector<Fe> b, std::size_t n, bool addition_tree) {
  GkrOptions opt;
  opt.addition_tree_shortcut = addition_tree;
  opt.size_param = static_cast<std::uint16_t>(log2_exact(n));
  return circuit_instance(addition_tree ? ProtocolId::kMatmulTree : ProtocolId::kMatmulGkr, n,
                          build_matmult_circuit(n), matmult_input(a, b), opt);
}

ProtocolInstance matmul_special_instance(std::vector<Fe> a, std::vector<Fe> b, std::size_t n, bool in_place) {
  auto ab = std::make_shared<const std::vector<Fe>>(joined(a, b));
  ProtocolInstance inst;
  inst.protocol = ProtocolId::kMatmulSpecial;
  inst.size = n;
  inst.prove = [ab, n, in_place](std::uint64_t seed) {
    std::span<const Fe> all(*ab);
    auto t0 = std::chrono::steady_clock::now();
    const auto d = matmul_naive(all.first(n * n), all.subspan(n * n), n);
    const double eval_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    ProveResult res;
    if (in_place) {
      std::vector<Fe> a_copy(all.begin(), all.begin() + n * n), b_copy(all.begin() + n * n, all.end());
      res = prove_matmul_in_place(a_copy, b_copy, d, n, seed);
    } else {
      res = prove_matmul(all.first(n * n), all.subspan(n * n), d, n, seed);
    }
    res.eval_ms = eval_ms;
    return res;
  };
  inst.verify = [ab, n](std::span<const std::uint8_t> t) { return verify_matmul(n, dense_stream(*ab), t); };
  return inst;
}

ProtocolInstance matrix_power_instance(std::vector<Fe> m, std::size_t n, unsigned k) {
  auto mat = std::make_shared<const std::vector<Fe>>(std::move(m));
  ProtocolInstance inst;
  inst.protocol = ProtocolId::kMatrixPower;
  inst.size = n;
  inst.prove = [mat, n, k](std::uint64_t seed) { return prove_matrix_power(*mat, n, k, seed); };
  inst.verify = [mat, n, k](std::span<const std::uint8_t> t) {
    return verify_matrix_power(n, k, dense_stream(*mat), t);
  };
  return inst;
}

ProtocolInstance distinct_instance(std::vector<StreamUpdate> updates, std::uint64_t n) {
  auto circuit = std::make_shared<const LayeredCircuit>(build_distinct_circuit(n));
  auto ups = std::make_shared<const std::vector<StreamUpdate>>(std::move(updates));
  GkrOptions opt;
  opt.protocol = ProtocolId::kDistinct;
  opt.addition_tree_shortcut = true;
  opt.size_param = static_cast<std::uint16_t>(log2_exact(n));
  ProtocolInstance inst;
  inst.protocol = ProtocolId::kDistinct;
  inst.size = n;
  inst.prove = [circuit, ups, n, opt](std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    auto freq = ingest_stream(*ups, n);
    const double ingest_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    auto res = prove_circuit(*circuit, std::move(freq), seed, opt);
    res.eval_ms += ingest_ms;
    return res;
  };
  inst.verify = [circuit, ups, opt](std::span<const std::uint8_t> t) {
    return verify_circuit(*circuit, update_stream(*ups), t, opt);
  };
  return inst;
}

ProtocolInstance pattern_instance(std::vector<Fe> text, std::vector<Fe> pattern) {
  auto t = std::make_shared<const std::vector<Fe>>(std::move(text));
  auto p = std::make_shared<const std::vector<Fe>>(std::move(pattern));
  auto input = std::make_shared<const std::vector<Fe>>(patternmatch_input(*t, *p));
  ProtocolInstance inst;
  inst.protocol = ProtocolId::kPattern;
  inst.size = t->size();
  inst.prove = [t, p](std::uint64_t seed) { return prove_patternmatch(*t, *p, seed); };
  inst.verify = [t, p, input](std::span<const std::uint8_t> bytes) {
    return verify_patternmatch(t->size(), p->size(), dense_stream(*input), bytes);
  };
  return inst;
}

ProtocolInstance dataparallel_instance(SuperCircuit sc, std::span<const Fe> input) {
  auto circuit = std::make_shared<const SuperCircuit>(std::move(sc));
  auto in = std::make_shared<const std::vector<Fe>>(interleave_copies(input, circuit->copies()));
  ProtocolInstance inst;
  inst.protocol = ProtocolId::kDataParallel;
  inst.size = circuit->copies();
  inst.prove = [circuit, in](std::uint64_t seed) { return prove_counting(*circuit, *in, seed); };
  inst.verify = [circuit, in](std::span<const std::uint8_t> t) {
    return verify_counting(*circuit, dense_stream(*in), t);
  };
  return inst;
}

ProtocolInstance tree_instance(std::vector<Fe> leaves, GateOp op) {
  const std::uint64_t n = leaves.size();
  return circuit_instance(ProtocolId::kCircuit, n, build_binary_tree(n, op), std::move(leaves), GkrOptions{});
}

ProtocolInstance random_instance(ProtocolId id, std::uint64_t size, Rng& rng) {
  const std::size_t n = size;
  switch (id) {
    case ProtocolId::kMatmulGkr:
    case ProtocolId::kMatmulTree:
      return matmul_gkr_instance(random_vector(rng, n * n), random_vector(rng, n * n), n,
                                 id == ProtocolId::kMatmulTree);
    case ProtocolId::kMatmulSpecial:
      return matmul_special_instance(random_vector(rng, n * n), random_vector(rng, n * n), n, false);
    case ProtocolId::kMatrixPower:
      return matrix_power_instance(random_vector(rng, n * n), n, 2);
    case ProtocolId::kDistinct: {
      std::vector<StreamUpdate> ups(std::max<std::uint64_t>(1, n / 2));
      for (auto& u : ups) u = {rng() % n, static_cast<std::int64_t>(rng() % 7) - 3};
      return distinct_instance(std::move(ups), n);
    }
    case ProtocolId::kPattern: {
      const std::size_t m = std::min<std::size_t>(n, 4);
      return pattern_instance(random_symbols(rng, n, 2), random_symbols(rng, m, 2));
    }
    case ProtocolId::kDataParallel: {
      SuperCircuit sc{build_conjunction_predicate(4, {0, 2}), log2_exact(n)};
      return dataparallel_instance(std::move(sc), random_symbols(rng, 4 * n, 2));
    }
    case ProtocolId::kCircuit:
      return tree_instance(random_vector(rng, n), GateOp::kMul);
    case ProtocolId::kSumcheck:
      break;
  }
  throw std::invalid_argument(std::string("no random instance for ") + protocol_name(id));
}

ProtocolId parse_protocol(const std::string& name) {
  for (auto id : {ProtocolId::kSumcheck, ProtocolId::kCircuit, ProtocolId::kMatmulGkr, ProtocolId::kMatmulTree,
                  ProtocolId::kMatmulSpecial, ProtocolId::kMatrixPower, ProtocolId::kDistinct, ProtocolId::kPattern,
                  ProtocolId::kDataParallel})
    if (name == protocol_name(id)) return id;
  throw std::invalid_argument("unknown protocol '" + name + "'");
}

}  // namespace vc
