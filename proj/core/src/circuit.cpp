#include "vc/circuit.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace vc {

bool is_power_of_two(std::uint64_t n) { return std::has_single_bit(n); }

unsigned log2_exact(std::uint64_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("size " + std::to_string(n) + " is not a power of two");
  return static_cast<unsigned>(std::countr_zero(n));
}

std::uint64_t BitMap::apply(std::uint64_t label, unsigned label_bits) const {
  std::uint64_t out = 0;
  for (const auto& b : bits) {
    unsigned bit = b.constant ? b.value : ((label >> (label_bits - 1 - b.input_bit)) & 1) ^ (b.negate ? 1u : 0u);
    out = (out << 1) | bit;
  }
  return out;
}

Point BitMap::apply(const Point& r) const {
  Point out;
  out.reserve(bits.size());
  for (const auto& b : bits) {
    if (b.constant) out.push_back(Fe(b.value));
    else out.push_back(b.negate ? Fe::one() - r.at(b.input_bit) : r.at(b.input_bit));
  }
  return out;
}

std::size_t RegularWiring::case_of(std::uint64_t label) const {
  std::size_t rho = 0;
  for (unsigned s : selector_bits) rho = (rho << 1) | ((label >> (out_bits - 1 - s)) & 1);
  return rho;
}

Gate RegularWiring::gate(std::uint64_t label) const {
  const WiringCase& c = cases[case_of(label)];
  Gate g;
  g.op = c.op;
  g.in1 = c.in1.apply(label, out_bits);
  g.in2 = c.op == GateOp::kCopy ? g.in1 : c.in2.apply(label, out_bits);
  return g;
}

void RegularWiring::validate() const {
  if (selector_bits.size() > 8) throw std::invalid_argument("regular wiring: more than 8 selector bits");
  if (cases.size() != (std::size_t{1} << selector_bits.size()))
    throw std::invalid_argument("regular wiring: case count must be 2^|S|");
  for (unsigned s : selector_bits)
    if (s >= out_bits) throw std::invalid_argument("regular wiring: selector bit out of range");
  auto check_map = [&](const BitMap& m) {
    if (m.bits.size() != in_bits) throw std::invalid_argument("regular wiring: map width mismatch");
    for (const auto& b : m.bits) {
      if (b.constant) {
        if (b.value > 1) throw std::invalid_argument("regular wiring: constant bit not boolean");
        continue;
      }
      if (b.input_bit >= out_bits) throw std::invalid_argument("regular wiring: source bit out of range");
      if (std::find(selector_bits.begin(), selector_bits.end(), b.input_bit) != selector_bits.end())
        throw std::invalid_argument("regular wiring: map depends on a selector bit");
    }
  };
  for (const auto& c : cases) {
    if (c.op == GateOp::kSub) throw std::invalid_argument("regular wiring: subtraction gates unsupported");
    check_map(c.in1);
    if (c.op != GateOp::kCopy) check_map(c.in2);
  }
}

std::vector<BitMap> RegularWiring::distinct_maps() const {
  std::vector<BitMap> out;
  auto add = [&](const BitMap& m) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  };
  for (const auto& c : cases) {
    add(c.in1);
    if (c.op != GateOp::kCopy) add(c.in2);
  }
  return out;
}

std::vector<unsigned> RegularWiring::differing_bits(const BitMap& a, const BitMap& b) {
  std::vector<unsigned> out;
  for (unsigned o = 0; o < a.bits.size(); ++o)
    if (!(a.bits[o] == b.bits[o])) out.push_back(o);
  return out;
}

namespace {

BitMap identity_map(unsigned bits) {
  BitMap m;
  for (unsigned b = 0; b < bits; ++b) m.bits.push_back(BitSource::from(b));
  return m;
}

BitMap identity_then(unsigned bits, unsigned last) {
  BitMap m = identity_map(bits);
  m.bits.push_back(BitSource::fixed(last));
  return m;
}

}  // namespace

RegularWiring bintree_wiring(unsigned out_bits, GateOp op) {
  RegularWiring w;
  w.out_bits = out_bits;
  w.in_bits = out_bits + 1;
  w.cases.push_back({op, identity_then(out_bits, 0), identity_then(out_bits, 1)});
  return w;
}

std::uint64_t LayeredCircuit::total_gates() const {
  std::uint64_t s = std::uint64_t{1} << input_log_size;
  for (const auto& l : layers) s += l.size();
  return s;
}

LayerValues evaluate(const LayeredCircuit& c, std::vector<Fe> input) {
  if (input.size() != (std::uint64_t{1} << c.input_log_size))
    throw std::invalid_argument("evaluate: input length mismatch");
  LayerValues values(c.depth());
  values.back() = std::move(input);
  for (std::size_t li = c.layers.size(); li-- > 0;) {
    const Layer& layer = c.layers[li];
    const std::vector<Fe>& below = values[li + 1];
    std::vector<Fe>& out = values[li];
    out.resize(layer.size());
    if (layer.explicit_gates) {
      const auto& gates = *layer.explicit_gates;
      for (std::uint64_t p = 0; p < gates.size(); ++p)
        out[p] = apply_gate(gates[p].op, below[gates[p].in1], below[gates[p].in2]);
    } else {
      for (std::uint64_t p = 0; p < out.size(); ++p) {
        Gate g = layer.gate_at(p);
        out[p] = apply_gate(g.op, below[g.in1], below[g.in2]);
      }
    }
  }
  return values;
}

Layer layer_from_wiring(RegularWiring w, bool addition_tree) {
  w.validate();
  Layer l;
  l.log_size = w.out_bits;
  l.addition_tree = addition_tree;
  l.wiring = std::move(w);
  const RegularWiring* wp = &*l.wiring;
  // Copy the descriptor into the closure so the Layer stays movable.
  l.gate_at = [desc = *wp](std::uint64_t p) { return desc.gate(p); };
  return l;
}

namespace {

Layer with_gate_fn(RegularWiring w, std::function<Gate(std::uint64_t)> fn, bool addition_tree = false) {
  Layer l = layer_from_wiring(std::move(w), addition_tree);
  l.gate_at = std::move(fn);
  return l;
}

Layer bintree_layer(unsigned out_bits, GateOp op) {
  return with_gate_fn(
      bintree_wiring(out_bits, op),
      [op](std::uint64_t p) { return Gate{op, 2 * p, 2 * p + 1}; }, op == GateOp::kAdd);
}

}  // namespace

Layer layer_from_gates(std::vector<Gate> gates, unsigned in_log_size) {
  if (!is_power_of_two(gates.size())) throw std::invalid_argument("layer gate count must be a power of two");
  const std::uint64_t limit = std::uint64_t{1} << in_log_size;
  for (const auto& g : gates) {
    if (g.in1 >= limit || g.in2 >= limit) throw std::invalid_argument("gate wire out of range");
    if (g.op == GateOp::kCopy && g.in2 != g.in1) throw std::invalid_argument("fan-in-1 gate must have in2 == in1");
  }
  Layer l;
  l.log_size = log2_exact(gates.size());
  auto shared = std::make_shared<const std::vector<Gate>>(std::move(gates));
  l.explicit_gates = shared;
  l.gate_at = [shared](std::uint64_t p) { return (*shared)[p]; };
  return l;
}

void check_descriptor(const Layer& layer, std::uint64_t samples, std::uint64_t seed) {
  if (!layer.wiring) return;
  const RegularWiring& w = *layer.wiring;
  auto same = [&](std::uint64_t p) {
    Gate a = layer.gate_at(p);
    Gate b = w.gate(p);
    if (a.op != b.op || a.in1 != b.in1 || (a.op != GateOp::kCopy && a.in2 != b.in2))
      throw std::logic_error("descriptor disagrees with gate list at label " + std::to_string(p));
  };
  if (layer.log_size <= 16) {
    for (std::uint64_t p = 0; p < layer.size(); ++p) same(p);
  } else {
    Rng rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) same(rng() & (layer.size() - 1));
  }
  if (layer.addition_tree) {
    RegularWiring expect = bintree_wiring(w.out_bits, GateOp::kAdd);
    if (w.cases.size() != 1 || !(w.cases[0].in1 == expect.cases[0].in1) || !(w.cases[0].in2 == expect.cases[0].in2) ||
        w.cases[0].op != GateOp::kAdd)
      throw std::logic_error("layer flagged as addition tree has a different descriptor");
  }
}

WiringValues wiring_predicate_eval(const LayeredCircuit& c, unsigned layer_index, const Point& p,
                                   const Point& w1, const Point& w2, std::uint64_t* gate_visits) {
  const Layer& layer = c.layers.at(layer_index - 1);
  const unsigned in_bits = c.log_size(layer_index + 1);
  if (p.size() != layer.log_size || w1.size() != in_bits || w2.size() != in_bits)
    throw std::invalid_argument("wiring_predicate_eval: dimension mismatch");
  WiringValues out;
  for (std::uint64_t g = 0; g < layer.size(); ++g) {
    Gate gate = layer.gate_at(g);
    Fe term = chi_index(g, p) * chi_index(gate.in1, w1) * chi_index(gate.in2, w2);
    if (gate.op == GateOp::kAdd) out.add += term;
    else if (gate.op == GateOp::kMul) out.mul += term;
    else throw std::invalid_argument("wiring_predicate_eval: only add/mul gates");
  }
  if (gate_visits) *gate_visits += layer.size();
  return out;
}

LayeredCircuit build_binary_tree(std::uint64_t n, GateOp op) {
  const unsigned log_n = log2_exact(n);
  if (log_n == 0) throw std::invalid_argument("binary tree needs at least two leaves");
  if (op != GateOp::kAdd && op != GateOp::kMul) throw std::invalid_argument("binary tree op must be add or mul");
  LayeredCircuit c;
  c.input_log_size = log_n;
  for (unsigned s = 0; s < log_n; ++s) c.layers.push_back(bintree_layer(s, op));
  return c;
}

unsigned flt_product_layers() { return kFltBits - 2; }

std::vector<Layer> build_flt_layers(unsigned log_n) {
  const unsigned s = log_n + 1;  // 2n gates in the doubling and product layers
  std::vector<Layer> out;

  RegularWiring sel;
  sel.out_bits = log_n;
  sel.in_bits = s;
  sel.cases.push_back({GateOp::kCopy, identity_then(log_n, 1), identity_then(log_n, 1)});
  out.push_back(with_gate_fn(sel, [](std::uint64_t p) { return Gate{GateOp::kCopy, 2 * p + 1, 2 * p + 1}; }));

  RegularWiring prod;
  prod.out_bits = s;
  prod.in_bits = s;
  prod.cases.push_back({GateOp::kMul, identity_map(s), identity_then(log_n, 0)});
  for (unsigned i = 0; i < flt_product_layers(); ++i)
    out.push_back(with_gate_fn(prod, [](std::uint64_t p) { return Gate{GateOp::kMul, p, p & ~std::uint64_t{1}}; }));

  RegularWiring dbl;
  dbl.out_bits = s;
  dbl.in_bits = log_n;
  dbl.selector_bits = {log_n};
  dbl.cases.push_back({GateOp::kMul, identity_map(log_n), identity_map(log_n)});
  dbl.cases.push_back({GateOp::kCopy, identity_map(log_n), identity_map(log_n)});
  out.push_back(with_gate_fn(dbl, [](std::uint64_t p) {
    return Gate{(p & 1) ? GateOp::kCopy : GateOp::kMul, p >> 1, p >> 1};
  }));

  RegularWiring sq;
  sq.out_bits = log_n;
  sq.in_bits = log_n;
  sq.cases.push_back({GateOp::kMul, identity_map(log_n), identity_map(log_n)});
  out.push_back(with_gate_fn(sq, [](std::uint64_t p) { return Gate{GateOp::kMul, p, p}; }));
  return out;
}

LayeredCircuit build_distinct_circuit(std::uint64_t n) {
  const unsigned log_n = log2_exact(n);
  LayeredCircuit c;
  c.input_log_size = log_n;
  for (unsigned s = 0; s < log_n; ++s) c.layers.push_back(bintree_layer(s, GateOp::kAdd));
  for (auto& l : build_flt_layers(log_n)) c.layers.push_back(std::move(l));
  return c;
}

LayeredCircuit build_matmult_circuit(std::uint64_t n) {
  const unsigned L = log2_exact(n);
  LayeredCircuit c;
  c.input_log_size = 2 * L + 1;
  for (unsigned k = 0; k < L; ++k) c.layers.push_back(bintree_layer(2 * L + k, GateOp::kAdd));

  RegularWiring mw;
  mw.out_bits = 3 * L;
  mw.in_bits = 2 * L + 1;
  mw.similar = false;
  WiringCase mc;
  mc.op = GateOp::kMul;
  mc.in1.bits.push_back(BitSource::fixed(0));
  for (unsigned b = 0; b < L; ++b) mc.in1.bits.push_back(BitSource::from(b));          // i
  for (unsigned b = 0; b < L; ++b) mc.in1.bits.push_back(BitSource::from(2 * L + b));  // k
  mc.in2.bits.push_back(BitSource::fixed(1));
  for (unsigned b = 0; b < L; ++b) mc.in2.bits.push_back(BitSource::from(2 * L + b));  // k
  for (unsigned b = 0; b < L; ++b) mc.in2.bits.push_back(BitSource::from(L + b));      // j
  mw.cases.push_back(mc);
  const std::uint64_t mask = n - 1;
  c.layers.push_back(with_gate_fn(mw, [L, mask](std::uint64_t p) {
    std::uint64_t i = p >> (2 * L), j = (p >> L) & mask, k = p & mask;
    return Gate{GateOp::kMul, (i << L) | k, (std::uint64_t{1} << (2 * L)) | (k << L) | j};
  }));
  return c;
}

std::vector<Fe> matmult_input(std::span<const Fe> a, std::span<const Fe> b) {
  if (a.size() != b.size()) throw std::invalid_argument("matmult_input: size mismatch");
  std::vector<Fe> in(a.begin(), a.end());
  in.insert(in.end(), b.begin(), b.end());
  return in;
}

LayeredCircuit build_patternmatch_layers(std::uint64_t n, std::uint64_t m) {
  const unsigned L = log2_exact(n);
  const unsigned M = log2_exact(m);
  if (m > n) throw std::invalid_argument("pattern longer than text buffer");
  LayeredCircuit c;
  c.input_log_size = L + 1;
  for (unsigned s = 0; s < L; ++s) c.layers.push_back(bintree_layer(s, GateOp::kAdd));
  for (auto& l : build_flt_layers(L)) c.layers.push_back(std::move(l));
  for (unsigned s = L; s < L + M; ++s) c.layers.push_back(bintree_layer(s, GateOp::kAdd));

  RegularWiring sq;
  sq.out_bits = L + M;
  sq.in_bits = L + M;
  sq.cases.push_back({GateOp::kMul, identity_map(L + M), identity_map(L + M)});
  c.layers.push_back(with_gate_fn(sq, [](std::uint64_t p) { return Gate{GateOp::kMul, p, p}; }));

  Layer diff;
  diff.log_size = L + M;
  const std::uint64_t kmask = m - 1, imask = n - 1;
  diff.gate_at = [M, n, kmask, imask](std::uint64_t p) {
    std::uint64_t i = p >> M, k = p & kmask;
    return Gate{GateOp::kSub, (i + k) & imask, n + k};
  };
  c.layers.push_back(std::move(diff));
  return c;
}

std::vector<Fe> patternmatch_input(std::span<const Fe> text, std::span<const Fe> pattern) {
  if (!is_power_of_two(text.size()) || !is_power_of_two(pattern.size()) || pattern.size() > text.size())
    throw std::invalid_argument("patternmatch_input: sizes must be powers of two with m <= n");
  std::vector<Fe> in(2 * text.size());
  std::copy(text.begin(), text.end(), in.begin());
  std::copy(pattern.begin(), pattern.end(), in.begin() + static_cast<std::ptrdiff_t>(text.size()));
  return in;
}

std::vector<Fe> ingest_stream(std::span<const StreamUpdate> updates, std::uint64_t n) {
  std::vector<Fe> a(n);
  for (const auto& u : updates) {
    if (u.index >= n) throw std::out_of_range("stream index " + std::to_string(u.index) + " >= n");
    a[u.index] += encode_signed(u.delta);
  }
  return a;
}

}  // namespace vc
