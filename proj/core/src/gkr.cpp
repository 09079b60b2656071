#include "vc/gkr.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <stdexcept>
#include <string>

#include "bitlut.hpp"

namespace vc {

namespace {

constexpr unsigned kMaxDegree = 15;
using Evals = std::array<Fe, kMaxDegree + 1>;

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t map_index(const std::vector<BitMap>& maps, const BitMap& m) {
  return static_cast<std::size_t>(std::find(maps.begin(), maps.end(), m) - maps.begin());
}

Point with_bit(const Point& p, unsigned bit) {
  Point q = p;
  q.push_back(Fe(bit));
  return q;
}

}  // namespace

Point LineRestriction::at(Fe t) const {
  Point out(w1.size());
  for (std::size_t k = 0; k < w1.size(); ++k) out[k] = w1[k] + t * (w2[k] - w1[k]);
  return out;
}

Fe combine_layer_claims(const RegularWiring& w, const Point& r, std::span<const Fe> map_claims) {
  const auto maps = w.distinct_maps();
  if (map_claims.size() != maps.size()) throw std::invalid_argument("combine_layer_claims: claim count");
  const std::size_t nsel = w.selector_bits.size();
  Fe total;
  for (std::size_t rho = 0; rho < w.cases.size(); ++rho) {
    const WiringCase& c = w.cases[rho];
    Fe ind = Fe::one();
    for (std::size_t k = 0; k < nsel; ++k) ind *= chi((rho >> (nsel - 1 - k)) & 1, r.at(w.selector_bits[k]));
    std::size_t m1 = map_index(maps, c.in1);
    std::size_t m2 = c.op == GateOp::kCopy ? m1 : map_index(maps, c.in2);
    total += ind * apply_gate(c.op, map_claims[m1], map_claims[m2]);
  }
  return total;
}

Fe layer_polynomial_general(const RegularWiring& w, const Point& z, std::span<const Fe> next_values,
                            const Point& p) {
  std::vector<Fe> vals;
  for (const auto& m : w.distinct_maps()) vals.push_back(eval_mle_table(next_values, m.apply(p)));
  return beta_eval(z, p) * combine_layer_claims(w, p, vals);
}

Fe layer_polynomial_bintree(GateOp op, const Point& z, std::span<const Fe> next_values, const Point& p) {
  Fe left = eval_mle_table(next_values, with_bit(p, 0));
  Fe right = eval_mle_table(next_values, with_bit(p, 1));
  return beta_eval(z, p) * apply_gate(op, left, right);
}

Fe layer_polynomial_distinct(DistinctLayer kind, const Point& z, std::span<const Fe> next_values,
                             const Point& p) {
  const Fe b = beta_eval(z, p);
  if (kind == DistinctLayer::kSquaring) {
    Fe v = eval_mle_table(next_values, p);
    return b * v * v;
  }
  Point head(p.begin(), p.end() - 1);
  const Fe last = p.back();
  if (kind == DistinctLayer::kDoubling) {
    Fe v = eval_mle_table(next_values, head);
    return b * ((Fe::one() - last) * v * v + last * v);
  }
  Fe v0 = eval_mle_table(next_values, with_bit(head, 0));
  Fe v1 = eval_mle_table(next_values, with_bit(head, 1));
  return b * ((Fe::one() - last) * v0 * v0 + last * v1 * v0);
}

std::vector<unsigned> layer_degrees(const RegularWiring& w) {
  std::vector<unsigned> deg(w.out_bits, 1);
  auto affected = [](const BitMap& m, unsigned j) {
    unsigned a = 0;
    for (const auto& b : m.bits) a += (!b.constant && b.input_bit == j) ? 1 : 0;
    return a;
  };
  for (unsigned j = 0; j < w.out_bits; ++j) {
    const bool sel = std::find(w.selector_bits.begin(), w.selector_bits.end(), j) != w.selector_bits.end();
    unsigned best = 0;
    for (const auto& c : w.cases) {
      unsigned a1 = affected(c.in1, j);
      unsigned a2 = c.op == GateOp::kCopy ? 0 : affected(c.in2, j);
      unsigned g = c.op == GateOp::kMul ? a1 + a2 : std::max(a1, a2);
      best = std::max(best, g + (sel ? 1u : 0u));
    }
    deg[j] = 1 + best;
    if (deg[j] > kMaxDegree) throw std::invalid_argument("layer degree exceeds supported bound");
  }
  return deg;
}

SumcheckInstance layer_instance(const RegularWiring& w, const Point& z, std::span<const Fe> next_values,
                                Fe claimed, std::function<Fe(const Point&)> oracle) {
  (void)next_values;
  (void)z;
  SumcheckInstance inst;
  inst.num_vars = w.out_bits;
  inst.degrees = layer_degrees(w);
  inst.claimed_sum = claimed;
  inst.oracle = std::move(oracle);
  return inst;
}

// ---- FastLayerProver ------------------------------------------------------------------

struct FastLayerProver::MapState {
  EvalTable table;
  std::vector<unsigned> var_input;  // label bit feeding each table variable, in table order
  std::vector<bool> var_neg;
  std::size_t front = 0;
  unsigned lead = 0;
  unsigned rest_bits = 0;
  BitLut rest;

  unsigned count_lead(unsigned j) const {
    unsigned a = 0;
    while (front + a < var_input.size() && var_input[front + a] == j) ++a;
    return a;
  }
};

struct FastLayerProver::CaseState {
  GateOp op = GateOp::kAdd;
  std::size_t m1 = 0, m2 = 0;
  std::vector<std::pair<unsigned, unsigned>> sel;  // (label bit, rho bit)
  Fe bound = Fe::one();
};

FastLayerProver::~FastLayerProver() = default;

FastLayerProver::FastLayerProver(const RegularWiring& w, const Point& z, std::span<const Fe> next_values)
    : w_(w), z_(z), beta_(build_beta_table(z)) {
  if (z.size() != w.out_bits) throw std::invalid_argument("FastLayerProver: z dimension");
  if (next_values.size() != (std::uint64_t{1} << w.in_bits))
    throw std::invalid_argument("FastLayerProver: next layer size");
  degrees_ = layer_degrees(w);
  work_ += beta_.size();
  const auto maps = w.distinct_maps();
  for (const auto& m : maps) {
    MapState st;
    std::vector<unsigned> order;
    std::uint64_t const_mask = 0;
    for (unsigned o = 0; o < m.bits.size(); ++o) {
      if (m.bits[o].constant) {
        if (m.bits[o].value) const_mask |= std::uint64_t{1} << (w.in_bits - 1 - o);
      } else {
        order.push_back(o);
      }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](unsigned a, unsigned b) { return m.bits[a].input_bit < m.bits[b].input_bit; });
    const unsigned nv = static_cast<unsigned>(order.size());
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned t = 0; t < nv; ++t) {
      pairs.emplace_back(nv - 1 - t, w.in_bits - 1 - order[t]);
      st.var_input.push_back(m.bits[order[t]].input_bit);
      st.var_neg.push_back(m.bits[order[t]].negate);
    }
    BitLut to_label(nv, pairs, const_mask);
    std::vector<Fe> tab(std::size_t{1} << nv);
    for (std::uint64_t idx = 0; idx < tab.size(); ++idx) tab[idx] = next_values[to_label(idx)];
    work_ += tab.size();
    st.table = EvalTable(std::move(tab));
    maps_.push_back(std::move(st));
  }
  const std::size_t nsel = w.selector_bits.size();
  for (std::size_t rho = 0; rho < w.cases.size(); ++rho) {
    const WiringCase& c = w.cases[rho];
    CaseState cs;
    cs.op = c.op;
    cs.m1 = map_index(maps, c.in1);
    cs.m2 = c.op == GateOp::kCopy ? cs.m1 : map_index(maps, c.in2);
    for (std::size_t k = 0; k < nsel; ++k)
      cs.sel.emplace_back(w.selector_bits[k], static_cast<unsigned>((rho >> (nsel - 1 - k)) & 1));
    cases_.push_back(std::move(cs));
  }
}

RoundMessage FastLayerProver::round(unsigned j) {
  if (j != round_ || j >= w_.out_bits) throw std::logic_error("FastLayerProver: rounds out of order");
  const unsigned s = w_.out_bits;
  const unsigned rbits = s - j - 1;
  const unsigned deg = degrees_[j];

  for (auto& m : maps_) {
    m.lead = m.count_lead(j);
    const std::size_t first_rest = m.front + m.lead;
    m.rest_bits = static_cast<unsigned>(m.var_input.size() - first_rest);
    std::vector<std::pair<unsigned, unsigned>> pairs;
    std::uint64_t mask = 0;
    for (unsigned u = 0; u < m.rest_bits; ++u) {
      const std::size_t vi = first_rest + u;
      const unsigned dst = m.rest_bits - 1 - u;
      pairs.emplace_back(s - 1 - m.var_input[vi], dst);
      if (m.var_neg[vi]) mask |= std::uint64_t{1} << dst;
    }
    m.rest = BitLut(rbits, pairs, mask);
  }

  // Per case: suffix consistency mask/value and the selector bit bound in this round.
  struct CaseRound {
    std::uint64_t mask = 0, val = 0;
    int cur = -1;
  };
  std::vector<CaseRound> cr(cases_.size());
  bool trivial_indicator = true;
  for (std::size_t c = 0; c < cases_.size(); ++c) {
    for (auto [q, bit] : cases_[c].sel) {
      if (q > j) {
        const unsigned pos = s - 1 - q;
        cr[c].mask |= std::uint64_t{1} << pos;
        cr[c].val |= std::uint64_t{bit} << pos;
      } else if (q == j) {
        cr[c].cur = static_cast<int>(bit);
      }
    }
    if (cr[c].cur >= 0 || cases_[c].bound != Fe::one()) trivial_indicator = false;
  }

  const Fe zj = z_[j];
  const bool eq5 = !zj.is_zero();
  Evals factor{};
  if (eq5) {
    const Fe zinv = zj.inv();
    for (unsigned t = 0; t <= deg; ++t) factor[t] = zinv * eq1(zj, Fe(t));
  }
  Evals chi_t[2];
  for (unsigned t = 0; t <= deg; ++t) {
    chi_t[0][t] = chi(0, Fe(t));
    chi_t[1][t] = chi(1, Fe(t));
  }

  const std::size_t half = beta_.size() / 2;
  Evals msg{};
  std::vector<Evals> mv(maps_.size());
  const std::uint64_t nsuffix = std::uint64_t{1} << rbits;
  for (std::uint64_t b = 0; b < nsuffix; ++b) {
    Evals bt;
    if (eq5) {
      const Fe c1 = beta_[half + b];
      if (c1.is_zero()) continue;
      for (unsigned t = 0; t <= deg; ++t) bt[t] = c1 * factor[t];
    } else {
      const Fe c0 = beta_[b];
      const Fe d = beta_[half + b] - c0;
      bt[0] = c0;
      for (unsigned t = 1; t <= deg; ++t) bt[t] = bt[t - 1] + d;
    }
    for (std::size_t k = 0; k < maps_.size(); ++k) {
      const MapState& m = maps_[k];
      const std::uint64_t base = m.rest(b);
      Evals& out = mv[k];
      if (m.lead == 0) {
        const Fe v = m.table[base];
        for (unsigned t = 0; t <= deg; ++t) out[t] = v;
      } else if (m.lead == 1) {
        Fe v0 = m.table[base];
        Fe v1 = m.table[(std::uint64_t{1} << m.rest_bits) | base];
        if (m.var_neg[m.front]) std::swap(v0, v1);
        const Fe d = v1 - v0;
        out[0] = v0;
        for (unsigned t = 1; t <= deg; ++t) out[t] = out[t - 1] + d;
      } else {
        for (unsigned t = 0; t <= deg; ++t) {
          Fe acc;
          for (std::uint64_t x = 0; x < (std::uint64_t{1} << m.lead); ++x) {
            Fe wgt = Fe::one();
            for (unsigned u = 0; u < m.lead; ++u) {
              unsigned xb = (x >> (m.lead - 1 - u)) & 1;
              if (m.var_neg[m.front + u]) xb ^= 1;
              wgt *= chi_t[xb][t];
            }
            acc += wgt * m.table[(x << m.rest_bits) | base];
          }
          out[t] = acc;
        }
      }
    }
    Evals acc{};
    for (std::size_t c = 0; c < cases_.size(); ++c) {
      if ((b & cr[c].mask) != cr[c].val) continue;
      const CaseState& cs = cases_[c];
      const Evals& a = mv[cs.m1];
      const Evals& bb = mv[cs.m2];
      for (unsigned t = 0; t <= deg; ++t) {
        Fe g = apply_gate(cs.op, a[t], bb[t]);
        if (!trivial_indicator) {
          Fe ind = cs.bound;
          if (cr[c].cur >= 0) ind *= chi_t[cr[c].cur][t];
          g *= ind;
        }
        acc[t] += g;
      }
    }
    for (unsigned t = 0; t <= deg; ++t) msg[t] += bt[t] * acc[t];
    work_ += deg + 1;
  }
  RoundMessage out;
  out.evals.assign(msg.begin(), msg.begin() + deg + 1);
  return out;
}

void FastLayerProver::bind(Fe r) {
  const unsigned j = round_;
  if (!z_[j].is_zero()) bind_variable_beta(beta_, z_[j], r);
  else bind_variable_values(beta_, r);
  work_ += beta_.size();
  for (auto& m : maps_) {
    const unsigned a = m.count_lead(j);
    for (unsigned u = 0; u < a; ++u) {
      bind_variable_values(m.table, m.var_neg[m.front] ? Fe::one() - r : r);
      work_ += m.table.size();
      ++m.front;
    }
  }
  for (auto& c : cases_)
    for (auto [q, bit] : c.sel)
      if (q == j) c.bound *= chi(bit, r);
  ++round_;
}

std::vector<Fe> FastLayerProver::claims() const {
  std::vector<Fe> out;
  for (const auto& m : maps_) {
    if (m.table.size() != 1) throw std::logic_error("FastLayerProver: claims requested before all binds");
    out.push_back(m.table[0]);
  }
  return out;
}

// ---- Line reduction -------------------------------------------------------------------

LineRestriction prove_line(const Point& w1, const Point& w2, unsigned degree, std::span<const Fe> values) {
  LineRestriction line{w1, w2, {}};
  for (unsigned t = 0; t <= degree; ++t) line.h.push_back(eval_mle_table(values, line.at(Fe(t))));
  return line;
}

LayerClaim reduce_to_one_point(unsigned layer, Fe v1, Fe v2, const LineRestriction& line, Fe r_star) {
  if (line.h.size() < 2) throw RejectError("line restriction too short");
  if (line.h[0] != v1 || line.h[1] != v2) throw RejectError("line endpoint mismatch");
  return {layer, line.at(r_star), interpolate_at(line.h, r_star)};
}

// ---- Addition tree ---------------------------------------------------------------------

AdditionTreeProver::AdditionTreeProver(std::span<const Fe> leaves, const Point& z)
    : table_(std::vector<Fe>(leaves.begin(), leaves.end())) {
  if (z.size() > table_.vars()) throw std::invalid_argument("AdditionTreeProver: z too long");
  for (Fe zk : z) bind_variable_values(table_, zk);
  depth_ = table_.vars();
}

RoundMessage AdditionTreeProver::round(unsigned) {
  const std::size_t half = table_.size() / 2;
  Fe lo, hi;
  for (std::size_t p = 0; p < half; ++p) {
    lo += table_[p];
    hi += table_[half + p];
  }
  return {{lo, hi}};
}

void AdditionTreeProver::bind(Fe r) { bind_variable_values(table_, r); }

SumcheckInstance addition_tree_instance(std::span<const Fe> leaves, const Point& z) {
  std::vector<Fe> copy(leaves.begin(), leaves.end());
  const unsigned total = log2_exact(copy.size());
  SumcheckInstance inst;
  inst.num_vars = total - static_cast<unsigned>(z.size());
  inst.degrees.assign(inst.num_vars, 1);
  inst.oracle = [copy, z](const Point& p) {
    Point full = z;
    full.insert(full.end(), p.begin(), p.end());
    return eval_mle_table(copy, full);
  };
  Fe sum;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << inst.num_vars); ++s) {
    Point p(inst.num_vars);
    for (unsigned k = 0; k < inst.num_vars; ++k) p[k] = Fe((s >> (inst.num_vars - 1 - k)) & 1);
    sum += inst.oracle(p);
  }
  inst.claimed_sum = sum;
  return inst;
}

// ---- Drivers ---------------------------------------------------------------------------

InputStream dense_stream(std::span<const Fe> values) {
  return [values](const std::function<void(std::uint64_t, Fe)>& sink) {
    for (std::uint64_t i = 0; i < values.size(); ++i)
      if (!values[i].is_zero()) sink(i, values[i]);
  };
}

InputStream update_stream(std::span<const StreamUpdate> updates) {
  return [updates](const std::function<void(std::uint64_t, Fe)>& sink) {
    for (const auto& u : updates) sink(u.index, encode_signed(u.delta));
  };
}

PendingClaim prove_outputs(std::span<const Fe> outputs, TranscriptWriter& w) {
  w.begin(RecordKind::kOpening);
  w.send_answer(outputs);
  const unsigned s = log2_exact(outputs.size());
  Point z;
  for (unsigned k = 0; k < s; ++k) z.push_back(w.challenge_nonzero());
  return {z, eval_mle_table(outputs, z)};
}

PendingClaim verify_outputs(unsigned log_outputs, TranscriptReader& rd, std::vector<Fe>* outputs_out) {
  rd.begin();
  std::vector<Fe> outs = rd.receive_answer(std::size_t{1} << log_outputs);
  Point z;
  for (unsigned k = 0; k < log_outputs; ++k) z.push_back(rd.challenge_nonzero());
  Fe v = eval_mle_table(outs, z);
  if (outputs_out) *outputs_out = std::move(outs);
  return {z, v};
}

namespace {

unsigned addition_run(const LayeredCircuit& c, unsigned i, unsigned to) {
  unsigned run = 0;
  while (i + run < to && i + run < c.depth() && c.layers[i + run - 1].addition_tree) ++run;
  return run;
}

}  // namespace

std::vector<PendingClaim> prove_layers(const LayeredCircuit& c, LayerValues& values, unsigned from, unsigned to,
                                       std::vector<PendingClaim> claims, TranscriptWriter& w, const GkrOptions& opt,
                                       std::uint64_t* work) {
  const unsigned d = c.depth();
  unsigned i = from;
  while (i < to) {
    const Layer& layer = c.layers[i - 1];
    const auto tag = static_cast<std::uint16_t>(i);
    if (opt.addition_tree_shortcut && layer.addition_tree && claims.size() == 1) {
      const unsigned run = addition_run(c, i, to);
      AdditionTreeProver pr(values[i + run - 1], claims[0].point);
      std::vector<unsigned> degs(run, 1);
      Point r = prove_sumcheck(pr, degs, w, ChallengeMode::kNonzero, tag);
      if (work) *work += values[i + run - 1].size();
      w.begin(RecordKind::kClaims);
      w.send(pr.final_value());
      Point np = claims[0].point;
      np.insert(np.end(), r.begin(), r.end());
      claims = {{np, pr.final_value()}};
      i += run;
      continue;
    }
    if (!layer.wiring) throw std::invalid_argument("layer " + std::to_string(i) + " has no regular descriptor");
    const RegularWiring& wr = *layer.wiring;
    const auto maps = wr.distinct_maps();
    const std::vector<Fe>& next = values[i];
    const bool reduce = maps.size() == 2 && wr.similar && i + 1 != d;
    std::vector<PendingClaim> out;
    for (const auto& cl : claims) {
      FastLayerProver pr(wr, cl.point, next);
      Point r = prove_sumcheck(pr, pr.degrees(), w, ChallengeMode::kNonzero, tag);
      if (work) *work += pr.work();
      const std::vector<Fe> vals = pr.claims();
      w.begin(RecordKind::kClaims);
      w.send(vals);
      std::vector<Point> pts;
      for (const auto& m : maps) pts.push_back(m.apply(r));
      if (reduce) {
        const auto deg = static_cast<unsigned>(RegularWiring::differing_bits(maps[0], maps[1]).size());
        LineRestriction line{pts[0], pts[1], {vals[0], vals[1]}};
        for (unsigned t = 2; t <= deg; ++t) line.h.push_back(eval_mle_table(next, line.at(Fe(t))));
        w.send(std::span<const Fe>(line.h).subspan(2));
        const Fe rs = w.challenge_nonzero();
        out.push_back({line.at(rs), interpolate_at(line.h, rs)});
      } else {
        for (std::size_t k = 0; k < maps.size(); ++k) out.push_back({pts[k], vals[k]});
      }
    }
    if (out.size() > kMaxPendingClaims) throw std::length_error("too many pending claims");
    claims = std::move(out);
    ++i;
  }
  return claims;
}

std::vector<PendingClaim> verify_layers(const LayeredCircuit& c, unsigned from, unsigned to,
                                        std::vector<PendingClaim> claims, TranscriptReader& rd, const GkrOptions& opt) {
  const unsigned d = c.depth();
  unsigned i = from;
  while (i < to) {
    const Layer& layer = c.layers[i - 1];
    const auto tag = static_cast<std::uint16_t>(i);
    if (opt.addition_tree_shortcut && layer.addition_tree && claims.size() == 1) {
      const unsigned run = addition_run(c, i, to);
      std::vector<unsigned> degs(run, 1);
      SumcheckClaim sc = verify_sumcheck(claims[0].value, degs, rd, ChallengeMode::kNonzero, tag);
      rd.begin();
      const Fe v = rd.receive_one();
      if (v != sc.value) throw RejectError("addition-tree final check at layer " + std::to_string(i));
      Point np = claims[0].point;
      np.insert(np.end(), sc.r.begin(), sc.r.end());
      claims = {{np, v}};
      i += run;
      continue;
    }
    if (!layer.wiring) throw std::invalid_argument("layer " + std::to_string(i) + " has no regular descriptor");
    const RegularWiring& wr = *layer.wiring;
    const auto maps = wr.distinct_maps();
    const auto degrees = layer_degrees(wr);
    const bool reduce = maps.size() == 2 && wr.similar && i + 1 != d;
    std::vector<PendingClaim> out;
    for (const auto& cl : claims) {
      SumcheckClaim sc = verify_sumcheck(cl.value, degrees, rd, ChallengeMode::kNonzero, tag);
      rd.begin();
      const std::vector<Fe> vals = rd.receive(maps.size());
      if (beta_eval(cl.point, sc.r) * combine_layer_claims(wr, sc.r, vals) != sc.value)
        throw RejectError("final check at layer " + std::to_string(i));
      std::vector<Point> pts;
      for (const auto& m : maps) pts.push_back(m.apply(sc.r));
      if (reduce) {
        const auto deg = static_cast<unsigned>(RegularWiring::differing_bits(maps[0], maps[1]).size());
        LineRestriction line{pts[0], pts[1], {vals[0], vals[1]}};
        const auto extra = rd.receive(deg - 1);
        line.h.insert(line.h.end(), extra.begin(), extra.end());
        const Fe rs = rd.challenge_nonzero();
        LayerClaim next = reduce_to_one_point(i + 1, vals[0], vals[1], line, rs);
        out.push_back({next.point, next.value});
      } else {
        for (std::size_t k = 0; k < maps.size(); ++k) out.push_back({pts[k], vals[k]});
      }
    }
    if (out.size() > kMaxPendingClaims) throw std::length_error("too many pending claims");
    claims = std::move(out);
    ++i;
  }
  return claims;
}

void check_input_claims(unsigned input_log_size, const std::vector<PendingClaim>& claims, const InputStream& input,
                        bool table_method) {
  std::vector<Fe> got;
  if (table_method) {
    std::vector<Fe> dense(std::size_t{1} << input_log_size);
    input([&](std::uint64_t i, Fe delta) {
      if (i >= dense.size()) throw MalformedError("input index out of range");
      dense[i] += delta;
    });
    for (const auto& c : claims) got.push_back(eval_mle_table(dense, c.point));
  } else {
    std::vector<Point> pts;
    for (const auto& c : claims) pts.push_back(c.point);
    StreamingEvaluator ev(std::move(pts));
    input([&](std::uint64_t i, Fe delta) {
      if (input_log_size < 64 && (i >> input_log_size) != 0) throw MalformedError("input index out of range");
      ev.update(i, delta);
    });
    got = ev.values();
  }
  for (std::size_t k = 0; k < claims.size(); ++k)
    if (got[k] != claims[k].value) throw RejectError("input check failed");
}

ProveResult prove_circuit(const LayeredCircuit& c, std::vector<Fe> input, std::uint64_t seed, const GkrOptions& opt) {
  ProveResult res;
  res.writer = TranscriptWriter({opt.protocol, opt.size_param, seed});
  auto t0 = std::chrono::steady_clock::now();
  LayerValues values = evaluate(c, std::move(input));
  res.eval_ms = ms_since(t0);
  auto t1 = std::chrono::steady_clock::now();
  res.outputs = values[0];
  PendingClaim top = prove_outputs(res.outputs, res.writer);
  prove_layers(c, values, 1, c.depth(), {top}, res.writer, opt, &res.work);
  res.proof_ms = ms_since(t1);
  return res;
}

Verdict verify_circuit(const LayeredCircuit& c, const InputStream& input, std::span<const std::uint8_t> transcript,
                       const GkrOptions& opt) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    TranscriptReader rd(transcript);
    if (rd.header().protocol != opt.protocol || rd.header().size_param != opt.size_param)
      throw RejectError("transcript header does not match the circuit");
    PendingClaim top = verify_outputs(c.layers.empty() ? c.input_log_size : c.layers[0].log_size, rd, &v.outputs);
    auto claims = verify_layers(c, 1, c.depth(), {top}, rd, opt);
    check_input_claims(c.input_log_size, claims, input, opt.table_input_check);
    rd.finish();
    v.stats = rd.stats();
    v.accepted = true;
  } catch (const RejectError& e) {
    v.reason = e.what();
  } catch (const MalformedError& e) {
    v.malformed = true;
    v.reason = e.what();
  }
  v.verify_ms = ms_since(t0);
  return v;
}

}  // namespace vc
