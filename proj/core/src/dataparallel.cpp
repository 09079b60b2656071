#include "vc/dataparallel.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

namespace vc {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Point slice(const Point& p, std::size_t from, std::size_t len) {
  return Point(p.begin() + static_cast<std::ptrdiff_t>(from), p.begin() + static_cast<std::ptrdiff_t>(from + len));
}

Point concat(const Point& a, const Point& b) {
  Point out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Fe line_at(const Point& a, const Point& b, Fe t, std::size_t k) { return a[k] + t * (b[k] - a[k]); }

}  // namespace

void SuperCircuit::validate() const {
  for (std::size_t i = 0; i < base.layers.size(); ++i) {
    const Layer& l = base.layers[i];
    for (std::uint64_t g = 0; g < l.size(); ++g) {
      GateOp op = l.gate_at(g).op;
      if (op != GateOp::kAdd && op != GateOp::kMul)
        throw std::invalid_argument("data-parallel base gates must be add or mul (layer " + std::to_string(i + 1) +
                                    ")");
    }
  }
  if (log_copies > 30) throw std::invalid_argument("too many copies");
}

std::vector<Fe> interleave_copies(std::span<const Fe> copy_major, std::uint64_t copies) {
  if (copies == 0 || copy_major.size() % copies != 0) throw std::invalid_argument("interleave_copies: bad length");
  const std::uint64_t n = copy_major.size() / copies;
  std::vector<Fe> out(copy_major.size());
  for (std::uint64_t c = 0; c < copies; ++c)
    for (std::uint64_t x = 0; x < n; ++x) out[x * copies + c] = copy_major[c * n + x];
  return out;
}

std::vector<Fe> deinterleave_copies(std::span<const Fe> label_order, std::uint64_t copies) {
  if (copies == 0 || label_order.size() % copies != 0) throw std::invalid_argument("deinterleave_copies: bad length");
  const std::uint64_t n = label_order.size() / copies;
  std::vector<Fe> out(label_order.size());
  for (std::uint64_t c = 0; c < copies; ++c)
    for (std::uint64_t x = 0; x < n; ++x) out[c * n + x] = label_order[x * copies + c];
  return out;
}

LayerValues evaluate_super(const SuperCircuit& sc, std::span<const Fe> input) {
  const std::uint64_t copies = sc.copies();
  if (input.size() != (std::uint64_t{1} << sc.log_size(sc.depth())))
    throw std::invalid_argument("evaluate_super: input length mismatch");
  const unsigned d = sc.depth();
  LayerValues values(d);
  values[d - 1].assign(input.begin(), input.end());
  for (unsigned i = d - 1; i >= 1; --i) {
    const Layer& l = sc.base.layers[i - 1];
    const auto& next = values[i];
    auto& cur = values[i - 1];
    cur.assign(l.size() * copies, Fe());
    for (std::uint64_t g = 0; g < l.size(); ++g) {
      const Gate gate = l.gate_at(g);
      for (std::uint64_t c = 0; c < copies; ++c)
        cur[g * copies + c] = apply_gate(gate.op, next[gate.in1 * copies + c], next[gate.in2 * copies + c]);
    }
  }
  return values;
}

WiringValues WiringPreprocessor::eval(unsigned layer, const Point& p, const Point& w1, const Point& w2) {
  return wiring_predicate_eval(base_, layer, p, w1, w2, &visits_);
}

WiringPreprocessor preprocess_verifier(const LayeredCircuit& base) { return WiringPreprocessor(base); }

std::vector<unsigned> dataparallel_degrees(const SuperCircuit& sc, unsigned layer) {
  const unsigned s_out = sc.base.log_size(layer), s_in = sc.base.log_size(layer + 1);
  std::vector<unsigned> d(s_out + 2 * s_in, 2);
  d.insert(d.end(), sc.log_copies, 3);
  return d;
}

Fe dataparallel_layer_polynomial(const SuperCircuit& sc, unsigned layer, const Point& z,
                                 std::span<const Fe> next_values, const Point& x) {
  const unsigned s_out = sc.base.log_size(layer), s_in = sc.base.log_size(layer + 1), b = sc.log_copies;
  if (x.size() != s_out + 2 * s_in + b || z.size() != s_out + b)
    throw std::invalid_argument("dataparallel_layer_polynomial: dimension mismatch");
  const Point p1 = slice(x, 0, s_out), w1 = slice(x, s_out, s_in), g1 = slice(x, s_out + s_in, s_in);
  const Point p2 = slice(x, s_out + 2 * s_in, b);
  const WiringValues wv = wiring_predicate_eval(sc.base, layer, p1, w1, g1);
  const Fe vw = eval_mle_table(next_values, concat(w1, p2));
  const Fe vg = eval_mle_table(next_values, concat(g1, p2));
  return beta_eval(z, concat(p1, p2)) * (wv.add * (vw + vg) + wv.mul * vw * vg);
}

// ---- Prover -------------------------------------------------------------------------

DataParallelLayerProver::DataParallelLayerProver(const SuperCircuit& sc, unsigned layer, const Point& z,
                                                 std::span<const Fe> next_values)
    : s_out_(sc.base.log_size(layer)),
      s_in_(sc.base.log_size(layer + 1)),
      b_(sc.log_copies),
      next_(next_values) {
  if (z.size() != s_out_ + b_) throw std::invalid_argument("DataParallelLayerProver: claim point has wrong size");
  if (next_values.size() != (std::uint64_t{1} << (s_in_ + b_)))
    throw std::invalid_argument("DataParallelLayerProver: next layer has wrong size");
  const Layer& l = sc.base.layers.at(layer - 1);
  for (std::uint64_t g = 0; g < l.size(); ++g) {
    Gate gate = l.gate_at(g);
    if (gate.op != GateOp::kAdd && gate.op != GateOp::kMul)
      throw std::invalid_argument("DataParallelLayerProver: only add/mul gates");
    gates_.push_back(gate);
  }
  z1_ = slice(z, 0, s_out_);
  z2_ = slice(z, s_out_, b_);
  {
    EvalTable t = build_beta_table(z2_);
    beta2_.assign(t.entries().begin(), t.entries().end());
  }
  const std::uint64_t copies = std::uint64_t{1} << b_;
  gate_sum_.assign(gates_.size(), Fe());
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    const Fe* a = next_.data() + gate.in1 * copies;
    const Fe* c = next_.data() + gate.in2 * copies;
    Fe acc;
    if (gate.op == GateOp::kAdd)
      for (std::uint64_t k = 0; k < copies; ++k) acc += beta2_[k] * (a[k] + c[k]);
    else
      for (std::uint64_t k = 0; k < copies; ++k) acc += beta2_[k] * (a[k] * c[k]);
    gate_sum_[g] = acc;
  }
  work_ += gates_.size() * copies;
  weight_.assign(gates_.size(), Fe::one());
  left_ = EvalTable(std::vector<Fe>(next_values.begin(), next_values.end()));
  right_ = left_;
}

RoundMessage DataParallelLayerProver::round(unsigned j) {
  const std::uint64_t copies = std::uint64_t{1} << b_;
  RoundMessage msg;
  if (j < s_out_) {
    msg.evals.assign(3, Fe());
    const unsigned rest = s_out_ - j - 1;
    const EvalTable tail = build_beta_table(slice(z1_, j + 1, rest));
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      const unsigned bit = (g >> rest) & 1;
      const Fe base = weight_[g] * tail[g & ((std::uint64_t{1} << rest) - 1)] * gate_sum_[g];
      for (unsigned t = 0; t < 3; ++t) msg.evals[t] += base * chi(bit, Fe(t)) * eq1(z1_[j], Fe(t));
    }
    work_ += 3 * gates_.size();
    for (auto& e : msg.evals) e *= beta1_;
    return msg;
  }
  if (j < s_out_ + 2 * s_in_) {
    msg.evals.assign(3, Fe());
    const bool first = j < s_out_ + s_in_;
    const unsigned jj = first ? j - s_out_ : j - s_out_ - s_in_;
    const unsigned rest = s_in_ - jj - 1;
    const EvalTable& table = first ? left_ : right_;
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      const Gate& gate = gates_[g];
      const std::uint64_t label = first ? gate.in1 : gate.in2;
      const unsigned bit = (label >> rest) & 1;
      const std::uint64_t suffix = label & ((std::uint64_t{1} << rest) - 1);
      const std::uint64_t lo = suffix * copies, hi = ((std::uint64_t{1} << rest) | suffix) * copies;
      // The other operand: unbound V* in the first block, the fully bound w1 table in the second.
      const Fe* other = first ? next_.data() + gate.in2 * copies : &left_[0];
      for (unsigned t = 0; t < 3; ++t) {
        const Fe c = chi(bit, Fe(t));
        if (c.is_zero()) continue;
        Fe acc;
        for (std::uint64_t k = 0; k < copies; ++k) {
          const Fe v = table[lo + k] + Fe(t) * (table[hi + k] - table[lo + k]);
          const Fe a = first ? v : other[k];
          const Fe bval = first ? other[k] : v;
          acc += beta2_[k] * apply_gate(gate.op, a, bval);
        }
        msg.evals[t] += weight_[g] * c * acc;
      }
      work_ += 3 * copies;
    }
    for (auto& e : msg.evals) e *= beta1_;
    return msg;
  }
  if (!second_phase_) enter_second_phase();
  msg.evals.assign(4, Fe());
  const std::size_t half = left_.size() / 2;
  for (std::size_t s = 0; s < half; ++s) {
    const Fe b0 = beta_copy_[s], b1 = beta_copy_[half + s];
    const Fe l0 = left_[s], l1 = left_[half + s];
    const Fe r0 = right_[s], r1 = right_[half + s];
    for (unsigned t = 0; t < 4; ++t) {
      const Fe ft(t);
      const Fe bt = b0 + ft * (b1 - b0), lt = l0 + ft * (l1 - l0), rt = r0 + ft * (r1 - r0);
      msg.evals[t] += bt * (add_ * (lt + rt) + mul_ * lt * rt);
    }
  }
  work_ += 4 * half;
  for (auto& e : msg.evals) e *= beta1_;
  return msg;
}

void DataParallelLayerProver::enter_second_phase() {
  add_ = Fe();
  mul_ = Fe();
  for (std::size_t g = 0; g < gates_.size(); ++g) (gates_[g].op == GateOp::kAdd ? add_ : mul_) += weight_[g];
  beta_copy_ = build_beta_table(z2_);
  second_phase_ = true;
}

void DataParallelLayerProver::bind(Fe r) {
  const unsigned j = round_++;
  if (j < s_out_) {
    const unsigned rest = s_out_ - j - 1;
    for (std::size_t g = 0; g < gates_.size(); ++g) weight_[g] *= chi((g >> rest) & 1, r);
    beta1_ *= eq1(z1_[j], r);
  } else if (j < s_out_ + 2 * s_in_) {
    const bool first = j < s_out_ + s_in_;
    const unsigned jj = first ? j - s_out_ : j - s_out_ - s_in_;
    const unsigned rest = s_in_ - jj - 1;
    for (std::size_t g = 0; g < gates_.size(); ++g)
      weight_[g] *= chi(((first ? gates_[g].in1 : gates_[g].in2) >> rest) & 1, r);
    bind_variable_values(first ? left_ : right_, r);
  } else {
    if (!second_phase_) enter_second_phase();
    bind_variable_values(beta_copy_, r);
    bind_variable_values(left_, r);
    bind_variable_values(right_, r);
  }
  if (round_ == s_out_ + 2 * s_in_ + b_ && !second_phase_) enter_second_phase();
}

std::pair<Fe, Fe> DataParallelLayerProver::claims() const {
  if (left_.size() != 1 || right_.size() != 1) throw std::logic_error("DataParallelLayerProver: not fully bound");
  return {left_[0], right_[0]};
}

// ---- Drivers ------------------------------------------------------------------------

std::vector<PendingClaim> prove_dataparallel(const SuperCircuit& sc, const LayerValues& values, PendingClaim top,
                                             TranscriptWriter& w, std::uint64_t* work) {
  const unsigned d = sc.depth();
  PendingClaim claim = std::move(top);
  for (unsigned i = 1; i < d; ++i) {
    const unsigned s_out = sc.base.log_size(i), s_in = sc.base.log_size(i + 1);
    const std::vector<Fe>& next = values[i];
    DataParallelLayerProver pr(sc, i, claim.point, next);
    const auto degs = dataparallel_degrees(sc, i);
    Point r = prove_sumcheck(pr, degs, w, ChallengeMode::kNonzero, static_cast<std::uint16_t>(i));
    if (work) *work += pr.work();
    const auto [vw, vg] = pr.claims();
    w.begin(RecordKind::kClaims);
    w.send(std::vector<Fe>{vw, vg});
    const Point w1 = slice(r, s_out, s_in), g1 = slice(r, s_out + s_in, s_in);
    const Point p2 = slice(r, s_out + 2 * s_in, sc.log_copies);
    if (i + 1 == d) return {{concat(w1, p2), vw}, {concat(g1, p2), vg}};
    if (s_in == 0) {
      claim = {p2, vw};
      continue;
    }
    std::vector<Fe> h{vw, vg};
    for (unsigned t = 2; t <= s_in; ++t) {
      Point at(s_in);
      for (unsigned k = 0; k < s_in; ++k) at[k] = line_at(w1, g1, Fe(t), k);
      h.push_back(eval_mle_table(next, concat(at, p2)));
    }
    w.send(std::span<const Fe>(h).subspan(2));
    const Fe rs = w.challenge_nonzero();
    Point at(s_in);
    for (unsigned k = 0; k < s_in; ++k) at[k] = line_at(w1, g1, rs, k);
    claim = {concat(at, p2), interpolate_at(h, rs)};
  }
  return {claim};
}

std::vector<PendingClaim> verify_dataparallel(const SuperCircuit& sc, PendingClaim top, TranscriptReader& rd,
                                              WiringPreprocessor& prep) {
  const unsigned d = sc.depth();
  PendingClaim claim = std::move(top);
  for (unsigned i = 1; i < d; ++i) {
    const unsigned s_out = sc.base.log_size(i), s_in = sc.base.log_size(i + 1);
    const auto degs = dataparallel_degrees(sc, i);
    SumcheckClaim res = verify_sumcheck(claim.value, degs, rd, ChallengeMode::kNonzero, static_cast<std::uint16_t>(i));
    rd.begin();
    const std::vector<Fe> vals = rd.receive(2);
    const Fe vw = vals[0], vg = vals[1];
    const Point p1 = slice(res.r, 0, s_out), w1 = slice(res.r, s_out, s_in), g1 = slice(res.r, s_out + s_in, s_in);
    const Point p2 = slice(res.r, s_out + 2 * s_in, sc.log_copies);
    const WiringValues wv = prep.eval(i, p1, w1, g1);
    if (beta_eval(claim.point, concat(p1, p2)) * (wv.add * (vw + vg) + wv.mul * vw * vg) != res.value)
      throw RejectError("final check at layer " + std::to_string(i));
    if (i + 1 == d) return {{concat(w1, p2), vw}, {concat(g1, p2), vg}};
    if (s_in == 0) {
      if (vw != vg) throw RejectError("inconsistent claims at layer " + std::to_string(i));
      claim = {p2, vw};
      continue;
    }
    std::vector<Fe> h{vw, vg};
    const auto extra = rd.receive(s_in - 1);
    h.insert(h.end(), extra.begin(), extra.end());
    const Fe rs = rd.challenge_nonzero();
    Point at(s_in);
    for (unsigned k = 0; k < s_in; ++k) at[k] = line_at(w1, g1, rs, k);
    claim = {concat(at, p2), interpolate_at(h, rs)};
  }
  return {claim};
}

ProveResult prove_counting(const SuperCircuit& sc, std::span<const Fe> input, std::uint64_t seed) {
  sc.validate();
  ProveResult res;
  res.writer = TranscriptWriter({ProtocolId::kDataParallel, static_cast<std::uint16_t>(sc.log_copies), seed});
  auto t0 = std::chrono::steady_clock::now();
  LayerValues values = evaluate_super(sc, input);
  res.eval_ms = ms_since(t0);
  auto t1 = std::chrono::steady_clock::now();
  Fe total;
  for (Fe v : values[0]) total += v;
  res.outputs = {total};
  TranscriptWriter& w = res.writer;
  w.begin(RecordKind::kOpening);
  w.send_answer(res.outputs);
  AdditionTreeProver tree(values[0], {});
  std::vector<unsigned> degs(tree.depth(), 1);
  Point r = prove_sumcheck(tree, degs, w, ChallengeMode::kNonzero, std::uint16_t{0});
  res.work += values[0].size();
  w.begin(RecordKind::kClaims);
  w.send(tree.final_value());
  prove_dataparallel(sc, values, {r, tree.final_value()}, w, &res.work);
  res.proof_ms = ms_since(t1);
  return res;
}

Verdict verify_counting(const SuperCircuit& sc, const InputStream& input, std::span<const std::uint8_t> transcript,
                        std::uint64_t* gate_visits) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    TranscriptReader rd(transcript);
    if (rd.header().protocol != ProtocolId::kDataParallel || rd.header().size_param != sc.log_copies)
      throw RejectError("transcript header does not match the circuit");
    rd.begin();
    v.outputs = rd.receive_answer(1);
    std::vector<unsigned> degs(sc.log_size(1), 1);
    SumcheckClaim tree = verify_sumcheck(v.outputs[0], degs, rd, ChallengeMode::kNonzero, std::uint16_t{0});
    rd.begin();
    const Fe top = rd.receive_one();
    if (top != tree.value) throw RejectError("output sum check");
    WiringPreprocessor prep = preprocess_verifier(sc.base);
    auto claims = verify_dataparallel(sc, {tree.r, top}, rd, prep);
    check_input_claims(sc.log_size(sc.depth()), claims, input, false);
    rd.finish();
    if (gate_visits) *gate_visits = prep.gate_visits();
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

LayeredCircuit build_conjunction_predicate(unsigned fields, std::vector<unsigned> selected) {
  if (!is_power_of_two(fields)) throw std::invalid_argument("field count must be a power of two");
  if (selected.size() < 2 || !is_power_of_two(selected.size()))
    throw std::invalid_argument("selected field count must be a power of two >= 2");
  for (unsigned f : selected)
    if (f >= fields) throw std::invalid_argument("selected field out of range");
  LayeredCircuit c;
  c.input_log_size = log2_exact(fields);
  std::vector<Layer> bottom_up;
  std::vector<Gate> first;
  for (std::size_t k = 0; k + 1 < selected.size(); k += 2) first.push_back({GateOp::kMul, selected[k], selected[k + 1]});
  bottom_up.push_back(layer_from_gates(first, c.input_log_size));
  for (std::size_t width = first.size(); width > 1; width /= 2) {
    std::vector<Gate> gs;
    for (std::uint64_t g = 0; g < width / 2; ++g) gs.push_back({GateOp::kMul, 2 * g, 2 * g + 1});
    bottom_up.push_back(layer_from_gates(gs, log2_exact(width)));
  }
  c.layers.assign(bottom_up.rbegin(), bottom_up.rend());
  return c;
}

}  // namespace vc
