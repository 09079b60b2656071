#include "vc/patternmatch.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <stdexcept>

namespace vc {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Truth-table MLE: sum over boolean b of table(b) * prod chi_{b_j}(x_j).
template <std::size_t N, class Pred>
Fe table_mle(const std::array<Fe, N>& x, Pred pred) {
  Fe acc;
  for (unsigned b = 0; b < (1u << N); ++b) {
    if (!pred(b)) continue;
    Fe term = Fe::one();
    for (std::size_t j = 0; j < N; ++j) term *= chi((b >> (N - 1 - j)) & 1, x[j]);
    acc += term;
  }
  return acc;
}

void fold_low_bit(std::vector<Fe>& t, Fe r) {
  const std::size_t half = t.size() / 2;
  for (std::size_t u = 0; u < half; ++u) t[u] = t[2 * u] + r * (t[2 * u + 1] - t[2 * u]);
  t.resize(half);
}

Point reversed(const Point& p) { return Point(p.rbegin(), p.rend()); }

Point msb_first_slice(const Point& lsb_first, std::size_t from) {
  Point out;
  for (std::size_t j = lsb_first.size(); j-- > from;) out.push_back(lsb_first[j]);
  return out;
}

PatternLayerShape shape_of(std::size_t n, std::size_t m) {
  if (!is_power_of_two(n) || !is_power_of_two(m) || m > n)
    throw std::invalid_argument("text and pattern lengths must be powers of two with m <= n");
  return {log2_exact(n), log2_exact(m)};
}

std::uint16_t size_param(const PatternLayerShape& s) { return static_cast<std::uint16_t>(s.text_bits | (s.pattern_bits << 8)); }

}  // namespace

Fe carry_bit_eval(Fe i, Fe k, Fe c_in, Fe c_out) {
  return table_mle<4>({i, k, c_in, c_out}, [](unsigned b) {
    const unsigned bits = ((b >> 3) & 1) + ((b >> 2) & 1) + ((b >> 1) & 1);
    return (b & 1) == (bits >= 2 ? 1u : 0u);
  });
}

Fe sum_bit_eval(Fe i, Fe k, Fe c_in) {
  return table_mle<3>({i, k, c_in}, [](unsigned b) { return (((b >> 2) ^ (b >> 1) ^ b) & 1) == 1; });
}

Fe carry_chain_eval(const Point& i, const Point& k, const Point& c) {
  if (c.size() != i.size() || k.size() > i.size()) throw std::invalid_argument("carry_chain_eval: dimension mismatch");
  Fe acc = Fe::one();
  for (std::size_t j = 0; j < i.size(); ++j)
    acc *= carry_bit_eval(i[j], j < k.size() ? k[j] : Fe(), j == 0 ? Fe() : c[j - 1], c[j]);
  return acc;
}

Point sum_bits_eval(const Point& i, const Point& k, const Point& c) {
  if (c.size() != i.size() || k.size() > i.size()) throw std::invalid_argument("sum_bits_eval: dimension mismatch");
  Point s;
  for (std::size_t j = 0; j < i.size(); ++j) s.push_back(sum_bit_eval(i[j], j < k.size() ? k[j] : Fe(), j == 0 ? Fe() : c[j - 1]));
  return s;
}

std::vector<unsigned> PatternLayerShape::degrees() const {
  std::vector<unsigned> d;
  for (unsigned j = 0; j < text_bits; ++j) {
    d.push_back(3);
    if (j < pattern_bits) d.push_back(3);
    d.push_back(j + 1 < text_bits ? 3 : 1);
  }
  return d;
}

Point PatternLayerPoint::text_point() const { return reversed(sum_bits_eval(i, k, c)); }
Point PatternLayerPoint::pattern_point() const { return reversed(k); }
Point PatternLayerPoint::gate_point() const {
  Point p = reversed(i);
  for (std::size_t j = k.size(); j-- > 0;) p.push_back(k[j]);
  return p;
}

PatternLayerPoint split_pattern_point(const PatternLayerShape& shape, const Point& x) {
  if (x.size() != shape.num_vars()) throw std::invalid_argument("split_pattern_point: dimension mismatch");
  PatternLayerPoint p;
  std::size_t idx = 0;
  for (unsigned j = 0; j < shape.text_bits; ++j) {
    p.i.push_back(x[idx++]);
    if (j < shape.pattern_bits) p.k.push_back(x[idx++]);
    p.c.push_back(x[idx++]);
  }
  return p;
}

Fe pattern_layer_expected(const PatternLayerShape& shape, const Point& z, const Point& x, Fe text_claim,
                          Fe pattern_claim) {
  const PatternLayerPoint p = split_pattern_point(shape, x);
  return beta_eval(z, p.gate_point()) * carry_chain_eval(p.i, p.k, p.c) * (text_claim - pattern_claim);
}

Fe pattern_layer_polynomial(std::span<const Fe> text, std::span<const Fe> pattern, const Point& z, const Point& x) {
  const PatternLayerShape shape = shape_of(text.size(), pattern.size());
  const PatternLayerPoint p = split_pattern_point(shape, x);
  return pattern_layer_expected(shape, z, x, eval_mle_table(text, p.text_point()),
                                eval_mle_table(pattern, p.pattern_point()));
}

SumcheckInstance pattern_layer_instance(std::span<const Fe> text, std::span<const Fe> pattern, const Point& z) {
  const PatternLayerShape shape = shape_of(text.size(), pattern.size());
  std::vector<Fe> t(text.begin(), text.end()), pt(pattern.begin(), pattern.end());
  SumcheckInstance inst;
  inst.num_vars = shape.num_vars();
  inst.degrees = shape.degrees();
  inst.oracle = [t, pt, z](const Point& x) { return pattern_layer_polynomial(t, pt, z, x); };
  const std::uint64_t n = t.size(), m = pt.size();
  std::vector<Fe> layer(n * m);
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t k = 0; k < m; ++k) layer[i * m + k] = t[(i + k) % n] - pt[k];
  inst.claimed_sum = eval_mle_table(layer, z);
  return inst;
}

// ---- Prover -------------------------------------------------------------------------

PatternLayerProver::PatternLayerProver(std::span<const Fe> text, std::span<const Fe> pattern, const Point& z)
    : shape_(shape_of(text.size(), pattern.size())), text_(text.begin(), text.end()),
      pattern_(pattern.begin(), pattern.end()) {
  const unsigned L = shape_.text_bits, M = shape_.pattern_bits;
  if (z.size() != L + M) throw std::invalid_argument("PatternLayerProver: claim point has wrong size");
  zi_ = reversed(Point(z.begin(), z.begin() + L));
  zk_ = reversed(Point(z.begin() + L, z.end()));
}

PatternLayerProver::Slot PatternLayerProver::slot() const {
  const unsigned M = shape_.pattern_bits;
  unsigned start = 0;
  for (unsigned j = 0; j < pos_; ++j) start += j < M ? 3 : 2;
  const unsigned off = round_ - start;
  if (off == 0) return Slot::kI;
  if (off == 1 && pos_ < M) return Slot::kK;
  return Slot::kC;
}

void PatternLayerProver::aggregate_suffix() {
  const unsigned L = shape_.text_bits, M = shape_.pattern_bits;
  const bool has_k = pos_ < M;
  const unsigned si = L - pos_ - 1, sk = has_k ? M - pos_ - 1 : 0;
  {
    EvalTable bi = build_beta_table(msb_first_slice(zi_, pos_ + 1));
    beta_i_.assign(bi.entries().begin(), bi.entries().end());
  }
  if (has_k) {
    EvalTable bk = build_beta_table(msb_first_slice(zk_, pos_ + 1));
    beta_k_.assign(bk.entries().begin(), bk.entries().end());
  } else {
    beta_k_.assign(1, Fe::one());
  }
  const std::uint64_t ni = std::uint64_t{1} << si, nk = std::uint64_t{1} << sk, mask = ni - 1;
  for (unsigned cb = 0; cb < 2; ++cb) {
    Fe lo, hi;
    for (std::uint64_t ks = 0; ks < nk; ++ks) {
      Fe lo_k, hi_k;
      for (std::uint64_t is = 0; is < ni; ++is) {
        const std::uint64_t y = (is + ks + cb) & mask;
        lo_k += beta_i_[is] * text_[2 * y];
        hi_k += beta_i_[is] * text_[2 * y + 1];
      }
      lo += beta_k_[ks] * lo_k;
      hi += beta_k_[ks] * hi_k;
    }
    text_lo_[cb] = lo;
    text_hi_[cb] = hi;
  }
  Fe beta_i_sum;
  for (Fe b : beta_i_) beta_i_sum += b;
  pattern_lo_ = Fe();
  pattern_hi_ = Fe();
  if (has_k) {
    for (std::uint64_t ks = 0; ks < nk; ++ks) {
      pattern_lo_ += beta_k_[ks] * pattern_[2 * ks];
      pattern_hi_ += beta_k_[ks] * pattern_[2 * ks + 1];
    }
  } else {
    pattern_lo_ = pattern_hi_ = pattern_[0];
  }
  pattern_lo_ *= beta_i_sum;
  pattern_hi_ *= beta_i_sum;
  live_.push_back(2 * ni * nk);
  work_ += 2 * ni * nk + ni + nk;
}

RoundMessage PatternLayerProver::round(unsigned j) {
  if (j != round_) throw std::logic_error("PatternLayerProver: rounds out of order");
  const Slot s = slot();
  if (s == Slot::kC) return carry_round();
  const bool has_k = pos_ < shape_.pattern_bits;
  if (s == Slot::kI) aggregate_suffix();
  else live_.push_back(0);
  // Sum over the carry-out bit of the current position, with the suffix pre-aggregated.
  auto term = [&](Fe ai, Fe ak) {
    const Fe sb = sum_bit_eval(ai, ak, carry_in_);
    const Fe p = (Fe::one() - ak) * pattern_lo_ + ak * pattern_hi_;
    Fe acc;
    for (unsigned cb = 0; cb < 2; ++cb) {
      const Fe t = (Fe::one() - sb) * text_lo_[cb] + sb * text_hi_[cb];
      acc += carry_bit_eval(ai, ak, carry_in_, Fe(cb)) * (t - p);
    }
    return acc;
  };
  RoundMessage msg;
  for (unsigned t = 0; t < 4; ++t) {
    const Fe ft(t);
    Fe g;
    if (s == Slot::kI) {
      if (has_k)
        for (unsigned ak = 0; ak < 2; ++ak) g += eq1(zk_[pos_], Fe(ak)) * term(ft, Fe(ak));
      else
        g = term(ft, Fe());
      g *= eq1(zi_[pos_], ft);
    } else {
      g = eq1(zk_[pos_], ft) * term(ri_, ft);
    }
    msg.evals.push_back(prefix_ * g);
  }
  work_ += 16;
  return msg;
}

RoundMessage PatternLayerProver::carry_round() {
  const unsigned L = shape_.text_bits, M = shape_.pattern_bits;
  const bool has_k = pos_ < M;
  const Fe rk = has_k ? rk_ : Fe();
  const Fe sigma = sum_bit_eval(ri_, rk, carry_in_);
  RoundMessage msg;
  if (pos_ + 1 == L) {
    const Fe p = has_k ? pattern_[0] + rk * (pattern_[1] - pattern_[0]) : pattern_[0];
    const Fe t = text_[0] + sigma * (text_[1] - text_[0]);
    for (unsigned tv = 0; tv < 2; ++tv)
      msg.evals.push_back(prefix_ * carry_bit_eval(ri_, rk, carry_in_, Fe(tv)) * (t - p));
    live_.push_back(1);
    return msg;
  }
  const unsigned si = L - pos_ - 1, sk = has_k ? M - pos_ - 1 : 0;
  const bool next_has_k = pos_ + 1 < M;
  const std::uint64_t ni = std::uint64_t{1} << si, nk = std::uint64_t{1} << sk, ymask = (ni >> 1) - 1;
  std::vector<Fe> text_bound(ni);
  for (std::uint64_t u = 0; u < ni; ++u) text_bound[u] = text_[2 * u] + sigma * (text_[2 * u + 1] - text_[2 * u]);
  std::vector<Fe> pattern_bound(nk);
  for (std::uint64_t ks = 0; ks < nk; ++ks)
    pattern_bound[ks] = has_k ? pattern_[2 * ks] + rk * (pattern_[2 * ks + 1] - pattern_[2 * ks]) : pattern_[0];
  // Carry and sum bits of the next position with the current carry at t = 0..3.
  Fe carry_tab[4][2][2][2], sum_tab[4][2][2];
  for (unsigned t = 0; t < 4; ++t)
    for (unsigned ib = 0; ib < 2; ++ib)
      for (unsigned kb = 0; kb < 2; ++kb) {
        sum_tab[t][ib][kb] = sum_bit_eval(Fe(ib), Fe(kb), Fe(t));
        for (unsigned co = 0; co < 2; ++co) carry_tab[t][ib][kb][co] = carry_bit_eval(Fe(ib), Fe(kb), Fe(t), Fe(co));
      }
  Fe acc[4];
  for (std::uint64_t ks = 0; ks < nk; ++ks) {
    const unsigned kb = next_has_k ? static_cast<unsigned>(ks & 1) : 0;
    const std::uint64_t k_hi = next_has_k ? ks >> 1 : 0;
    for (std::uint64_t is = 0; is < ni; ++is) {
      const unsigned ib = static_cast<unsigned>(is & 1);
      const Fe w = beta_i_[is] * beta_k_[ks];
      const std::uint64_t y0 = ((is >> 1) + k_hi) & ymask, y1 = ((is >> 1) + k_hi + 1) & ymask;
      const Fe t00 = text_bound[2 * y0], t01 = text_bound[2 * y0 + 1];
      const Fe t10 = text_bound[2 * y1], t11 = text_bound[2 * y1 + 1];
      for (unsigned t = 0; t < 4; ++t) {
        const Fe sb = sum_tab[t][ib][kb];
        const Fe v0 = t00 + sb * (t01 - t00) - pattern_bound[ks];
        const Fe v1 = t10 + sb * (t11 - t10) - pattern_bound[ks];
        acc[t] += w * (carry_tab[t][ib][kb][0] * v0 + carry_tab[t][ib][kb][1] * v1);
      }
    }
  }
  for (unsigned t = 0; t < 4; ++t) msg.evals.push_back(prefix_ * carry_bit_eval(ri_, rk, carry_in_, Fe(t)) * acc[t]);
  live_.push_back(2 * ni * nk);
  work_ += 8 * ni * nk + ni + nk;
  return msg;
}

void PatternLayerProver::bind(Fe r) {
  const unsigned M = shape_.pattern_bits;
  const bool has_k = pos_ < M;
  switch (slot()) {
    case Slot::kI:
      prefix_ *= eq1(zi_[pos_], r);
      ri_ = r;
      rk_ = Fe();
      break;
    case Slot::kK:
      prefix_ *= eq1(zk_[pos_], r);
      rk_ = r;
      break;
    case Slot::kC: {
      prefix_ *= carry_bit_eval(ri_, rk_, carry_in_, r);
      fold_low_bit(text_, sum_bit_eval(ri_, rk_, carry_in_));
      if (has_k) fold_low_bit(pattern_, rk_);
      work_ += text_.size() + pattern_.size();
      carry_in_ = r;
      ++pos_;
      break;
    }
  }
  ++round_;
}

// ---- Protocol -------------------------------------------------------------------------

std::uint64_t count_occurrences_naive(std::span<const Fe> text, std::span<const Fe> pattern) {
  const std::size_t n = text.size(), m = pattern.size();
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < m && ok; ++k) ok = text[(i + k) % n] == pattern[k];
    count += ok;
  }
  return count;
}

ProveResult prove_patternmatch(std::span<const Fe> text, std::span<const Fe> pattern, std::uint64_t seed,
                               const PatternOptions& opt) {
  const PatternLayerShape shape = shape_of(text.size(), pattern.size());
  const LayeredCircuit c = build_patternmatch_layers(text.size(), pattern.size());
  const unsigned d = c.depth();
  ProveResult res;
  res.writer = TranscriptWriter({ProtocolId::kPattern, size_param(shape), seed});
  auto t0 = std::chrono::steady_clock::now();
  LayerValues values = evaluate(c, patternmatch_input(text, pattern));
  res.eval_ms = ms_since(t0);
  auto t1 = std::chrono::steady_clock::now();
  TranscriptWriter& w = res.writer;
  res.outputs = values[0];
  PendingClaim top = prove_outputs(values[0], w);
  auto claims = prove_layers(c, values, 1, d - 1, {top}, w, opt.gkr, &res.work);
  if (claims.size() != 1) throw std::logic_error("pattern layer expects a single claim");
  const auto tag = static_cast<std::uint16_t>(d - 1);
  Point r;
  Fe text_claim, pattern_claim;
  if (opt.naive_layer_prover) {
    SumcheckInstance inst = pattern_layer_instance(text, pattern, claims[0].point);
    NaiveRoundProver pr(inst);
    r = prove_sumcheck(pr, inst.degrees, w, ChallengeMode::kNonzero, tag);
    const PatternLayerPoint p = split_pattern_point(shape, r);
    text_claim = eval_mle_table(text, p.text_point());
    pattern_claim = eval_mle_table(pattern, p.pattern_point());
    res.work += pr.oracle_calls();
  } else {
    PatternLayerProver pr(text, pattern, claims[0].point);
    r = prove_sumcheck(pr, shape.degrees(), w, ChallengeMode::kNonzero, tag);
    std::tie(text_claim, pattern_claim) = pr.claims();
    res.work += pr.work();
  }
  w.begin(RecordKind::kClaims);
  w.send(std::vector<Fe>{text_claim, pattern_claim});
  res.proof_ms = ms_since(t1);
  return res;
}

Verdict verify_patternmatch(std::uint64_t n, std::uint64_t m, const InputStream& input,
                            std::span<const std::uint8_t> transcript, const PatternOptions& opt) {
  const PatternLayerShape shape = shape_of(n, m);
  const LayeredCircuit c = build_patternmatch_layers(n, m);
  const unsigned d = c.depth();
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    TranscriptReader rd(transcript);
    if (rd.header().protocol != ProtocolId::kPattern || rd.header().size_param != size_param(shape))
      throw RejectError("transcript header does not match the instance");
    std::vector<Fe> outs;
    PendingClaim top = verify_outputs(c.layers[0].log_size, rd, &outs);
    auto claims = verify_layers(c, 1, d - 1, {top}, rd, opt.gkr);
    if (claims.size() != 1) throw RejectError("pattern layer expects a single claim");
    const auto degs = shape.degrees();
    SumcheckClaim sc = verify_sumcheck(claims[0].value, degs, rd, ChallengeMode::kNonzero,
                                       static_cast<std::uint16_t>(d - 1));
    rd.begin();
    const auto vals = rd.receive(2);
    if (pattern_layer_expected(shape, claims[0].point, sc.r, vals[0], vals[1]) != sc.value)
      throw RejectError("final check at layer " + std::to_string(d - 1));
    const PatternLayerPoint p = split_pattern_point(shape, sc.r);
    Point text_at{Fe(0)}, pattern_at{Fe(1)};
    for (Fe x : p.text_point()) text_at.push_back(x);
    for (unsigned j = shape.pattern_bits; j < shape.text_bits; ++j) pattern_at.push_back(Fe(0));
    for (Fe x : p.pattern_point()) pattern_at.push_back(x);
    check_input_claims(shape.text_bits + 1, {{text_at, vals[0]}, {pattern_at, vals[1]}}, input,
                       opt.gkr.table_input_check);
    rd.finish();
    v.outputs = {Fe(n) - outs[0]};
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
