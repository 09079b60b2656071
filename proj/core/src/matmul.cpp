#include "vc/matmul.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace vc {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

unsigned check_dim(std::size_t n) {
  if (n < 2 || !is_power_of_two(n)) throw std::invalid_argument("matrix dimension must be a power of two >= 2");
  return log2_exact(n);
}

void check_sizes(std::size_t n, std::initializer_list<std::size_t> sizes) {
  for (std::size_t s : sizes)
    if (s != n * n) throw std::invalid_argument("matrix has wrong number of entries");
}

Point concat(const Point& a, const Point& b) {
  Point out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void note_extra(MatmulStats* stats, std::uint64_t elems) {
  if (stats) stats->peak_extra_elements = std::max(stats->peak_extra_elements, elems);
}

void add_mults(MatmulStats* stats, std::uint64_t m) {
  if (stats) stats->mults += m;
}

Point draw_point(TranscriptWriter& w, unsigned len) {
  Point p;
  for (unsigned k = 0; k < len; ++k) p.push_back(w.challenge_nonzero());
  return p;
}

Point draw_point(TranscriptReader& rd, unsigned len) {
  Point p;
  for (unsigned k = 0; k < len; ++k) p.push_back(rd.challenge_nonzero());
  return p;
}

Fe stream_eval(const std::vector<Fe>& values, const Point& w) {
  StreamingEvaluator ev({w});
  for (std::uint64_t i = 0; i < values.size(); ++i)
    if (!values[i].is_zero()) ev.update(i, values[i]);
  return ev.values()[0];
}

}  // namespace

std::vector<Fe> matmul_naive(std::span<const Fe> a, std::span<const Fe> b, std::size_t n) {
  check_sizes(n, {a.size(), b.size()});
  std::vector<Fe> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Fe acc;
      for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
      c[i * n + j] = acc;
    }
  return c;
}

std::vector<Fe> matmul_blocked(std::span<const Fe> a, std::span<const Fe> b, std::size_t n, std::size_t tile) {
  check_sizes(n, {a.size(), b.size()});
  if (tile == 0) throw std::invalid_argument("tile must be positive");
  std::vector<Fe> c(n * n);
  for (std::size_t i0 = 0; i0 < n; i0 += tile)
    for (std::size_t k0 = 0; k0 < n; k0 += tile)
      for (std::size_t j0 = 0; j0 < n; j0 += tile)
        for (std::size_t i = i0; i < std::min(n, i0 + tile); ++i)
          for (std::size_t k = k0; k < std::min(n, k0 + tile); ++k) {
            const Fe aik = a[i * n + k];
            for (std::size_t j = j0; j < std::min(n, j0 + tile); ++j) c[i * n + j] += aik * b[k * n + j];
          }
  return c;
}

std::vector<Fe> identity_matrix(std::size_t n) {
  std::vector<Fe> m(n * n);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = Fe(1);
  return m;
}

// ---- Round prover ---------------------------------------------------------------------

MatmulRoundProver::MatmulRoundProver(std::span<const Fe> a, std::span<const Fe> b, std::size_t n, const Point& r1,
                                     const Point& r2, MatmulStats* stats)
    : stats_(stats) {
  const unsigned log_n = check_dim(n);
  check_sizes(n, {a.size(), b.size()});
  if (r1.size() != log_n || r2.size() != log_n) throw std::invalid_argument("MatmulRoundProver: point size");
  std::uint64_t work = 0;
  const EvalTable rows = build_chi_table(r1, &work);
  const EvalTable cols = build_chi_table(r2, &work);
  row_store_.assign(n, Fe());
  col_store_.assign(n, Fe());
  for (std::size_t i = 0; i < n; ++i) {
    const Fe c = rows[i];
    for (std::size_t k = 0; k < n; ++k) row_store_[k] += c * a[i * n + k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    Fe acc;
    for (std::size_t j = 0; j < n; ++j) acc += cols[j] * b[k * n + j];
    col_store_[k] = acc;
  }
  add_mults(stats, work + 2 * n * n);
  note_extra(stats, 4 * n);
  row_ = row_store_.data();
  col_ = col_store_.data();
  size_ = n;
}

MatmulRoundProver MatmulRoundProver::in_place(std::span<Fe> a, std::span<Fe> b, std::size_t n, const Point& r1,
                                              const Point& r2, MatmulStats* stats) {
  const unsigned log_n = check_dim(n);
  check_sizes(n, {a.size(), b.size()});
  if (r1.size() != log_n || r2.size() != log_n) throw std::invalid_argument("MatmulRoundProver: point size");
  // Bind A's row variables: row i <- row i + r (row i+half - row i).
  std::size_t rows = n;
  for (Fe r : r1) {
    rows /= 2;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        Fe& lo = a[i * n + k];
        lo += r * (a[(i + rows) * n + k] - lo);
      }
    add_mults(stats, rows * n);
  }
  std::size_t cols = n;
  for (Fe r : r2) {
    cols /= 2;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < cols; ++j) {
        Fe& lo = b[k * n + j];
        lo += r * (b[k * n + j + cols] - lo);
      }
    add_mults(stats, cols * n);
  }
  MatmulRoundProver p;
  p.stats_ = stats;
  p.row_ = a.data();
  p.col_ = b.data();
  p.col_stride_ = n;
  p.size_ = n;
  note_extra(stats, 3);
  return p;
}

RoundMessage MatmulRoundProver::round(unsigned) {
  const std::size_t half = size_ / 2, st = col_stride_;
  Fe e0, e1, e2;
  for (std::size_t s = 0; s < half; ++s) {
    const Fe a0 = row_[s], a1 = row_[s + half];
    const Fe b0 = col_[s * st], b1 = col_[(s + half) * st];
    e0 += a0 * b0;
    e1 += a1 * b1;
    e2 += (a1 + a1 - a0) * (b1 + b1 - b0);
  }
  add_mults(stats_, 3 * half);
  return {{e0, e1, e2}};
}

void MatmulRoundProver::bind(Fe r) {
  const std::size_t half = size_ / 2, st = col_stride_;
  for (std::size_t s = 0; s < half; ++s) {
    row_[s] += r * (row_[s + half] - row_[s]);
    col_[s * st] += r * (col_[(s + half) * st] - col_[s * st]);
  }
  add_mults(stats_, 2 * half);
  size_ = half;
}

SumcheckInstance matmul_instance(std::span<const Fe> a, std::span<const Fe> b, std::size_t n, const Point& r1,
                                 const Point& r2) {
  const unsigned log_n = check_dim(n);
  std::vector<Fe> av(a.begin(), a.end()), bv(b.begin(), b.end());
  SumcheckInstance inst;
  inst.num_vars = log_n;
  inst.degrees.assign(log_n, 2);
  inst.oracle = [av, bv, r1, r2](const Point& p3) {
    return eval_mle_table(av, concat(r1, p3)) * eval_mle_table(bv, concat(p3, r2));
  };
  inst.claimed_sum = eval_mle_table(matmul_naive(a, b, n), concat(r1, r2));
  return inst;
}

// ---- Protocol -------------------------------------------------------------------------

namespace {

template <class MakeProver>
ProveResult prove_matmul_impl(std::span<const Fe> d_star, std::size_t n, std::uint64_t seed, MatmulStats* stats,
                              MakeProver make) {
  const unsigned log_n = check_dim(n);
  ProveResult res;
  res.writer = TranscriptWriter({ProtocolId::kMatmulSpecial, static_cast<std::uint16_t>(log_n), seed});
  auto t0 = std::chrono::steady_clock::now();
  TranscriptWriter& w = res.writer;
  w.begin(RecordKind::kOpening);
  w.send_answer(d_star);
  const Point r1 = draw_point(w, log_n), r2 = draw_point(w, log_n);
  MatmulRoundProver pr = make(r1, r2);
  std::vector<unsigned> degs(log_n, 2);
  prove_sumcheck(pr, degs, w, ChallengeMode::kNonzero, std::uint16_t{1});
  note_extra(stats, (stats ? stats->peak_extra_elements : 0) + 3 * log_n);
  res.proof_ms = ms_since(t0);
  res.outputs.assign(d_star.begin(), d_star.end());
  if (stats) res.work = stats->mults;
  return res;
}

}  // namespace

ProveResult prove_matmul(std::span<const Fe> a, std::span<const Fe> b, std::span<const Fe> d_star, std::size_t n,
                         std::uint64_t seed, MatmulStats* stats) {
  check_sizes(n, {a.size(), b.size(), d_star.size()});
  return prove_matmul_impl(d_star, n, seed, stats, [&](const Point& r1, const Point& r2) {
    return MatmulRoundProver(a, b, n, r1, r2, stats);
  });
}

ProveResult prove_matmul_in_place(std::span<Fe> a, std::span<Fe> b, std::span<const Fe> d_star, std::size_t n,
                                  std::uint64_t seed, MatmulStats* stats) {
  check_sizes(n, {a.size(), b.size(), d_star.size()});
  return prove_matmul_impl(d_star, n, seed, stats, [&](const Point& r1, const Point& r2) {
    return MatmulRoundProver::in_place(a, b, n, r1, r2, stats);
  });
}

Verdict verify_matmul(std::size_t n, const InputStream& ab, std::span<const std::uint8_t> transcript) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    const unsigned log_n = check_dim(n);
    TranscriptReader rd(transcript);
    if (rd.header().protocol != ProtocolId::kMatmulSpecial || rd.header().size_param != log_n)
      throw RejectError("transcript header does not match the instance");
    rd.begin();
    v.outputs = rd.receive_answer(n * n);
    const Point r1 = draw_point(rd, log_n), r2 = draw_point(rd, log_n);
    const Fe claim = stream_eval(v.outputs, concat(r1, r2));
    std::vector<unsigned> degs(log_n, 2);
    SumcheckClaim sc = verify_sumcheck(claim, degs, rd, ChallengeMode::kNonzero, std::uint16_t{1});
    // Combined layout (0, i, k) -> A, (1, k, j) -> B.
    StreamingEvaluator ev({concat(concat({Fe(0)}, r1), sc.r), concat(concat({Fe(1)}, sc.r), r2)});
    const std::uint64_t limit = 2 * static_cast<std::uint64_t>(n) * n;
    ab([&](std::uint64_t i, Fe delta) {
      if (i >= limit) throw MalformedError("input index out of range");
      ev.update(i, delta);
    });
    if (ev.values()[0] * ev.values()[1] != sc.value) throw RejectError("final check");
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

bool freivalds(std::span<const Fe> a, std::span<const Fe> b, std::span<const Fe> d_star, std::size_t n, Rng& rng) {
  check_sizes(n, {a.size(), b.size(), d_star.size()});
  const std::vector<Fe> x = random_vector(rng, n);
  auto apply = [n](std::span<const Fe> m, const std::vector<Fe>& v) {
    std::vector<Fe> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      Fe acc;
      for (std::size_t k = 0; k < n; ++k) acc += m[i * n + k] * v[k];
      out[i] = acc;
    }
    return out;
  };
  return apply(a, apply(b, x)) == apply(d_star, x);
}

// ---- Matrix power ---------------------------------------------------------------------

namespace {

std::uint16_t power_param(unsigned log_n, unsigned k) {
  if (k == 0 || k > 255 || log_n > 255) throw std::invalid_argument("matrix power: k must be in [1, 255]");
  return static_cast<std::uint16_t>((k << 8) | log_n);
}

Point line_point(const Point& u1, const Point& u2, Fe t) {
  Point p(u1.size());
  for (std::size_t c = 0; c < u1.size(); ++c) p[c] = u1[c] + t * (u2[c] - u1[c]);
  return p;
}

}  // namespace

ProveResult prove_matrix_power(std::span<const Fe> m, std::size_t n, unsigned k, std::uint64_t seed,
                               const PowerTamper& tamper) {
  const unsigned log_n = check_dim(n);
  check_sizes(n, {m.size()});
  ProveResult res;
  res.writer = TranscriptWriter({ProtocolId::kMatrixPower, power_param(log_n, k), seed});
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<Fe>> powers{std::vector<Fe>(m.begin(), m.end())};
  for (unsigned i = 1; i <= k; ++i) powers.push_back(matmul_blocked(powers.back(), powers.back(), n));
  if (tamper)
    for (unsigned i = 0; i <= k; ++i) tamper(i, powers[i]);
  res.eval_ms = ms_since(t0);
  auto t1 = std::chrono::steady_clock::now();
  TranscriptWriter& w = res.writer;
  w.begin(RecordKind::kOpening);
  w.send_answer(powers[k]);
  res.outputs = powers[k];
  Point r1 = draw_point(w, log_n), r2 = draw_point(w, log_n);
  std::vector<unsigned> degs(log_n, 2);
  for (unsigned level = k; level >= 1; --level) {
    const std::vector<Fe>& p = powers[level - 1];
    MatmulRoundProver pr(p, p, n, r1, r2);
    const Point r3 = prove_sumcheck(pr, degs, w, ChallengeMode::kNonzero, static_cast<std::uint16_t>(level));
    const Fe a = pr.row_value(), b = pr.col_value();
    w.begin(RecordKind::kClaims);
    w.send(std::vector<Fe>{a, b});
    res.work += 2 * n * n;
    if (level == 1) break;
    const Point u1 = concat(r1, r3), u2 = concat(r3, r2);
    std::vector<Fe> h{a, b};
    for (unsigned t = 2; t <= 2 * log_n; ++t) h.push_back(eval_mle_table(p, line_point(u1, u2, Fe(t))));
    w.send(std::span<const Fe>(h).subspan(2));
    const Fe rs = w.challenge_nonzero();
    const Point next = line_point(u1, u2, rs);
    r1.assign(next.begin(), next.begin() + log_n);
    r2.assign(next.begin() + log_n, next.end());
  }
  res.proof_ms = ms_since(t1);
  return res;
}

Verdict verify_matrix_power(std::size_t n, unsigned k, const InputStream& m, std::span<const std::uint8_t> transcript) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    const unsigned log_n = check_dim(n);
    TranscriptReader rd(transcript);
    if (rd.header().protocol != ProtocolId::kMatrixPower || rd.header().size_param != power_param(log_n, k))
      throw RejectError("transcript header does not match the instance");
    rd.begin();
    v.outputs = rd.receive_answer(n * n);
    Point r1 = draw_point(rd, log_n), r2 = draw_point(rd, log_n);
    Fe claim = stream_eval(v.outputs, concat(r1, r2));
    std::vector<unsigned> degs(log_n, 2);
    Point u1, u2;
    Fe a, b;
    for (unsigned level = k; level >= 1; --level) {
      SumcheckClaim sc = verify_sumcheck(claim, degs, rd, ChallengeMode::kNonzero, static_cast<std::uint16_t>(level));
      rd.begin();
      const auto vals = rd.receive(2);
      a = vals[0];
      b = vals[1];
      if (a * b != sc.value) throw RejectError("final check at level " + std::to_string(level));
      u1 = concat(r1, sc.r);
      u2 = concat(sc.r, r2);
      if (level == 1) break;
      std::vector<Fe> h{a, b};
      const auto extra = rd.receive(2 * log_n - 1);
      h.insert(h.end(), extra.begin(), extra.end());
      const Fe rs = rd.challenge_nonzero();
      const Point next = line_point(u1, u2, rs);
      r1.assign(next.begin(), next.begin() + log_n);
      r2.assign(next.begin() + log_n, next.end());
      claim = interpolate_at(h, rs);
    }
    check_input_claims(2 * log_n, {{u1, a}, {u2, b}}, m, false);
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
