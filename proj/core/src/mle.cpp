#include "vc/mle.hpp"

#include <bit>
#include <stdexcept>

namespace vc {

EvalTable::EvalTable(std::vector<Fe> entries) : entries_(std::move(entries)) {
  if (entries_.empty() || !std::has_single_bit(entries_.size()))
    throw std::invalid_argument("EvalTable length must be a power of two");
  vars_ = static_cast<unsigned>(std::countr_zero(entries_.size()));
}

void EvalTable::halve() {
  if (vars_ == 0) throw std::logic_error("cannot halve a table with no variables");
  entries_.resize(entries_.size() / 2);
  --vars_;
}

Fe beta_eval(const Point& z, const Point& p) {
  if (z.size() != p.size()) throw std::invalid_argument("beta_eval: dimension mismatch");
  Fe acc = Fe::one();
  for (std::size_t j = 0; j < z.size(); ++j) acc *= eq1(z[j], p[j]);
  return acc;
}

Fe chi_index(std::uint64_t b, const Point& w) {
  Fe acc = Fe::one();
  const std::size_t v = w.size();
  for (std::size_t k = 0; k < v; ++k) acc *= chi((b >> (v - 1 - k)) & 1, w[k]);
  return acc;
}

Fe eval_mle_stream(std::span<const StreamUpdate> updates, const Point& w) {
  StreamingEvaluator ev({w});
  for (const auto& u : updates) ev.update(u);
  return ev.values()[0];
}

StreamingEvaluator::StreamingEvaluator(std::vector<Point> points)
    : points_(std::move(points)), acc_(points_.size()) {}

void StreamingEvaluator::update(std::uint64_t index, Fe delta) {
  ++seen_;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const std::size_t v = points_[k].size();
    if (v < 64 && (index >> v) != 0) throw std::out_of_range("stream index out of range");
    acc_[k] += delta * chi_index(index, points_[k]);
  }
}

void StreamingEvaluator::update(const StreamUpdate& u) { update(u.index, encode_signed(u.delta)); }

EvalTable build_chi_table(const Point& w, std::uint64_t* work) {
  std::vector<Fe> t(std::size_t{1} << w.size());
  t[0] = Fe::one();
  std::size_t len = 1;
  for (Fe wk : w) {
    // Entry b of length-2len table: prefix b>>1, last bit b&1.
    for (std::size_t b = len; b-- > 0;) {
      Fe prev = t[b];
      t[2 * b + 1] = prev * wk;
      t[2 * b] = prev - t[2 * b + 1];
    }
    len *= 2;
    if (work) *work += len;
  }
  return EvalTable(std::move(t));
}

Fe eval_mle_table(std::span<const Fe> values, const Point& w) {
  if (w.size() >= 64 || values.size() != (std::size_t{1} << w.size()))
    throw std::invalid_argument("eval_mle_table: length mismatch");
  EvalTable chi_t = build_chi_table(w);
  Fe acc;
  for (std::size_t b = 0; b < values.size(); ++b) acc += values[b] * chi_t[b];
  return acc;
}

void bind_variable_values(EvalTable& t, Fe r) {
  if (t.vars() == 0) throw std::invalid_argument("bind on an empty table");
  const std::size_t half = t.size() / 2;
  auto e = t.entries();
  for (std::size_t p = 0; p < half; ++p) e[p] = e[p] + r * (e[half + p] - e[p]);
  t.halve();
}

EvalTable bound_copy(const EvalTable& t, Fe r) {
  EvalTable c = t;
  bind_variable_values(c, r);
  return c;
}

EvalTable build_beta_table(const Point& z) {
  std::vector<Fe> t(std::size_t{1} << z.size());
  t[0] = Fe::one();
  std::size_t len = 1;
  for (Fe zk : z) {
    Fe one_minus = Fe::one() - zk;
    for (std::size_t b = len; b-- > 0;) {
      Fe prev = t[b];
      t[2 * b + 1] = prev * zk;
      t[2 * b] = prev * one_minus;
    }
    len *= 2;
  }
  return EvalTable(std::move(t));
}

void bind_variable_beta(EvalTable& t, Fe z_j, Fe r_j) {
  if (t.vars() == 0) throw std::invalid_argument("bind on an empty table");
  if (z_j.is_zero()) throw std::domain_error("bind_variable_beta: z_j = 0");
  const Fe factor = z_j.inv() * eq1(z_j, r_j);
  const std::size_t half = t.size() / 2;
  auto e = t.entries();
  for (std::size_t p = 0; p < half; ++p) e[p] = e[half + p] * factor;
  t.halve();
}

Fe eval_bound_beta(const EvalTable& t, Fe z_j, Fe t_val, std::uint64_t suffix) {
  if (z_j.is_zero()) throw std::domain_error("eval_bound_beta: z_j = 0");
  return eval_bound_beta_inv(t, z_j, z_j.inv(), t_val, suffix);
}

}  // namespace vc
