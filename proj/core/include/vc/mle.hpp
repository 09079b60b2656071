#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vc/field.hpp"

namespace vc {

// Coordinates of a point in F^v. Coordinate 0 pairs with the most significant label bit.
using Point = std::vector<Fe>;

struct StreamUpdate {
  std::uint64_t index = 0;
  std::int64_t delta = 0;
};

// Dense table of 2^v field elements supporting the bind-one-variable halving update.
class EvalTable {
 public:
  EvalTable() : entries_(1) {}
  // Length must be a power of two (std::invalid_argument otherwise).
  explicit EvalTable(std::vector<Fe> entries);

  unsigned vars() const { return vars_; }
  std::size_t size() const { return entries_.size(); }
  Fe operator[](std::size_t i) const { return entries_[i]; }
  Fe& operator[](std::size_t i) { return entries_[i]; }
  std::span<const Fe> entries() const { return entries_; }
  std::span<Fe> entries() { return entries_; }
  // Drops the upper half after an in-place bind.
  void halve();

 private:
  std::vector<Fe> entries_;
  unsigned vars_ = 0;
};

inline Fe chi(unsigned bit, Fe x) { return bit ? x : Fe::one() - x; }

// eq(z, p) for a single coordinate: z*p + (1-z)(1-p).
inline Fe eq1(Fe z, Fe p) { return z * p + (Fe::one() - z) * (Fe::one() - p); }

Fe beta_eval(const Point& z, const Point& p);

// chi_b(w) for the label b of w.size() bits.
Fe chi_index(std::uint64_t b, const Point& w);

Fe eval_mle_stream(std::span<const StreamUpdate> updates, const Point& w);

// Evaluates several MLEs of one streamed vector in a single pass.
class StreamingEvaluator {
 public:
  explicit StreamingEvaluator(std::vector<Point> points);
  void update(std::uint64_t index, Fe delta);
  void update(const StreamUpdate& u);
  const std::vector<Fe>& values() const { return acc_; }
  std::uint64_t updates_seen() const { return seen_; }

 private:
  std::vector<Point> points_;
  std::vector<Fe> acc_;
  std::uint64_t seen_ = 0;
};

// Doubling table of chi_b(w); `work` accumulates entries written.
EvalTable build_chi_table(const Point& w, std::uint64_t* work = nullptr);
Fe eval_mle_table(std::span<const Fe> values, const Point& w);

// Binds the leading (most significant) variable: p' -> (1-r) t[(0,p')] + r t[(1,p')].
void bind_variable_values(EvalTable& t, Fe r);
EvalTable bound_copy(const EvalTable& t, Fe r);

EvalTable build_beta_table(const Point& z);

// Halving update C^(j) = z_j^{-1} C^(j-1)[(1,.)] (r_j z_j + (1-r_j)(1-z_j)); throws if z_j = 0.
void bind_variable_beta(EvalTable& t, Fe z_j, Fe r_j);

// beta(z, (r_1..r_{j-1}, t_val, suffix)) read from C^(j-1); suffix indexes the remaining variables.
Fe eval_bound_beta(const EvalTable& t, Fe z_j, Fe t_val, std::uint64_t suffix);
// Same, with z_j^{-1} precomputed by the caller.
inline Fe eval_bound_beta_inv(const EvalTable& t, Fe z_j, Fe z_j_inv, Fe t_val, std::uint64_t suffix) {
  return t[t.size() / 2 + suffix] * z_j_inv * eq1(z_j, t_val);
}

}  // namespace vc
