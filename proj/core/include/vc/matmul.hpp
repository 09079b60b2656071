#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vc/gkr.hpp"
#include "vc/sumcheck.hpp"

namespace vc {

// Matrices are n x n, row-major, n a power of two.

std::vector<Fe> matmul_naive(std::span<const Fe> a, std::span<const Fe> b, std::size_t n);
// Tiled i-k-j product; same result, different association order.
std::vector<Fe> matmul_blocked(std::span<const Fe> a, std::span<const Fe> b, std::size_t n, std::size_t tile = 32);
std::vector<Fe> identity_matrix(std::size_t n);

struct MatmulStats {
  std::uint64_t mults = 0;                // field multiplications done by the prover
  std::uint64_t peak_extra_elements = 0;  // field elements held beyond the input matrices
};

// g(p3) = A~(r1, p3) * B~(p3, r2) over log n variables, degree 2 each.
class MatmulRoundProver : public RoundProver {
 public:
  // Restricts A to row point r1 and B to column point r2 into O(n) tables.
  MatmulRoundProver(std::span<const Fe> a, std::span<const Fe> b, std::size_t n, const Point& r1, const Point& r2,
                    MatmulStats* stats = nullptr);
  // In-place variant: folds the caller's matrices, extra space O(1).
  static MatmulRoundProver in_place(std::span<Fe> a, std::span<Fe> b, std::size_t n, const Point& r1,
                                    const Point& r2, MatmulStats* stats = nullptr);

  MatmulRoundProver(MatmulRoundProver&&) = default;
  MatmulRoundProver(const MatmulRoundProver&) = delete;
  MatmulRoundProver& operator=(const MatmulRoundProver&) = delete;

  RoundMessage round(unsigned j) override;
  void bind(Fe r) override;
  // A~(r1, r3) and B~(r3, r2) once every variable is bound.
  Fe row_value() const { return row_[0]; }
  Fe col_value() const { return col_[0]; }

 private:
  MatmulRoundProver() = default;
  std::vector<Fe> row_store_, col_store_;
  Fe* row_ = nullptr;  // A~(r1, .)
  Fe* col_ = nullptr;  // B~(., r2), stride col_stride_
  std::size_t col_stride_ = 1;
  std::size_t size_ = 0;
  MatmulStats* stats_ = nullptr;
};

SumcheckInstance matmul_instance(std::span<const Fe> a, std::span<const Fe> b, std::size_t n, const Point& r1,
                                 const Point& r2);

// Opening (D* as the answer, then r1 and r2) followed by log n sum-check rounds. The
// final factors are not sent; the verifier evaluates them from the input stream.
ProveResult prove_matmul(std::span<const Fe> a, std::span<const Fe> b, std::span<const Fe> d_star, std::size_t n,
                         std::uint64_t seed, MatmulStats* stats = nullptr);
ProveResult prove_matmul_in_place(std::span<Fe> a, std::span<Fe> b, std::span<const Fe> d_star, std::size_t n,
                                  std::uint64_t seed, MatmulStats* stats = nullptr);

// `ab` streams A at indices [0, n^2) and B at [n^2, 2n^2), row-major; one pass evaluates
// both final factors. D* is read from the transcript answer.
Verdict verify_matmul(std::size_t n, const InputStream& ab, std::span<const std::uint8_t> transcript);

bool freivalds(std::span<const Fe> a, std::span<const Fe> b, std::span<const Fe> d_star, std::size_t n, Rng& rng);

// Proves M^(2^k) by k chained product sum-checks. `tamper(level, power)` may alter the
// prover's stored power M^(2^level) before it is used.
using PowerTamper = std::function<void(unsigned, std::vector<Fe>&)>;
ProveResult prove_matrix_power(std::span<const Fe> m, std::size_t n, unsigned k, std::uint64_t seed,
                               const PowerTamper& tamper = {});
Verdict verify_matrix_power(std::size_t n, unsigned k, const InputStream& m, std::span<const std::uint8_t> transcript);

}  // namespace vc
