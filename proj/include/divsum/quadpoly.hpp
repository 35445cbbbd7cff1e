#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace divsum {

using i64 = std::int64_t;
using i128 = __int128;

// F(x) = x^t Q x + b^t x + c with integer coefficients, Q stored row-major.
class QuadraticPolynomial {
 public:
  QuadraticPolynomial(int ell, std::vector<i64> q_row_major, std::vector<i64> b, i64 c);

  int ell() const { return ell_; }
  i64 a(int i, int j) const { return q_[static_cast<std::size_t>(i * ell_ + j)]; }
  const std::vector<i64>& q() const { return q_; }
  const std::vector<i64>& b() const { return b_; }
  i64 c() const { return c_; }

  // Entry (i, j) of the symmetrized matrix Q + Q^t.
  i64 sym(int i, int j) const { return a(i, j) + a(j, i); }

  bool operator==(const QuadraticPolynomial&) const = default;

 private:
  int ell_;
  std::vector<i64> q_;
  std::vector<i64> b_;
  i64 c_;
};

// Exact value of F at x; throws DomainError on dimension mismatch.
i128 evaluate(const QuadraticPolynomial& f, std::span<const i64> x);

// Upper bound for max F on [1,X]^ell: sum|a_ij| X^2 + sum|b_r| X + |c|.
i128 sieve_bound(const QuadraticPolynomial& f, i64 x_max);

// The textbook N_F(X) = X^2 sum a_ij + X sum b_r + c (corner value at (X,...,X)).
i128 corner_value(const QuadraticPolynomial& f, i64 x_max);

// det(Q + Q^t), exact (fraction-free elimination).
i128 symmetric_determinant(const QuadraticPolynomial& f);

struct ValidationVerdict {
  i128 delta = 0;             // det(Q + Q^t)
  bool nonsingular = false;
  bool dimension_ok = false;  // ell >= 3
  bool positive = false;      // F >= 1 on [1,X]^ell
  bool exhaustive = false;    // positivity decided by full scan
  double min_value = 0;       // exact lattice minimum, or continuous minimum
  std::vector<std::string> violations;

  // Hypotheses needed by the asymptotic engine.
  bool pass() const { return nonsingular && positive && dimension_ok; }
  // Hypotheses needed by the diagnostics (any ell).
  bool pass_diagnostic() const { return nonsingular && positive; }
};

// Points scanned exhaustively before switching to the continuous relaxation.
inline constexpr double kExhaustiveScanBudget = 1e7;

ValidationVerdict validate(const QuadraticPolynomial& f, i64 x_max);

// Minimum of the real quadratic over the box [lo,hi]^ell, found by solving
// for the stationary point on every face of the box.
double continuous_box_minimum(const QuadraticPolynomial& f, double lo, double hi);

std::string to_string(i128 v);

}  // namespace divsum
