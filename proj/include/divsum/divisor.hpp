#pragma once

#include <cstdint>
#include <vector>

#include "divsum/quadpoly.hpp"

namespace divsum {

using u64 = std::uint64_t;

// tau_k(n) for 1 <= n <= N. Immutable after construction.
class DivisorTable {
 public:
  DivisorTable(int k, std::vector<u64> values);

  int k() const { return k_; }
  i64 size() const { return static_cast<i64>(values_.size()) - 1; }  // N
  u64 operator[](i64 n) const { return values_[static_cast<std::size_t>(n)]; }
  const std::vector<u64>& values() const { return values_; }  // index 0 unused

 private:
  int k_;
  std::vector<u64> values_;
};

// Largest table the divisor routines will allocate by default (entries).
inline constexpr i64 kDefaultSieveBudget = 100'000'000;

// k-1 successive Dirichlet convolutions with the constant function 1.
DivisorTable sieve_tau_k(int k, i64 n_max, i64 budget = kDefaultSieveBudget);

// T_{k,F}(X) = sum over x in [1,X]^ell of tau_k(F(x)). Row-major enumeration
// with the form updated incrementally along the last coordinate.
u64 exact_T(const QuadraticPolynomial& f, int k, i64 x_max, i64 budget = kDefaultSieveBudget);
u64 exact_T(const QuadraticPolynomial& f, const DivisorTable& table, i64 x_max);

// Same sum, enumerated with the first coordinate innermost and every value
// evaluated from scratch. Used to cross-check exact_T.
u64 exact_T_transposed(const QuadraticPolynomial& f, const DivisorTable& table, i64 x_max);

// sum_{m <= x, m == h (mod q)} tau_k(m), 1 <= h <= q.
u64 tau_k_ap_sum(const DivisorTable& table, i64 x, i64 h, i64 q);
u64 tau_k_ap_sum(int k, i64 x, i64 h, i64 q);

}  // namespace divsum
