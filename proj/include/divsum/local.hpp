#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "divsum/jets.hpp"
#include "divsum/quadpoly.hpp"

namespace divsum {

using cplx = std::complex<double>;

// Largest number of lattice points a single local enumeration may visit.
inline constexpr double kLocalEnumerationBudget = 1e8;

// c_q(a) = sum over reduced residues h mod q of e(ah/q), via sum_{d|(a,q)} mu(q/d) d.
i64 ramanujan_sum(i64 q, i64 a);

// Taylor jet at s = 1 of the residue-class weight f_k(q, delta, s) from
// Smith's formula for tau_k in progressions. Enumerates the ordered
// k-factorizations of delta; meant for small q.
Jet f_k_jet(i64 q, i64 delta, int k, std::size_t order);

// F_k(q, s) = sum_{delta | q} mu(q/delta) f_k(q, delta, s). Reference definition.
Jet F_k_jet_oracle(i64 q, int k, std::size_t order);

// Closed form at a prime power:
//   F_k(p^m, s) = p^{-ms} [ sum_{v=1}^{k-1} (1-p^{-s})^{v-1} tau_v(p^{m-1})
//                          + (1-p^{-s})^{k-1} tau_k(p^{m-1}) (p - p^s)/(p - 1) ],  m >= 1.
Jet F_k_prime_power_jet(i64 p, int m, int k, std::size_t order);

// Multiplicative assembly of the closed form over the factorization of q.
Jet F_k_jet(i64 q, int k, std::size_t order);

// Compares the closed form with the oracle for every prime power <= max_q.
// Throws ConsistencyError on a coefficient mismatch above 1e-10. Results are
// memoized per (k, order, max_q).
void validate_F_k_closed_form(int k, std::size_t order, i64 max_q = 128);

// N_q(v) = #{h in (Z/q)^ell : F(h) == v mod q}, v = 0..q-1.
class ValueDistribution {
 public:
  ValueDistribution(i64 q, std::vector<i64> counts) : q_(q), counts_(std::move(counts)) {}
  i64 modulus() const { return q_; }
  i64 operator[](i64 v) const { return counts_[static_cast<std::size_t>(v)]; }
  const std::vector<i64>& counts() const { return counts_; }

 private:
  i64 q_;
  std::vector<i64> counts_;
};

ValueDistribution value_distribution(const QuadraticPolynomial& f, i64 q,
                                     double budget = kLocalEnumerationBudget);

// S_F(q, a) = sum_{h in (Z/q)^ell} e(a F(h) / q).
cplx char_sum(const QuadraticPolynomial& f, i64 q, i64 a, double budget = kLocalEnumerationBudget);
cplx char_sum(const ValueDistribution& dist, i64 a);

// rho_F(n) = #{h in (Z/n)^ell : F(h) == 0 mod n}.
i64 rho_F(const QuadraticPolynomial& f, i64 n, double budget = kLocalEnumerationBudget);

// Whether rho_F(n) fits the enumeration budget.
bool rho_F_feasible(const QuadraticPolynomial& f, i64 n, double budget = kLocalEnumerationBudget);

// S_F(p^m) = p^{-(ell-1)m} rho(p^m) - p^{-(ell-1)(m-1)} rho(p^{m-1}).
double S_F_prime_power(const QuadraticPolynomial& f, i64 p, int m, double budget = kLocalEnumerationBudget);

// q^{-ell} sum_{a in (Z/q)^*} S_F(q, a), unreduced complex value.
cplx S_F_direct(const QuadraticPolynomial& f, i64 q, double budget = kLocalEnumerationBudget);

// sum_{d | q} mu(q/d) d^{1-ell} rho_F(d), which equals S_F(q) after expanding
// the Ramanujan sums c_q(F(h)). Reduces to the prime-power shortcut at q = p^m.
double S_F_divisor_sum(const QuadraticPolynomial& f, i64 q, double budget = kLocalEnumerationBudget);

// S_F(q): rho shortcut at prime powers; for other q the direct a-sum (its
// imaginary part must vanish and it must match S_F_divisor_sum to 1e-10, else
// ConsistencyError), or S_F_divisor_sum alone when q^ell exceeds the budget.
double S_F_normalized(const QuadraticPolynomial& f, i64 q, double budget = kLocalEnumerationBudget);

struct LocalFactorTable {
  i64 p = 0;
  int k = 0;
  int depth = 0;                 // M0
  std::vector<i64> rho;          // rho_F(p^m), m = 0..depth
  std::vector<double> s_local;   // S_F(p^m), index 0 holds 1
  std::vector<Jet> fk_jets;      // F_k(p^m, s), index 0 is the constant 1
};

LocalFactorTable local_factor_table(const QuadraticPolynomial& f, int k, i64 p, int depth, std::size_t order,
                                    double budget = kLocalEnumerationBudget);

// CSV rows "p,m,rho,S_F(p^m),F_k(p^m,1)" for m = 1..depth.
std::string local_factor_csv_rows(const LocalFactorTable& t);

}  // namespace divsum
