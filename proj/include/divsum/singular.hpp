#pragma once

#include <vector>

#include "divsum/jets.hpp"
#include "divsum/local.hpp"
#include "divsum/quadpoly.hpp"

namespace divsum {

struct SingularSeriesOptions {
  i64 P0 = 100;               // primes p <= P0 enter the Euler product
  int M0_min = 2;
  int M0_max = 12;
  i64 Q0 = 300;               // cutoff of the q-sum cross-check
  double tolerance = 1e-8;    // local factors stop once terms fall below 1e-3 * tolerance
  double budget = kLocalEnumerationBudget;
  std::size_t order = 0;      // 0: default_jet_order(k)
};

// beta_{k,r}(q) = (1/r!) sum_{t=0}^{k-r-1} alpha_{k,r+1+t} c_t, with c_t the
// Taylor coefficients of F_k(q, s) at s = 1. Returns r = 0..k-1.
std::vector<double> beta_coeffs(i64 q, int k);

// H_{k,r} from the Taylor coefficients of L(s; k, F) at s = 1.
std::vector<double> H_from_L(const Jet& l, int k);

struct LocalFactor {
  i64 p = 0;
  int depth = 0;                // terms m = 1..depth were summed
  bool budget_limited = false;  // depth capped by the enumeration budget
  Jet factor;                   // 1 + sum_m S_F(p^m) F_k(p^m, s)
  Jet depth_tail;               // coefficientwise bound on the omitted m > depth
};

struct EulerProduct {
  Jet L;
  Jet tail;                     // coefficientwise bound on |L_true - L|
  std::vector<LocalFactor> factors;
  std::vector<double> log_decay;  // C_t with |log factor_p [t]| <= C_t p^{-ell/2} (log p)^t, p >= sqrt(P0)
  double s_constant = 0;        // max |S_F(p^m)| p^{m(ell/2 - 1)} over computed p^m
  int max_depth = 0;
};

// Euler product for L(s; k, F) over p <= P0. Needs ell >= 3.
EulerProduct L_jet(const QuadraticPolynomial& f, int k, const SingularSeriesOptions& opts = {});

struct SingularSeriesResult {
  SingularSeriesResult(int k_, QuadraticPolynomial f_) : k(k_), F(std::move(f_)) {}

  int k = 0;
  QuadraticPolynomial F;
  std::vector<double> H;        // H_{k,0} .. H_{k,k-1}
  std::vector<double> H_tail;
  Jet L_jet;
  Jet L_tail;
  i64 P0 = 0;
  int M0 = 0;                   // deepest m used at any prime
  double tail_estimate = 0;     // max_r H_tail[r]
  i64 Q0 = 0;
  std::vector<double> H_qsum;   // sum_{q <= Q0} S_F(q) beta_{k,r}(q)
  std::vector<double> qsum_tail;
};

// Theorem formula from the Euler product, cross-checked against the q-sum.
// Throws ConsistencyError when the two differ by more than their combined tails.
SingularSeriesResult H_coeffs(const QuadraticPolynomial& f, int k, const SingularSeriesOptions& opts = {});

// S_F(q) assembled multiplicatively from prime powers.
double S_F_multiplicative(const QuadraticPolynomial& f, i64 q, double budget = kLocalEnumerationBudget);

// int_P^inf u^{-1-a} (log u)^j du, a > 0.
double log_power_tail(double a, int j, double P);

// Smith's main term Res(zeta^k x^s / s f_k(q, gcd(h,q), s); s = 1).
double smith_main_term(int k, double x, i64 h, i64 q);
// Whether q <= x^{2/(k+1)}, the range where the main term is proved.
bool smith_in_range(int k, double x, i64 q);

}  // namespace divsum
