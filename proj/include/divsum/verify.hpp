#pragma once

#include <complex>
#include <string>
#include <vector>

#include "divsum/divisor.hpp"
#include "divsum/local.hpp"
#include "divsum/quadpoly.hpp"

namespace divsum {

// alpha = a/q + beta with gcd(a, q) = 1.
struct ArcPoint {
  i64 a = 0;
  i64 q = 1;
  double beta = 0;
  double alpha() const { return static_cast<double>(a) / static_cast<double>(q) + beta; }
};

// Checks gcd(a, q) = 1 and q >= 1; throws DomainError otherwise.
ArcPoint make_arc_point(i64 a, i64 q, double beta);

// e(x) = exp(2 pi i x), reduced mod 1 first.
cplx e1(double x);

// J_k(alpha, X) = sum_{m <= X} tau_k(m) e(m alpha).
cplx J_k_direct(const DivisorTable& table, double alpha, i64 X);
cplx J_k_direct(int k, double alpha, i64 X);
// Exact reduction of m a mod q before adding m beta.
cplx J_k_direct(const DivisorTable& table, const ArcPoint& pt, i64 X);

// Counts of F(x) over x in [1, X]^ell, indexed from the smallest value.
struct BoxValueHistogram {
  i64 min_value = 0;
  std::vector<i64> counts;
};
BoxValueHistogram box_value_histogram(const QuadraticPolynomial& f, i64 X, double budget = kLocalEnumerationBudget);

// I_F(alpha, X) = sum_{x in [1, X]^ell} e(F(x) alpha).
cplx I_F_direct(const QuadraticPolynomial& f, double alpha, i64 X, double budget = kLocalEnumerationBudget);
cplx I_F_direct(const BoxValueHistogram& h, double alpha);
cplx I_F_direct(const BoxValueHistogram& h, const ArcPoint& pt);
// Point-by-point sum, no histogram; reference for the fast routes.
cplx I_F_pointwise(const QuadraticPolynomial& f, double alpha, i64 X, double budget = kLocalEnumerationBudget);

// int_1^X (log u)^r e(u beta) du for r = 0..r_max, with >= 10 panels per period.
std::vector<cplx> oscillatory_log_integrals(int r_max, double beta, double X);
// int_{[1,X]^ell} e(F(t) beta) dt.
cplx oscillatory_box_integral(const QuadraticPolynomial& f, double beta, double X);

struct ArcResidual {
  double j_residual = 0;  // |J_direct - J_approx|
  double i_residual = 0;  // |I_direct - I_approx|
  cplx j_direct, j_approx, i_direct, i_approx;
};

// Major-arc approximations of J_k and I_F at alpha = a/q + beta.
// Needs q <= X^{2/(k+1)}.
ArcResidual major_arc_residual(const QuadraticPolynomial& f, int k, const ArcPoint& pt, i64 X);
// The two halves separately; the J half only sieves to X, so it reaches far
// larger X than the ell-dimensional I half. The unused fields stay zero.
ArcResidual major_arc_residual_J(int k, const ArcPoint& pt, i64 X);
ArcResidual major_arc_residual_I(const QuadraticPolynomial& f, const ArcPoint& pt, i64 X);

// X^ell q^{-ell/2} + X^{ell/2} log^{ell/2} q + q^{ell/2} log^{ell/2} q.
double minor_arc_bound(int ell, i64 q, double X);
// |I_F(alpha, X)| / minor_arc_bound. Needs |beta| <= q^{-2}.
double minor_arc_ratio(const QuadraticPolynomial& f, const ArcPoint& pt, i64 X);
double minor_arc_ratio(const BoxValueHistogram& h, int ell, const ArcPoint& pt, i64 X);

struct SweepRow {
  double alpha = 0;
  i64 q = 0, a = 0;
  double beta = 0;
  double abs_I = 0, bound = 0, ratio = 0;
};
// Every reduced a/q for q in qs, each with beta = s q^{-2} for s in beta_steps.
std::vector<SweepRow> minor_arc_sweep(const QuadraticPolynomial& f, i64 X, const std::vector<i64>& qs,
                                      const std::vector<double>& beta_steps = {0.0, 0.5, 1.0});
std::string sweep_csv(const std::vector<SweepRow>& rows);

// sum_{x in [1,X]^ell} prod_v min(X, ||a_v . x alpha||^{-1}), a_v the rows of A.
double weyl_product_H(const std::vector<std::vector<i64>>& A, double alpha, i64 X);
// The same product summed over differences h in (-X, X)^ell; bounds |I_F|^2
// when A holds the rows of Q + Q^t.
double weyl_product_H_differences(const std::vector<std::vector<i64>>& A, double alpha, i64 X);
// Rows of Q + Q^t.
std::vector<std::vector<i64>> symmetrized_rows(const QuadraticPolynomial& f);

// Trapezoid rule on M equally spaced alpha of int_0^1 |J_k(alpha, N)|^2 d alpha.
double parseval_grid(const DivisorTable& table, i64 N, i64 M);
// sum_{m <= N} tau_k(m)^2.
double parseval_exact(const DivisorTable& table, i64 N);
// int_0^1 I_F(alpha, X) J_k(-alpha, N_F) d alpha on the grid of step 1/(2 (N_F + 1)).
double orthogonality_grid(const QuadraticPolynomial& f, int k, i64 X);

// Least-squares slope of log max_a |S_F(q, a)| against log q over primes q <= q_max.
// Primes where every S_F(q, a) vanishes are skipped.
struct GaussSumFit {
  double exponent = 0;
  std::vector<i64> primes;
  std::vector<double> max_abs;
};
GaussSumFit gauss_sum_exponent(const QuadraticPolynomial& f, i64 q_max);

}  // namespace divsum
