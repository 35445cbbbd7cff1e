#pragma once

#include <optional>
#include <vector>

#include "divsum/divisor.hpp"
#include "divsum/integrals.hpp"
#include "divsum/singular.hpp"

namespace divsum {

// sum_r H_{k,r} I_r(X).
double main_term(const QuadraticPolynomial& f, int k, double X, const SingularSeriesResult& ss,
                 const QuadratureSpec& spec = {});

// Same, from an explicit H vector (length k).
double main_term(const QuadraticPolynomial& f, const std::vector<double>& H, double X, const QuadratureSpec& spec = {});

struct ComparisonRow {
  i64 X = 0;
  u64 exact = 0;
  double main_term = 0;
  double ratio = 0;    // exact / main_term
  double abs_err = 0;  // |exact - main_term|
};

struct ComparisonReport {
  int k = 0;
  int ell = 0;
  std::vector<ComparisonRow> rows;          // ascending X
  std::optional<double> fitted_exponent;    // needs >= 3 rows
  double theorem_exponent = 0;
  std::vector<double> H;
  double tail_estimate = 0;
  i64 P0 = 0;
  int M0 = 0;
  i64 Q0 = 0;
};

// ell - (ell-2)/(ell+2) min(1, 4/(k+1)).
double theorem_exponent(int ell, int k);

struct CompareOptions {
  SingularSeriesOptions singular;
  QuadratureSpec quadrature;
  i64 sieve_budget = kDefaultSieveBudget;
};

// Exact T_{k,F}(X) against the main term on each X of the schedule. The exact
// column is computed in two enumeration orders and must agree exactly.
// Errors are rethrown with the offending X in the message.
ComparisonReport compare(const QuadraticPolynomial& f, int k, std::vector<i64> schedule,
                         const CompareOptions& opts = {});

// Same, reusing an already computed singular series.
ComparisonReport compare(const QuadraticPolynomial& f, int k, std::vector<i64> schedule,
                         const SingularSeriesResult& ss, const CompareOptions& opts = {});

}  // namespace divsum
