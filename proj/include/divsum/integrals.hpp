#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "divsum/quadpoly.hpp"

namespace divsum {

enum class QuadratureMethod { automatic, tensor_gauss_legendre, monte_carlo };

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::automatic;  // tensor for ell <= 5
  int panels = 0;                // starting panels per axis; 0 picks ceil(log X) + 1
  double tolerance = 1e-10;      // relative, per output
  double scale = 0;              // errors are measured against max(|value|, scale)
  bool log_panels = true;        // panels uniform in log t; uniform in t otherwise
  double max_points = 2e8;       // tensor budget for the finer resolution
  std::int64_t samples = 1 << 16;  // starting Monte Carlo sample count
  std::int64_t max_samples = 1 << 24;
  std::uint64_t seed = 1;
};

struct QuadratureResult {
  std::vector<double> values;
  std::vector<double> errors;   // |fine - coarse| for tensor, standard error for Monte Carlo
  QuadratureMethod method = QuadratureMethod::tensor_gauss_legendre;
  int panels = 0;               // per axis, finer resolution
  std::int64_t points = 0;
};

// Accumulates n_out integrands at t into out (out is zeroed by the caller).
using BoxIntegrand = std::function<void(std::span<const double> t, std::span<double> out)>;

// Tensor Gauss-Legendre over [lo, hi]^ell, 0 < lo < hi, with panels uniform in
// log t (or in t, see QuadratureSpec). Doubles the panel count until two successive resolutions agree to the
// tolerance; throws AccuracyError when the point budget runs out first.
QuadratureResult tensor_box_integral(int ell, double lo, double hi, int n_out, const BoxIntegrand& f,
                                     const QuadratureSpec& spec);

// Plain Monte Carlo over [lo, hi]^ell. Samples are split into fixed chunks with
// their own seeded generators, so results depend on the seed only. Doubles the
// sample count until the standard error meets the tolerance.
QuadratureResult monte_carlo_box_integral(int ell, double lo, double hi, int n_out, const BoxIntegrand& f,
                                          const QuadratureSpec& spec);

// I_r(X) = int_{[1,X]^ell} (log F(t))^r dt for r = 0..r_max. F must be positive
// on the box (DomainError otherwise).
QuadratureResult log_power_integrals(const QuadraticPolynomial& f, double X, int r_max,
                                     const QuadratureSpec& spec = {});

double evaluate_real(const QuadraticPolynomial& f, std::span<const double> t);

}  // namespace divsum
