#include "divsum/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "divsum/arith.hpp"
#include "divsum/errors.hpp"
#include "divsum/format.hpp"
#include "divsum/integrals.hpp"
#include "divsum/parallel.hpp"
#include "divsum/singular.hpp"

namespace divsum {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Distance to the nearest integer.
double nearest(double x) {
  const double f = x - std::floor(x);
  return std::min(f, 1 - f);
}

// Odometer over {lo..hi}^ell calling fn(x).
template <typename Fn>
void for_each_point(int ell, i64 lo, i64 hi, Fn&& fn) {
  std::vector<i64> x(static_cast<std::size_t>(ell), lo);
  for (;;) {
    fn(x);
    int i = ell - 1;
    while (i >= 0 && x[static_cast<std::size_t>(i)] == hi) x[static_cast<std::size_t>(i--)] = lo;
    if (i < 0) return;
    ++x[static_cast<std::size_t>(i)];
  }
}

void check_box_budget(int ell, i64 X, double budget) {
  if (X < 1) throw DomainError("verify", "X must be >= 1");
  if (std::pow(static_cast<double>(X), ell) > budget)
    throw ResourceError("verify", "X^ell = " + format_double(std::pow(static_cast<double>(X), ell)) +
                                      " exceeds the enumeration budget");
}

std::vector<cplx> roots_of_unity(i64 M) {
  std::vector<cplx> r(static_cast<std::size_t>(M));
  for (i64 j = 0; j < M; ++j) r[static_cast<std::size_t>(j)] = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(M));
  return r;
}

}  // namespace

ArcPoint make_arc_point(i64 a, i64 q, double beta) {
  if (q < 1) throw DomainError("verify", "arc point needs q >= 1");
  if (arith::gcd(a, q) != 1) throw DomainError("verify", "arc point needs gcd(a, q) = 1");
  return {a, q, beta};
}

cplx e1(double x) { return std::polar(1.0, kTwoPi * (x - std::floor(x))); }

cplx J_k_direct(const DivisorTable& table, double alpha, i64 X) {
  if (X > table.size()) throw DomainError("verify", "X exceeds the divisor table");
  cplx s = 0;
  for (i64 m = 1; m <= X; ++m) s += static_cast<double>(table[m]) * e1(std::fmod(static_cast<double>(m) * alpha, 1.0));
  return s;
}

cplx J_k_direct(int k, double alpha, i64 X) { return J_k_direct(sieve_tau_k(k, std::max<i64>(X, 1)), alpha, X); }

cplx J_k_direct(const DivisorTable& table, const ArcPoint& pt, i64 X) {
  if (X > table.size()) throw DomainError("verify", "X exceeds the divisor table");
  cplx s = 0;
  const double q = static_cast<double>(pt.q);
  for (i64 m = 1; m <= X; ++m)
    s += static_cast<double>(table[m]) *
         e1(static_cast<double>(arith::mod(m * pt.a, pt.q)) / q + std::fmod(static_cast<double>(m) * pt.beta, 1.0));
  return s;
}

BoxValueHistogram box_value_histogram(const QuadraticPolynomial& f, i64 X, double budget) {
  check_box_budget(f.ell(), X, budget);
  i128 lo = 0, hi = 0;
  bool first = true;
  for_each_point(f.ell(), 1, X, [&](const std::vector<i64>& x) {
    const i128 v = evaluate(f, x);
    if (first || v < lo) lo = v;
    if (first || v > hi) hi = v;
    first = false;
  });
  if (hi - lo >= static_cast<i128>(budget))
    throw ResourceError("verify", "value range of F on the box exceeds the budget");
  BoxValueHistogram h;
  h.min_value = static_cast<i64>(lo);
  h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for_each_point(f.ell(), 1, X, [&](const std::vector<i64>& x) {
    ++h.counts[static_cast<std::size_t>(evaluate(f, x) - lo)];
  });
  return h;
}

cplx I_F_direct(const BoxValueHistogram& h, double alpha) {
  cplx s = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] == 0) continue;
    const double v = static_cast<double>(h.min_value + static_cast<i64>(i));
    s += static_cast<double>(h.counts[i]) * e1(std::fmod(v * alpha, 1.0));
  }
  return s;
}

cplx I_F_direct(const BoxValueHistogram& h, const ArcPoint& pt) {
  cplx s = 0;
  const double q = static_cast<double>(pt.q);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] == 0) continue;
    const i64 v = h.min_value + static_cast<i64>(i);
    s += static_cast<double>(h.counts[i]) *
         e1(static_cast<double>(arith::mod(v * pt.a, pt.q)) / q + std::fmod(static_cast<double>(v) * pt.beta, 1.0));
  }
  return s;
}

cplx I_F_direct(const QuadraticPolynomial& f, double alpha, i64 X, double budget) {
  return I_F_direct(box_value_histogram(f, X, budget), alpha);
}

cplx I_F_pointwise(const QuadraticPolynomial& f, double alpha, i64 X, double budget) {
  check_box_budget(f.ell(), X, budget);
  cplx s = 0;
  for_each_point(f.ell(), 1, X, [&](const std::vector<i64>& x) {
    s += e1(std::fmod(static_cast<double>(evaluate(f, x)) * alpha, 1.0));
  });
  return s;
}

std::vector<cplx> oscillatory_log_integrals(int r_max, double beta, double X) {
  if (r_max < 0 || !(X > 1)) throw DomainError("verify", "need r >= 0 and X > 1");
  QuadratureSpec spec;
  spec.log_panels = false;
  spec.panels = std::max(4, static_cast<int>(std::ceil(10 * std::abs(beta) * (X - 1))));
  spec.tolerance = 1e-12;
  spec.scale = (X - 1) * std::pow(std::max(1.0, std::log(X)), r_max);
  const auto res = tensor_box_integral(1, 1.0, X, 2 * (r_max + 1),
                                       [&](std::span<const double> t, std::span<double> out) {
                                         const cplx w = e1(t[0] * beta);
                                         const double l = std::log(t[0]);
                                         double p = 1;
                                         for (int r = 0; r <= r_max; ++r) {
                                           out[static_cast<std::size_t>(2 * r)] = p * w.real();
                                           out[static_cast<std::size_t>(2 * r + 1)] = p * w.imag();
                                           p *= l;
                                         }
                                       },
                                       spec);
  std::vector<cplx> out;
  for (int r = 0; r <= r_max; ++r)
    out.emplace_back(res.values[static_cast<std::size_t>(2 * r)], res.values[static_cast<std::size_t>(2 * r + 1)]);
  return out;
}

cplx oscillatory_box_integral(const QuadraticPolynomial& f, double beta, double X) {
  if (!(X > 1)) throw DomainError("verify", "need X > 1");
  const int ell = f.ell();
  // largest phase change along one axis, from a bound on the gradient
  double grad = 0;
  for (int i = 0; i < ell; ++i) {
    double g = std::abs(static_cast<double>(f.b()[static_cast<std::size_t>(i)]));
    for (int j = 0; j < ell; ++j) g += std::abs(static_cast<double>(f.sym(i, j))) * X;
    grad = std::max(grad, g);
  }
  QuadratureSpec spec;
  spec.log_panels = false;
  spec.panels = std::max(2, static_cast<int>(std::ceil(10 * std::abs(beta) * grad * (X - 1))));
  spec.tolerance = 1e-9;
  spec.scale = std::pow(X - 1, ell);
  const auto res = tensor_box_integral(ell, 1.0, X, 2,
                                       [&](std::span<const double> t, std::span<double> out) {
                                         const cplx w = e1(evaluate_real(f, t) * beta);
                                         out[0] = w.real();
                                         out[1] = w.imag();
                                       },
                                       spec);
  return {res.values[0], res.values[1]};
}

ArcResidual major_arc_residual_J(int k, const ArcPoint& pt, i64 X) {
  if (X < 2) throw DomainError("verify", "need X >= 2");
  if (!smith_in_range(k, static_cast<double>(X), pt.q))
    throw DomainError("verify", "major arc needs q <= X^{2/(k+1)}");
  ArcResidual r;
  const DivisorTable table = sieve_tau_k(k, X);
  r.j_direct = J_k_direct(table, pt, X);
  const auto beta = beta_coeffs(pt.q, k);
  const auto osc = oscillatory_log_integrals(k - 1, pt.beta, static_cast<double>(X));
  for (int j = 0; j < k; ++j) r.j_approx += beta[static_cast<std::size_t>(j)] * osc[static_cast<std::size_t>(j)];
  r.j_residual = std::abs(r.j_direct - r.j_approx);
  return r;
}

ArcResidual major_arc_residual_I(const QuadraticPolynomial& f, const ArcPoint& pt, i64 X) {
  if (X < 2) throw DomainError("verify", "need X >= 2");
  ArcResidual r;
  r.i_direct = I_F_direct(box_value_histogram(f, X), pt);
  const cplx s = char_sum(f, pt.q, pt.a);
  r.i_approx = s * std::pow(static_cast<double>(pt.q), -f.ell()) *
               oscillatory_box_integral(f, pt.beta, static_cast<double>(X));
  r.i_residual = std::abs(r.i_direct - r.i_approx);
  return r;
}

ArcResidual major_arc_residual(const QuadraticPolynomial& f, int k, const ArcPoint& pt, i64 X) {
  ArcResidual r = major_arc_residual_J(k, pt, X);
  const ArcResidual i = major_arc_residual_I(f, pt, X);
  r.i_direct = i.i_direct;
  r.i_approx = i.i_approx;
  r.i_residual = i.i_residual;
  return r;
}

double minor_arc_bound(int ell, i64 q, double X) {
  const double qd = static_cast<double>(q), h = ell / 2.0;
  const double lq = std::pow(std::log(qd), h);
  return std::pow(X, ell) * std::pow(qd, -h) + std::pow(X, h) * lq + std::pow(qd, h) * lq;
}

double minor_arc_ratio(const BoxValueHistogram& h, int ell, const ArcPoint& pt, i64 X) {
  const double qd = static_cast<double>(pt.q);
  if (std::abs(pt.beta) > 1 / (qd * qd) * (1 + 1e-12)) throw DomainError("verify", "minor arc ratio needs |beta| <= q^{-2}");
  return std::abs(I_F_direct(h, pt)) / minor_arc_bound(ell, pt.q, static_cast<double>(X));
}

double minor_arc_ratio(const QuadraticPolynomial& f, const ArcPoint& pt, i64 X) {
  return minor_arc_ratio(box_value_histogram(f, X), f.ell(), pt, X);
}

std::vector<SweepRow> minor_arc_sweep(const QuadraticPolynomial& f, i64 X, const std::vector<i64>& qs,
                                      const std::vector<double>& beta_steps) {
  const auto h = box_value_histogram(f, X);
  std::vector<ArcPoint> points;
  for (i64 q : qs)
    for (i64 a = q == 1 ? 0 : 1; a < std::max<i64>(q, 1); ++a) {
      if (arith::gcd(a, q) != 1) continue;
      for (double s : beta_steps) points.push_back(make_arc_point(a, q, s / static_cast<double>(q * q)));
    }
  return parallel_chunks(points.size(), [&](std::size_t i) {
    const ArcPoint& pt = points[i];
    SweepRow row;
    row.alpha = pt.alpha();
    row.q = pt.q;
    row.a = pt.a;
    row.beta = pt.beta;
    row.abs_I = std::abs(I_F_direct(h, pt));
    row.bound = minor_arc_bound(f.ell(), pt.q, static_cast<double>(X));
    row.ratio = row.abs_I / row.bound;
    return row;
  });
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,q,a,beta,abs_I,bound,ratio\n";
  for (const auto& r : rows)
    out += format_double(r.alpha) + "," + std::to_string(r.q) + "," + std::to_string(r.a) + "," + format_double(r.beta) +
           "," + format_double(r.abs_I) + "," + format_double(r.bound) + "," + format_double(r.ratio) + "\n";
  return out;
}

namespace {

double weyl_sum(const std::vector<std::vector<i64>>& A, double alpha, i64 lo, i64 hi, double cap) {
  const int ell = static_cast<int>(A.size());
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != ell) throw DomainError("verify", "A must be square");
  double total = 0;
  for_each_point(ell, lo, hi, [&](const std::vector<i64>& x) {
    double prod = 1;
    for (const auto& row : A) {
      i64 n = 0;
      for (int j = 0; j < ell; ++j) n += row[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      const double d = nearest(std::fmod(static_cast<double>(n) * alpha, 1.0));
      prod *= d > 0 ? std::min(cap, 1 / d) : cap;
    }
    total += prod;
  });
  return total;
}

}  // namespace

double weyl_product_H(const std::vector<std::vector<i64>>& A, double alpha, i64 X) {
  if (X < 1) throw DomainError("verify", "X must be >= 1");
  return weyl_sum(A, alpha, 1, X, static_cast<double>(X));
}

double weyl_product_H_differences(const std::vector<std::vector<i64>>& A, double alpha, i64 X) {
  if (X < 1) throw DomainError("verify", "X must be >= 1");
  return weyl_sum(A, alpha, -(X - 1), X - 1, static_cast<double>(X));
}

std::vector<std::vector<i64>> symmetrized_rows(const QuadraticPolynomial& f) {
  std::vector<std::vector<i64>> A(static_cast<std::size_t>(f.ell()), std::vector<i64>(static_cast<std::size_t>(f.ell())));
  for (int i = 0; i < f.ell(); ++i)
    for (int j = 0; j < f.ell(); ++j) A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f.sym(i, j);
  return A;
}

double parseval_grid(const DivisorTable& table, i64 N, i64 M) {
  if (N > table.size() || N < 1 || M < 1) throw DomainError("verify", "bad Parseval grid");
  const auto root = roots_of_unity(M);
  auto parts = parallel_chunks(static_cast<std::size_t>(M), [&](std::size_t j) {
    cplx s = 0;
    i64 idx = 0;
    for (i64 m = 1; m <= N; ++m) {
      idx = (idx + static_cast<i64>(j)) % M;
      s += static_cast<double>(table[m]) * root[static_cast<std::size_t>(idx)];
    }
    return std::norm(s);
  });
  double total = 0;
  for (double v : parts) total += v;
  return total / static_cast<double>(M);
}

double parseval_exact(const DivisorTable& table, i64 N) {
  if (N > table.size()) throw DomainError("verify", "N exceeds the divisor table");
  double s = 0;
  for (i64 m = 1; m <= N; ++m) s += static_cast<double>(table[m]) * static_cast<double>(table[m]);
  return s;
}

double orthogonality_grid(const QuadraticPolynomial& f, int k, i64 X) {
  const auto h = box_value_histogram(f, X);
  const i128 nf = sieve_bound(f, X);
  if (nf > static_cast<i128>(kDefaultSieveBudget)) throw ResourceError("verify", "N_F(X) exceeds the sieve budget");
  const i64 N = static_cast<i64>(nf);
  const DivisorTable table = sieve_tau_k(k, N);
  const i64 M = 2 * (N + 1);
  const auto root = roots_of_unity(M);
  auto parts = parallel_chunks(static_cast<std::size_t>(M), [&](std::size_t jj) {
    const i64 j = static_cast<i64>(jj);
    cplx I = 0, J = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i)
      if (h.counts[i])
        I += static_cast<double>(h.counts[i]) *
             root[static_cast<std::size_t>(arith::mod((h.min_value + static_cast<i64>(i)) % M * j, M))];
    for (i64 m = 1; m <= N; ++m) J += static_cast<double>(table[m]) * root[static_cast<std::size_t>(arith::mod(-m * j, M))];
    return I * J;
  });
  cplx total = 0;
  for (const auto& v : parts) total += v;
  return total.real() / static_cast<double>(M);
}

GaussSumFit gauss_sum_exponent(const QuadraticPolynomial& f, i64 q_max) {
  GaussSumFit fit;
  const auto primes = arith::primes_up_to(q_max);
  const auto maxima = parallel_chunks(primes.size(), [&](std::size_t i) {
    const auto dist = value_distribution(f, primes[i]);
    double m = 0;
    for (i64 a = 1; a < primes[i]; ++a) m = std::max(m, std::abs(char_sum(dist, a)));
    return m;
  });
  std::vector<double> xs;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    // exact zeros (e.g. Q3 at q = 2) carry no scale information
    if (maxima[i] < 1e-9) continue;
    fit.primes.push_back(primes[i]);
    fit.max_abs.push_back(maxima[i]);
    xs.push_back(static_cast<double>(primes[i]));
  }
  fit.exponent = loglog_slope(xs, fit.max_abs);
  return fit;
}

}  // namespace divsum
