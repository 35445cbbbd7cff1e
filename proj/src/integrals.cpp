#include "divsum/integrals.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "divsum/errors.hpp"
#include "divsum/parallel.hpp"

namespace divsum {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 10>;

// Nodes and weights of the composite rule on one axis.
struct AxisRule {
  std::vector<double> x, w;
};

AxisRule axis_rule(double lo, double hi, int panels, bool log_panels) {
  const auto a = Gauss::abscissa();
  const auto wt = Gauss::weights();
  AxisRule r;
  const double llo = std::log(lo), step = (std::log(hi) - llo) / panels;
  auto edge = [&](int p) {
    if (p == 0) return lo;
    if (p == panels) return hi;
    return log_panels ? std::exp(llo + p * step) : lo + (hi - lo) * p / panels;
  };
  for (int p = 0; p < panels; ++p) {
    const double u0 = edge(p), u1 = edge(p + 1);
    const double mid = (u0 + u1) / 2, half = (u1 - u0) / 2;
    for (std::size_t i = a.size(); i-- > 0;) {
      r.x.push_back(mid - half * a[i]);
      r.w.push_back(half * wt[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      r.x.push_back(mid + half * a[i]);
      r.w.push_back(half * wt[i]);
    }
  }
  return r;
}

std::vector<double> tensor_sum(int ell, const AxisRule& rule, int n_out, const BoxIntegrand& f) {
  const std::size_t n = rule.x.size();
  // one chunk per node of the first axis; reduced in order
  auto parts = parallel_chunks(n, [&](std::size_t i0) {
    std::vector<double> acc(static_cast<std::size_t>(n_out), 0.0), out(static_cast<std::size_t>(n_out));
    std::vector<double> t(static_cast<std::size_t>(ell));
    std::vector<std::size_t> idx(static_cast<std::size_t>(ell), 0);
    t[0] = rule.x[i0];
    for (;;) {
      double w = rule.w[i0];
      for (int a = 1; a < ell; ++a) {
        t[static_cast<std::size_t>(a)] = rule.x[idx[static_cast<std::size_t>(a)]];
        w *= rule.w[idx[static_cast<std::size_t>(a)]];
      }
      std::fill(out.begin(), out.end(), 0.0);
      f(t, out);
      for (int r = 0; r < n_out; ++r) acc[static_cast<std::size_t>(r)] += w * out[static_cast<std::size_t>(r)];
      int a = ell - 1;
      while (a >= 1 && ++idx[static_cast<std::size_t>(a)] == n) idx[static_cast<std::size_t>(a--)] = 0;
      if (a < 1) break;
    }
    return acc;
  });
  std::vector<double> total(static_cast<std::size_t>(n_out), 0.0);
  for (const auto& p : parts)
    for (int r = 0; r < n_out; ++r) total[static_cast<std::size_t>(r)] += p[static_cast<std::size_t>(r)];
  return total;
}

void check_box(int ell, double lo, double hi, int n_out) {
  if (ell < 1 || n_out < 1) throw DomainError("integrals", "need ell >= 1 and at least one integrand");
  if (!(lo > 0) || !(hi > lo)) throw DomainError("integrals", "box must satisfy 0 < lo < hi");
}

}  // namespace

QuadratureResult tensor_box_integral(int ell, double lo, double hi, int n_out, const BoxIntegrand& f,
                                     const QuadratureSpec& spec) {
  check_box(ell, lo, hi, n_out);
  int panels = spec.panels > 0 ? spec.panels : static_cast<int>(std::ceil(std::log(hi / lo))) + 1;
  auto points = [&](int p) { return std::pow(static_cast<double>(p) * Gauss::abscissa().size() * 2, ell); };
  std::vector<double> coarse = tensor_sum(ell, axis_rule(lo, hi, panels, spec.log_panels), n_out, f);
  double worst = 0;
  while (points(2 * panels) <= spec.max_points) {
    panels *= 2;
    std::vector<double> fine = tensor_sum(ell, axis_rule(lo, hi, panels, spec.log_panels), n_out, f);
    QuadratureResult res;
    res.values = fine;
    res.panels = panels;
    res.points = static_cast<std::int64_t>(points(panels));
    bool ok = true;
    worst = 0;
    for (int r = 0; r < n_out; ++r) {
      const auto i = static_cast<std::size_t>(r);
      res.errors.push_back(std::abs(fine[i] - coarse[i]));
      const double rel = res.errors[i] / std::max({std::abs(fine[i]), spec.scale, 1e-300});
      worst = std::max(worst, rel);
      if (rel > spec.tolerance) ok = false;
    }
    if (ok) return res;
    coarse = std::move(fine);
  }
  throw AccuracyError("integrals", "tensor quadrature did not reach the tolerance within the point budget", worst);
}

QuadratureResult monte_carlo_box_integral(int ell, double lo, double hi, int n_out, const BoxIntegrand& f,
                                          const QuadratureSpec& spec) {
  check_box(ell, lo, hi, n_out);
  if (spec.samples < 64) throw DomainError("integrals", "need at least 64 Monte Carlo samples");
  constexpr std::size_t kChunks = 64;
  const double volume = std::pow(hi - lo, ell);
  const auto no = static_cast<std::size_t>(n_out);
  // running sums of f and f^2 per output, extended as the sample count doubles
  std::vector<double> s1(no, 0.0), s2(no, 0.0);
  std::int64_t done = 0;
  double worst = 0;
  for (std::int64_t target = spec.samples; target <= spec.max_samples; target *= 2) {
    const std::int64_t per_chunk = (target - done) / static_cast<std::int64_t>(kChunks);
    auto parts = parallel_chunks(kChunks, [&](std::size_t c) {
      std::seed_seq seq{spec.seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(done)};
      std::mt19937_64 gen(seq);
      std::uniform_real_distribution<double> u(lo, hi);
      std::vector<double> a1(no, 0.0), a2(no, 0.0), out(no), t(static_cast<std::size_t>(ell));
      for (std::int64_t s = 0; s < per_chunk; ++s) {
        for (auto& x : t) x = u(gen);
        std::fill(out.begin(), out.end(), 0.0);
        f(t, out);
        for (std::size_t r = 0; r < no; ++r) {
          a1[r] += out[r];
          a2[r] += out[r] * out[r];
        }
      }
      return std::pair{a1, a2};
    });
    for (const auto& [a1, a2] : parts)
      for (std::size_t r = 0; r < no; ++r) {
        s1[r] += a1[r];
        s2[r] += a2[r];
      }
    done += per_chunk * static_cast<std::int64_t>(kChunks);
    QuadratureResult res;
    res.method = QuadratureMethod::monte_carlo;
    res.points = done;
    bool ok = true;
    worst = 0;
    const double n = static_cast<double>(done);
    for (std::size_t r = 0; r < no; ++r) {
      const double mean = s1[r] / n;
      const double var = std::max(0.0, s2[r] / n - mean * mean);
      res.values.push_back(volume * mean);
      res.errors.push_back(volume * std::sqrt(var / n));
      const double rel = res.errors[r] / std::max({std::abs(res.values[r]), spec.scale, 1e-300});
      worst = std::max(worst, rel);
      if (rel > spec.tolerance) ok = false;
    }
    if (ok) return res;
  }
  throw AccuracyError("integrals", "Monte Carlo did not reach the tolerance within the sample budget", worst);
}

double evaluate_real(const QuadraticPolynomial& f, std::span<const double> t) {
  const int ell = f.ell();
  double v = static_cast<double>(f.c());
  for (int i = 0; i < ell; ++i) {
    double row = static_cast<double>(f.b()[static_cast<std::size_t>(i)]);
    for (int j = 0; j < ell; ++j) row += static_cast<double>(f.a(i, j)) * t[static_cast<std::size_t>(j)];
    v += row * t[static_cast<std::size_t>(i)];
  }
  return v;
}

QuadratureResult log_power_integrals(const QuadraticPolynomial& f, double X, int r_max, const QuadratureSpec& spec) {
  if (r_max < 0) throw DomainError("integrals", "r must be >= 0");
  if (!(X > 1)) throw DomainError("integrals", "need X > 1");
  const double minimum = continuous_box_minimum(f, 1.0, X);
  if (!(minimum > 0))
    throw DomainError("integrals", "F is not positive on [1, X]^ell (minimum " + std::to_string(minimum) + ")");
  BoxIntegrand g = [&](std::span<const double> t, std::span<double> out) {
    const double l = std::log(evaluate_real(f, t));
    double p = 1;
    for (int r = 0; r <= r_max; ++r) {
      out[static_cast<std::size_t>(r)] = p;
      p *= l;
    }
  };
  QuadratureMethod m = spec.method;
  if (m == QuadratureMethod::automatic)
    m = f.ell() <= 5 ? QuadratureMethod::tensor_gauss_legendre : QuadratureMethod::monte_carlo;
  if (m == QuadratureMethod::monte_carlo) return monte_carlo_box_integral(f.ell(), 1.0, X, r_max + 1, g, spec);
  return tensor_box_integral(f.ell(), 1.0, X, r_max + 1, g, spec);
}

}  // namespace divsum
