#include "divsum/singular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "divsum/arith.hpp"
#include "divsum/errors.hpp"
#include "divsum/parallel.hpp"

namespace divsum {

namespace {

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Jet abs_jet(const Jet& a) {
  Jet r(a.order());
  for (std::size_t i = 0; i < a.order(); ++i) r[i] = std::abs(a[i]);
  return r;
}

// Largest |c_t| over the coefficients that reach H (t < k).
double leading_magnitude(const Jet& a, int k) {
  double m = 0;
  for (std::size_t t = 0; t < static_cast<std::size_t>(k) && t < a.order(); ++t) m = std::max(m, std::abs(a[t]));
  return m;
}

std::string str(i64 v) { return std::to_string(v); }

struct PrimeWork {
  LocalFactor local;
  double s_constant = 0;
};

PrimeWork local_factor(const QuadraticPolynomial& f, int k, i64 p, const SingularSeriesOptions& opts,
                       std::size_t order) {
  const double ell = f.ell();
  const double threshold = 1e-3 * opts.tolerance;
  PrimeWork w;
  w.local.p = p;
  w.local.factor = Jet::constant(1.0, order);
  i64 rho_prev = 1, pm = 1;
  double first = 0, prev_mag = 0, mag = 0;
  for (int m = 1; m <= opts.M0_max; ++m) {
    if (pm > (i64{1} << 40) / p || !rho_F_feasible(f, pm * p, opts.budget)) {
      w.local.budget_limited = true;
      break;
    }
    pm *= p;
    const i64 rho = rho_F(f, pm, opts.budget);
    const double s = static_cast<double>(rho) * std::pow(static_cast<double>(p), -(ell - 1) * m) -
                     static_cast<double>(rho_prev) * std::pow(static_cast<double>(p), -(ell - 1) * (m - 1));
    rho_prev = rho;
    w.s_constant = std::max(w.s_constant, std::abs(s) * std::pow(static_cast<double>(pm), ell / 2 - 1));
    const Jet term = F_k_prime_power_jet(p, m, k, order) * s;
    w.local.factor += term;
    w.local.depth = m;
    prev_mag = mag;
    mag = leading_magnitude(term, k);
    if (first == 0) first = mag;
    if (m >= opts.M0_min && mag < threshold && prev_mag < threshold) return w;
  }
  if (!w.local.budget_limited && mag >= threshold && first > 0 && mag >= first)
    throw AccuracyError("singular",
                        "non-convergent local factor at p=" + str(p) + ": term " + str(w.local.depth) +
                            " is not smaller than the first",
                        mag);
  return w;
}

// Bound on sum_{m > depth} |S_F(p^m) F_k(p^m, s)| from |S_F(p^m)| <= C p^{m(1 - ell/2)}.
Jet depth_tail(i64 p, int depth, int k, double ell, double c, std::size_t order) {
  Jet tail(order);
  const double lp = std::log(static_cast<double>(p));
  for (int m = depth + 1; m * lp < 34.0; ++m) {
    const double bound = c * std::exp(-m * lp * (ell / 2 - 1));
    tail += abs_jet(F_k_prime_power_jet(p, m, k, order)) * bound;
  }
  return tail;
}

}  // namespace

std::vector<double> beta_coeffs(i64 q, int k) {
  if (q < 1 || k < 1) throw DomainError("singular", "beta_coeffs needs q >= 1 and k >= 1");
  const auto alpha = zeta_pow_principal_part(k);
  const Jet fk = F_k_jet(q, k, static_cast<std::size_t>(k));
  std::vector<double> beta(static_cast<std::size_t>(k), 0.0);
  for (int r = 0; r < k; ++r) {
    double s = 0;
    for (int t = 0; t <= k - r - 1; ++t) s += alpha[static_cast<std::size_t>(r + 1 + t)] * fk[static_cast<std::size_t>(t)];
    beta[static_cast<std::size_t>(r)] = s / factorial(r);
  }
  return beta;
}

std::vector<double> H_from_L(const Jet& l, int k) {
  if (k < 1) throw DomainError("singular", "H_from_L needs k >= 1");
  const auto alpha = zeta_pow_principal_part(k);
  std::vector<double> h(static_cast<std::size_t>(k), 0.0);
  for (int r = 0; r < k; ++r) {
    double s = 0;
    for (int t = 0; t <= k - r - 1; ++t) s += l[static_cast<std::size_t>(t)] * alpha[static_cast<std::size_t>(r + 1 + t)];
    h[static_cast<std::size_t>(r)] = s / factorial(r);
  }
  return h;
}

double log_power_tail(double a, int j, double P) {
  if (!(a > 0) || !(P > 1)) throw DomainError("singular", "log_power_tail needs a > 0 and P > 1");
  const double L = std::log(P);
  double s = 0, term = 1;  // term = j!/i! L^i, built from i = j downward
  for (int i = j; i >= 0; --i) {
    s += term * std::pow(L, i) / std::pow(a, j - i + 1);
    term *= i;
  }
  return std::exp(-a * L) * s;
}

EulerProduct L_jet(const QuadraticPolynomial& f, int k, const SingularSeriesOptions& opts) {
  if (f.ell() < 3) throw DomainError("singular", "the Euler product needs ell >= 3");
  if (k < 1) throw DomainError("singular", "L_jet needs k >= 1");
  if (opts.P0 < 2 || opts.M0_min < 1 || opts.M0_max < opts.M0_min || !(opts.tolerance > 0))
    throw DomainError("singular", "bad truncation parameters");
  const std::size_t order = opts.order ? opts.order : default_jet_order(k);
  validate_F_k_closed_form(k, order, 128);

  const auto primes = arith::primes_up_to(opts.P0);
  auto work = parallel_chunks(primes.size(), [&](std::size_t i) { return local_factor(f, k, primes[i], opts, order); });

  const double ell = f.ell();
  EulerProduct out;
  for (const auto& w : work) out.s_constant = std::max(out.s_constant, w.s_constant);

  out.L = Jet::constant(1.0, order);
  out.log_decay.assign(order, 0.0);
  Jet log_tail(order);
  for (auto& w : work) {
    LocalFactor& lf = w.local;
    if (!(lf.factor[0] > 0))
      throw ConsistencyError("singular", "local factor at p=" + str(lf.p) + " is not positive");
    lf.depth_tail = depth_tail(lf.p, lf.depth, k, ell, out.s_constant, order);
    // log(f + e) - log f = log(1 + e/f), majorized by -log(1 - |e| |1/f|)
    const Jet u = lf.depth_tail * abs_jet(reciprocal(lf.factor));
    if (u[0] >= 1) throw AccuracyError("singular", "depth tail swamps the local factor at p=" + str(lf.p), u[0]);
    const Jet lt = log(Jet::constant(1.0, order) - u) * -1.0;
    log_tail += lt;
    // decay fit on the upper range of primes, where the asymptotic shape holds
    if (static_cast<double>(lf.p) * static_cast<double>(lf.p) >= static_cast<double>(opts.P0)) {
      const Jet lg = log(lf.factor);
      const double lp = std::log(static_cast<double>(lf.p));
      for (std::size_t t = 0; t < order; ++t)
        out.log_decay[t] = std::max(out.log_decay[t], (std::abs(lg[t]) + lt[t]) *
                                                          std::pow(static_cast<double>(lf.p), ell / 2) /
                                                          std::pow(lp, static_cast<double>(t)));
    }
    out.L = out.L * lf.factor;
    out.max_depth = std::max(out.max_depth, lf.depth);
    out.factors.push_back(std::move(lf));
  }
  for (std::size_t t = 0; t < order; ++t)
    log_tail[t] += out.log_decay[t] * log_power_tail(ell / 2 - 1, static_cast<int>(t), static_cast<double>(opts.P0));
  out.tail = abs_jet(out.L) * (exp(log_tail) - Jet::constant(1.0, order));
  return out;
}

double S_F_multiplicative(const QuadraticPolynomial& f, i64 q, double budget) {
  if (q < 1) throw DomainError("singular", "S_F needs q >= 1");
  double s = 1;
  for (const auto& [p, e] : arith::factorize(q)) s *= S_F_prime_power(f, p, e, budget);
  return s;
}

SingularSeriesResult H_coeffs(const QuadraticPolynomial& f, int k, const SingularSeriesOptions& opts) {
  if (k < 2) throw DomainError("singular", "H_coeffs needs k >= 2");
  if (opts.Q0 < 2) throw DomainError("singular", "Q0 must be >= 2");
  const EulerProduct ep = L_jet(f, k, opts);

  SingularSeriesResult res(k, f);
  res.L_jet = ep.L;
  res.L_tail = ep.tail;
  res.P0 = opts.P0;
  res.M0 = ep.max_depth;
  res.Q0 = opts.Q0;
  res.H = H_from_L(ep.L, k);
  const auto alpha = zeta_pow_principal_part(k);
  res.H_tail.assign(static_cast<std::size_t>(k), 0.0);
  for (int r = 0; r < k; ++r) {
    double s = 0;
    for (int t = 0; t <= k - r - 1; ++t) s += ep.tail[static_cast<std::size_t>(t)] * std::abs(alpha[static_cast<std::size_t>(r + 1 + t)]);
    res.H_tail[static_cast<std::size_t>(r)] = s / factorial(r);
  }
  res.tail_estimate = *std::max_element(res.H_tail.begin(), res.H_tail.end());

  // q-sum path, with S_F assembled from prime powers
  std::map<i64, double> local;
  auto s_prime_power = [&](i64 p, int e) {
    const i64 pe = arith::ipow(p, e);
    auto it = local.find(pe);
    if (it == local.end()) it = local.emplace(pe, S_F_prime_power(f, p, e, opts.budget)).first;
    return it->second;
  };
  const double ell = f.ell();
  res.H_qsum.assign(static_cast<std::size_t>(k), 0.0);
  std::vector<double> decay(static_cast<std::size_t>(k), 0.0);
  for (i64 q = 1; q <= opts.Q0; ++q) {
    double s = 1;
    for (const auto& [p, e] : arith::factorize(q)) s *= s_prime_power(p, e);
    if (s == 0) continue;
    const auto beta = beta_coeffs(q, k);
    const double lq = std::log(static_cast<double>(q));
    for (int r = 0; r < k; ++r) {
      const double term = s * beta[static_cast<std::size_t>(r)];
      res.H_qsum[static_cast<std::size_t>(r)] += term;
      if (q * q >= opts.Q0)
        decay[static_cast<std::size_t>(r)] = std::max(decay[static_cast<std::size_t>(r)],
                                                     std::abs(term) * std::pow(static_cast<double>(q), ell / 2) /
                                                         std::pow(lq, k - 1 - r));
    }
  }
  res.qsum_tail.assign(static_cast<std::size_t>(k), 0.0);
  for (int r = 0; r < k; ++r) {
    const auto i = static_cast<std::size_t>(r);
    res.qsum_tail[i] = decay[i] * log_power_tail(ell / 2 - 1, k - 1 - r, static_cast<double>(opts.Q0));
    const double gap = std::abs(res.H[i] - res.H_qsum[i]);
    const double allowed = res.H_tail[i] + res.qsum_tail[i] + 1e-12 * std::max(1.0, std::abs(res.H[i]));
    if (gap > allowed)
      throw ConsistencyError("singular", "H_{k," + std::to_string(r) + "}: Euler product and q-sum differ by " +
                                             std::to_string(gap) + ", combined tails " + std::to_string(allowed));
  }
  return res;
}

double smith_main_term(int k, double x, i64 h, i64 q) {
  if (k < 1 || q < 1 || h < 1 || h > q) throw DomainError("singular", "smith_main_term needs 1 <= h <= q");
  return residue_main_term(k, x, f_k_jet(q, arith::gcd(h, q), k, default_jet_order(k)));
}

bool smith_in_range(int k, double x, i64 q) {
  return static_cast<double>(q) <= std::pow(x, 2.0 / (k + 1)) * (1 + 1e-12);
}

}  // namespace divsum
