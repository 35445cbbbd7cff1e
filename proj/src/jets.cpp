#include "divsum/jets.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "divsum/errors.hpp"

namespace divsum {

Jet Jet::constant(double v, std::size_t order) {
  Jet j(order);
  if (order > 0) j.c_[0] = v;
  return j;
}

Jet Jet::exp_linear(double a, double rate, std::size_t order) {
  Jet j(order);
  double term = a;
  for (std::size_t i = 0; i < order; ++i) {
    j.c_[i] = term;
    term *= rate / static_cast<double>(i + 1);
  }
  return j;
}

double Jet::derivative(std::size_t t) const {
  double f = 1;
  for (std::size_t i = 2; i <= t; ++i) f *= static_cast<double>(i);
  return f * (*this)[t];
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order() > order()) c_.resize(o.order(), 0.0);
  for (std::size_t i = 0; i < o.order(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order() > order()) c_.resize(o.order(), 0.0);
  for (std::size_t i = 0; i < o.order(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet Jet::truncated(std::size_t order) const {
  Jet j(order);
  for (std::size_t i = 0; i < order; ++i) j.c_[i] = (*this)[i];
  return j;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator*(const Jet& a, const Jet& b) {
  const std::size_t n = std::max(a.order(), b.order());
  Jet r(n);
  for (std::size_t i = 0; i < a.order(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < n && j < b.order(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Jet reciprocal(const Jet& a) {
  if (a.order() == 0 || a[0] == 0.0) throw DomainError("jets", "reciprocal of a jet with zero constant term");
  const std::size_t n = a.order();
  Jet r(n);
  r[0] = 1.0 / a[0];
  for (std::size_t j = 1; j < n; ++j) {
    double acc = 0;
    for (std::size_t i = 1; i <= j; ++i) acc += a[i] * r[j - i];
    r[j] = -acc / a[0];
  }
  return r;
}

Jet pow(const Jet& a, int n) {
  if (n < 0) return pow(reciprocal(a), -n);
  Jet result = Jet::constant(1.0, a.order());
  Jet base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Jet log(const Jet& a) {
  if (a.order() == 0 || !(a[0] > 0.0)) throw DomainError("jets", "log of a jet needs a positive constant term");
  const std::size_t n = a.order();
  Jet b(n);
  b[0] = std::log(a[0]);
  // a' = a b'  =>  j a0 b_j = j a_j - sum_{i=1}^{j-1} i b_i a_{j-i}
  for (std::size_t j = 1; j < n; ++j) {
    double acc = static_cast<double>(j) * a[j];
    for (std::size_t i = 1; i < j; ++i) acc -= static_cast<double>(i) * b[i] * a[j - i];
    b[j] = acc / (static_cast<double>(j) * a[0]);
  }
  return b;
}

Jet exp(const Jet& a) {
  const std::size_t n = a.order();
  Jet e(n);
  if (n == 0) return e;
  e[0] = std::exp(a[0]);
  for (std::size_t j = 1; j < n; ++j) {
    double acc = 0;
    for (std::size_t i = 1; i <= j; ++i) acc += static_cast<double>(i) * a[i] * e[j - i];
    e[j] = acc / static_cast<double>(j);
  }
  return e;
}

double LaurentSeries::coefficient(int i) const {
  const int idx = i + pole_;
  if (idx < 0) return 0.0;
  return regular_[static_cast<std::size_t>(idx)];
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  return LaurentSeries(a.pole_order() + b.pole_order(), a.regular_part() * b.regular_part());
}

LaurentSeries operator*(const LaurentSeries& a, const Jet& b) {
  return LaurentSeries(a.pole_order(), a.regular_part() * b);
}

namespace {

// B_{2j} for j = 1..8.
constexpr long double kBernoulliEven[] = {1.0L / 6,      -1.0L / 30,   1.0L / 42,   -1.0L / 30,
                                          5.0L / 66,     -691.0L / 2730, 7.0L / 6,  -3617.0L / 510};

long double gamma_at_cutoff(int n, long long m) {
  long double sum = 0;
  for (long long l = 2; l <= m; ++l) {
    const long double lg = std::log(static_cast<long double>(l));
    sum += std::pow(lg, n) / static_cast<long double>(l);
  }
  if (n == 0) sum += 1;  // l = 1 contributes log^0(1) / 1
  const long double lm = std::log(static_cast<long double>(m));
  const long double x = static_cast<long double>(m);

  // f^{(j)}(x) = x^{-1-j} P_j(log x), P_0 = u^n, P_{j+1} = P_j' - (1+j) P_j.
  std::vector<long double> poly(static_cast<std::size_t>(n) + 1, 0.0L);
  poly[static_cast<std::size_t>(n)] = 1;
  auto eval = [&](const std::vector<long double>& p) {
    long double acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * lm + p[i];
    return acc;
  };
  const long double f_m = eval(poly) / x;
  long double correction = 0;
  long double fact = 1;  // (2j)!
  for (int j = 1; j <= 15; ++j) {
    std::vector<long double> next(poly.size(), 0.0L);
    for (std::size_t i = 1; i < poly.size(); ++i) next[i - 1] += static_cast<long double>(i) * poly[i];
    for (std::size_t i = 0; i < poly.size(); ++i) next[i] -= static_cast<long double>(j) * poly[i];
    poly.swap(next);  // now P_j
    if (j % 2 == 1) {
      const int half = (j + 1) / 2;  // j = 2*half - 1
      fact *= static_cast<long double>(2 * half - 1) * static_cast<long double>(2 * half);
      correction += kBernoulliEven[half - 1] / fact * eval(poly) * std::pow(x, -1.0L - j);
    }
  }
  return sum - std::pow(lm, n + 1) / (n + 1) - f_m / 2 - correction;
}

}  // namespace

StieltjesEstimate stieltjes_euler_maclaurin(int n, long long cutoff) {
  if (n < 0) throw DomainError("jets", "Stieltjes index must be >= 0");
  const long double a = gamma_at_cutoff(n, cutoff);
  const long double b = gamma_at_cutoff(n, 2 * cutoff);
  return {b, std::fabs(a - b)};
}

std::vector<double> stieltjes_constants(int n_max) {
  if (n_max < 0 || n_max > kMaxStieltjesIndex)
    throw DomainError("jets", "Stieltjes index out of range: " + std::to_string(n_max));
  static std::once_flag once;
  static std::vector<double> table;
  static std::string failure;
  static double failure_gap = 0;
  std::call_once(once, [] {
    constexpr long long kCutoff = 40;
    constexpr long double kCertify = 1e-11L;
    for (int n = 0; n <= kMaxStieltjesIndex; ++n) {
      const auto est = stieltjes_euler_maclaurin(n, kCutoff);
      if (!(est.cutoff_gap <= kCertify) && failure.empty()) {
        failure = "gamma_" + std::to_string(n) + " not certified";
        failure_gap = static_cast<double>(est.cutoff_gap);
      }
      table.push_back(static_cast<double>(est.value));
    }
  });
  if (!failure.empty()) throw AccuracyError("jets", failure, failure_gap);
  return {table.begin(), table.begin() + n_max + 1};
}

LaurentSeries zeta_pow_laurent(int k, std::size_t order) {
  if (k < 1) throw DomainError("jets", "zeta power needs k >= 1");
  if (order < static_cast<std::size_t>(k)) throw DomainError("jets", "jet order must be >= k");
  // (s-1) zeta(s) = 1 + sum_n (-1)^n gamma_n / n! (s-1)^{n+1}
  const int needed = static_cast<int>(order) - 2;
  const auto gamma = stieltjes_constants(std::clamp(needed, 0, kMaxStieltjesIndex));
  if (needed > kMaxStieltjesIndex) throw DomainError("jets", "jet order too large for cached Stieltjes constants");
  Jet z(order);
  z[0] = 1;
  double fact = 1;
  for (std::size_t n = 0; n + 1 < order; ++n) {
    if (n > 0) fact *= static_cast<double>(n);
    z[n + 1] = (n % 2 == 0 ? 1.0 : -1.0) * gamma[n] / fact;
  }
  return LaurentSeries(k, pow(z, k));
}

std::vector<double> zeta_pow_principal_part(int k) {
  const auto zk = zeta_pow_laurent(k, static_cast<std::size_t>(k));
  std::vector<double> alpha(static_cast<std::size_t>(k) + 1, 0.0);
  for (int r = 1; r <= k; ++r) alpha[static_cast<std::size_t>(r)] = zk.coefficient(-r);
  return alpha;
}

double residue_main_term(int k, double x, const Jet& g) {
  if (g.order() < static_cast<std::size_t>(k))
    throw DomainError("jets", "residue needs a jet of order >= k");
  if (!(x > 0)) throw DomainError("jets", "residue_main_term needs x > 0");
  const std::size_t order = static_cast<std::size_t>(k);
  const auto zk = zeta_pow_laurent(k, order);
  // x^s / s = x e^{(s-1) log x} / (1 + (s-1))
  const Jet xs = Jet::exp_linear(x, std::log(x), order);
  const Jet inv_s = reciprocal(Jet{1.0, 1.0}.truncated(order));
  const auto product = zk * (xs * inv_s * g.truncated(order));
  return product.residue();
}

}  // namespace divsum
