#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace divsum {

// Truncated Taylor expansion sum_j c_j (s-1)^j, j < order().
// Binary operations zero-pad the shorter operand and return the longer order.
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::size_t order) : c_(order, 0.0) {}
  Jet(std::initializer_list<double> coeffs) : c_(coeffs) {}
  explicit Jet(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  static Jet constant(double v, std::size_t order);
  // a * exp(rate * (s-1)): covers p^{-s}, x^s, delta^{-s}.
  static Jet exp_linear(double a, double rate, std::size_t order);

  std::size_t order() const { return c_.size(); }
  double operator[](std::size_t j) const { return j < c_.size() ? c_[j] : 0.0; }
  double& operator[](std::size_t j) { return c_[j]; }
  const std::vector<double>& coeffs() const { return c_; }

  // d^t/ds^t at s = 1.
  double derivative(std::size_t t) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  Jet truncated(std::size_t order) const;

 private:
  std::vector<double> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);

// Throws DomainError when a[0] == 0.
Jet reciprocal(const Jet& a);
Jet pow(const Jet& a, int n);
Jet log(const Jet& a);  // needs a[0] > 0
Jet exp(const Jet& a);

// sum_{i >= -m} c_i (s-1)^i, stored as the jet (s-1)^m * series.
class LaurentSeries {
 public:
  LaurentSeries(int pole_order, Jet regular) : pole_(pole_order), regular_(std::move(regular)) {}

  int pole_order() const { return pole_; }
  const Jet& regular_part() const { return regular_; }  // (s-1)^m times the series

  // Coefficient of (s-1)^i.
  double coefficient(int i) const;
  double residue() const { return coefficient(-1); }

 private:
  int pole_;
  Jet regular_;
};

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator*(const LaurentSeries& a, const Jet& b);

// Largest Stieltjes index available.
inline constexpr int kMaxStieltjesIndex = 12;

// gamma_0 .. gamma_{n_max}; computed once per process, then served from cache.
std::vector<double> stieltjes_constants(int n_max);

struct StieltjesEstimate {
  long double value;
  long double cutoff_gap;  // |gamma_n(M) - gamma_n(2M)|
};

// gamma_n from the defining limit with Euler-Maclaurin tail correction at
// cutoff M, certified against cutoff 2M.
StieltjesEstimate stieltjes_euler_maclaurin(int n, long long cutoff);

// Default number of guard coefficients carried beyond k.
inline constexpr std::size_t kJetGuard = 4;
inline std::size_t default_jet_order(int k) { return static_cast<std::size_t>(k) + kJetGuard; }

// zeta(s)^k around s = 1; coefficient(-r) is alpha_{k,r}.
LaurentSeries zeta_pow_laurent(int k, std::size_t order);

// alpha_{k,1..k} (index 0 unused).
std::vector<double> zeta_pow_principal_part(int k);

// Res(zeta(s)^k x^s / s G(s); s = 1).
double residue_main_term(int k, double x, const Jet& g);

}  // namespace divsum
