#include "divsum/quadpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divsum/errors.hpp"

namespace divsum {

QuadraticPolynomial::QuadraticPolynomial(int ell, std::vector<i64> q_row_major, std::vector<i64> b,
                                         i64 c)
    : ell_(ell), q_(std::move(q_row_major)), b_(std::move(b)), c_(c) {
  if (ell_ < 1) throw DomainError("quadpoly", "dimension must be >= 1");
  if (q_.size() != static_cast<std::size_t>(ell_ * ell_))
    throw DomainError("quadpoly", "Q must have ell*ell entries");
  if (b_.size() != static_cast<std::size_t>(ell_))
    throw DomainError("quadpoly", "b must have ell entries");
}

i128 evaluate(const QuadraticPolynomial& f, std::span<const i64> x) {
  const int n = f.ell();
  if (x.size() != static_cast<std::size_t>(n))
    throw DomainError("quadpoly", "point dimension does not match polynomial");
  i128 acc = f.c();
  for (int i = 0; i < n; ++i) {
    i128 row = f.b()[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) row += static_cast<i128>(f.a(i, j)) * x[static_cast<std::size_t>(j)];
    acc += row * x[static_cast<std::size_t>(i)];
  }
  return acc;
}

i128 sieve_bound(const QuadraticPolynomial& f, i64 x_max) {
  i128 sa = 0, sb = 0;
  for (i64 v : f.q()) sa += v < 0 ? -v : v;
  for (i64 v : f.b()) sb += v < 0 ? -v : v;
  const i128 x = x_max;
  return sa * x * x + sb * x + (f.c() < 0 ? -static_cast<i128>(f.c()) : f.c());
}

i128 corner_value(const QuadraticPolynomial& f, i64 x_max) {
  i128 sa = 0, sb = 0;
  for (i64 v : f.q()) sa += v;
  for (i64 v : f.b()) sb += v;
  const i128 x = x_max;
  return sa * x * x + sb * x + f.c();
}

i128 symmetric_determinant(const QuadraticPolynomial& f) {
  const int n = f.ell();
  std::vector<i128> m(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i * n + j)] = f.sym(i, j);
  auto at = [&](int i, int j) -> i128& { return m[static_cast<std::size_t>(i * n + j)]; };
  // Bareiss: every intermediate is an exact minor.
  i128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (at(r, k) != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

double continuous_box_minimum(const QuadraticPolynomial& f, double lo, double hi) {
  const int n = f.ell();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 free, 1 at lo, 2 at hi
  std::vector<double> t(static_cast<std::size_t>(n));
  auto value = [&](const std::vector<double>& p) {
    double acc = static_cast<double>(f.c());
    for (int i = 0; i < n; ++i) {
      double row = static_cast<double>(f.b()[static_cast<std::size_t>(i)]);
      for (int j = 0; j < n; ++j) row += static_cast<double>(f.a(i, j)) * p[static_cast<std::size_t>(j)];
      acc += row * p[static_cast<std::size_t>(i)];
    }
    return acc;
  };
  for (;;) {
    std::vector<int> free;
    for (int i = 0; i < n; ++i) {
      auto& ti = t[static_cast<std::size_t>(i)];
      if (state[static_cast<std::size_t>(i)] == 0)
        free.push_back(i);
      else
        ti = state[static_cast<std::size_t>(i)] == 1 ? lo : hi;
    }
    bool ok = true;
    if (!free.empty()) {
      // Stationarity on the face: sum_j (Q+Q^t)_ij t_j + b_i = 0 for free i.
      const std::size_t m = free.size();
      std::vector<double> a(m * (m + 1));
      for (std::size_t r = 0; r < m; ++r) {
        const int i = free[r];
        double rhs = -static_cast<double>(f.b()[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n; ++j)
          if (state[static_cast<std::size_t>(j)] != 0) rhs -= static_cast<double>(f.sym(i, j)) * t[static_cast<std::size_t>(j)];
        for (std::size_t cidx = 0; cidx < m; ++cidx) a[r * (m + 1) + cidx] = static_cast<double>(f.sym(i, free[cidx]));
        a[r * (m + 1) + m] = rhs;
      }
      for (std::size_t col = 0; col < m && ok; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
          if (std::abs(a[r * (m + 1) + col]) > std::abs(a[piv * (m + 1) + col])) piv = r;
        if (std::abs(a[piv * (m + 1) + col]) < 1e-12) {
          ok = false;  // degenerate face: its minimum is also attained on a sub-face
          break;
        }
        for (std::size_t cidx = 0; cidx <= m; ++cidx) std::swap(a[col * (m + 1) + cidx], a[piv * (m + 1) + cidx]);
        for (std::size_t r = 0; r < m; ++r) {
          if (r == col) continue;
          const double factor = a[r * (m + 1) + col] / a[col * (m + 1) + col];
          for (std::size_t cidx = col; cidx <= m; ++cidx) a[r * (m + 1) + cidx] -= factor * a[col * (m + 1) + cidx];
        }
      }
      if (ok) {
        for (std::size_t r = 0; r < m; ++r) {
          const double v = a[r * (m + 1) + m] / a[r * (m + 1) + r];
          if (v < lo || v > hi) ok = false;
          t[static_cast<std::size_t>(free[r])] = v;
        }
      }
    }
    if (ok) best = std::min(best, value(t));
    int i = 0;
    while (i < n && state[static_cast<std::size_t>(i)] == 2) state[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
    ++state[static_cast<std::size_t>(i)];
  }
  return best;
}

ValidationVerdict validate(const QuadraticPolynomial& f, i64 x_max) {
  ValidationVerdict v;
  const int n = f.ell();
  v.delta = symmetric_determinant(f);
  v.nonsingular = v.delta != 0;
  if (!v.nonsingular) v.violations.push_back("det(Q + Q^t) = 0");
  v.dimension_ok = n >= 3;
  if (!v.dimension_ok) v.violations.push_back("dimension " + std::to_string(n) + " < 3");
  if (x_max < 1) {
    v.violations.push_back("box size X must be >= 1");
    return v;
  }

  if (std::pow(static_cast<double>(x_max), n) <= kExhaustiveScanBudget) {
    v.exhaustive = true;
    std::vector<i64> x(static_cast<std::size_t>(n), 1);
    i128 best = evaluate(f, x);
    for (;;) {
      best = std::min(best, evaluate(f, x));
      int i = 0;
      while (i < n && x[static_cast<std::size_t>(i)] == x_max) x[static_cast<std::size_t>(i++)] = 1;
      if (i == n) break;
      ++x[static_cast<std::size_t>(i)];
    }
    v.min_value = static_cast<double>(best);
    v.positive = best >= 1;
  } else {
    v.min_value = continuous_box_minimum(f, 1.0, static_cast<double>(x_max));
    // Conservative: a continuous minimum within rounding of zero is a failure.
    const double slack = 1e-12 * static_cast<double>(sieve_bound(f, x_max));
    v.positive = v.min_value > slack;
  }
  if (!v.positive)
    v.violations.push_back("F is not positive on [1," + std::to_string(x_max) + "]^" +
                           std::to_string(n) + " (minimum " + std::to_string(v.min_value) + ")");
  return v;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace divsum
