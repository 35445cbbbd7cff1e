#include "divsum/local.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "divsum/arith.hpp"
#include "divsum/errors.hpp"
#include "divsum/format.hpp"
#include "divsum/parallel.hpp"

namespace divsum {

using arith::mod;

i64 ramanujan_sum(i64 q, i64 a) {
  if (q < 1) throw DomainError("local", "Ramanujan sum needs q >= 1");
  const i64 g = arith::gcd(mod(a, q), q);  // gcd(0, q) = q
  i64 sum = 0;
  for (i64 d : arith::divisors(g)) sum += arith::mobius(q / d) * d;
  return sum;
}

namespace {

// 1 - p^{-s}
Jet one_minus_p_pow(i64 p, std::size_t order) {
  return Jet::constant(1.0, order) - Jet::exp_linear(1.0 / static_cast<double>(p), -std::log(static_cast<double>(p)), order);
}

void enumerate_factorizations(i64 remaining, int slot, std::vector<i64>& d,
                              const std::vector<i64>& primes, std::map<std::vector<int>, i64>& histogram) {
  const int k = static_cast<int>(d.size());
  if (slot == k - 1) {
    d[static_cast<std::size_t>(slot)] = remaining;
    // n_p = #{i in 1..k-1 : p | d_{i+1} ... d_k}
    std::vector<int> counts(primes.size(), 0);
    i64 suffix = 1;
    for (int i = k - 1; i >= 1; --i) {
      suffix *= d[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < primes.size(); ++j)
        if (suffix % primes[j] == 0) ++counts[j];
    }
    ++histogram[counts];
    return;
  }
  for (i64 div : arith::divisors(remaining)) {
    d[static_cast<std::size_t>(slot)] = div;
    enumerate_factorizations(remaining / div, slot + 1, d, primes, histogram);
  }
}

}  // namespace

Jet f_k_jet(i64 q, i64 delta, int k, std::size_t order) {
  if (q < 1 || delta < 1 || q % delta != 0) throw DomainError("local", "f_k needs delta | q");
  if (k < 1) throw DomainError("local", "f_k needs k >= 1");
  const i64 rest = q / delta;
  Jet prefactor = Jet::exp_linear(1.0 / static_cast<double>(delta), -std::log(static_cast<double>(delta)), order);
  prefactor *= 1.0 / static_cast<double>(arith::euler_phi(rest));
  for (auto [p, e] : arith::factorize(rest)) prefactor = prefactor * pow(one_minus_p_pow(p, order), k);

  // Only primes of delta coprime to q/delta carry (1 - p^{-s}) factors.
  std::vector<i64> primes;
  for (auto [p, e] : arith::factorize(delta))
    if (rest % p != 0) primes.push_back(p);

  std::map<std::vector<int>, i64> histogram;
  std::vector<i64> d(static_cast<std::size_t>(k));
  enumerate_factorizations(delta, 0, d, primes, histogram);

  std::vector<Jet> factor;
  for (i64 p : primes) factor.push_back(one_minus_p_pow(p, order));
  Jet sum(order);
  for (const auto& [counts, mult] : histogram) {
    Jet term = Jet::constant(static_cast<double>(mult), order);
    for (std::size_t j = 0; j < primes.size(); ++j) term = term * pow(factor[j], counts[j]);
    sum += term;
  }
  return prefactor * sum;
}

Jet F_k_jet_oracle(i64 q, int k, std::size_t order) {
  if (q < 1) throw DomainError("local", "F_k needs q >= 1");
  Jet sum(order);
  for (i64 delta : arith::divisors(q)) {
    const int mu = arith::mobius(q / delta);
    if (mu == 0) continue;
    sum += static_cast<double>(mu) * f_k_jet(q, delta, k, order);
  }
  return sum;
}

Jet F_k_prime_power_jet(i64 p, int m, int k, std::size_t order) {
  if (m == 0) return Jet::constant(1.0, order);
  const double pd = static_cast<double>(p);
  const double lp = std::log(pd);
  const Jet u = one_minus_p_pow(p, order);
  Jet bracket(order);
  Jet u_pow = Jet::constant(1.0, order);  // u^{v-1}
  for (int v = 1; v <= k - 1; ++v) {
    bracket += static_cast<double>(arith::tau_k_prime_power(v, m - 1)) * u_pow;
    u_pow = u_pow * u;
  }
  // (p - p^s) / (p - 1), vanishing at s = 1
  const Jet tail_ratio = (Jet::constant(pd, order) - Jet::exp_linear(pd, lp, order)) * (1.0 / (pd - 1.0));
  bracket += static_cast<double>(arith::tau_k_prime_power(k, m - 1)) * (u_pow * tail_ratio);
  return Jet::exp_linear(std::pow(pd, -m), -m * lp, order) * bracket;
}

Jet F_k_jet(i64 q, int k, std::size_t order) {
  if (q < 1) throw DomainError("local", "F_k needs q >= 1");
  Jet result = Jet::constant(1.0, order);
  for (auto [p, e] : arith::factorize(q)) result = result * F_k_prime_power_jet(p, e, k, order);
  return result;
}

void validate_F_k_closed_form(int k, std::size_t order, i64 max_q) {
  static std::mutex mu;
  static std::set<std::tuple<int, std::size_t, i64>> done;
  {
    std::lock_guard lock(mu);
    if (done.count({k, order, max_q})) return;
  }
  for (i64 p : arith::primes_up_to(max_q)) {
    i64 pm = p;
    for (int m = 1; pm <= max_q; ++m, pm *= p) {
      const Jet closed = F_k_prime_power_jet(p, m, k, order);
      const Jet oracle = F_k_jet_oracle(pm, k, order);
      for (std::size_t j = 0; j < order; ++j) {
        if (std::abs(closed[j] - oracle[j]) > 1e-10) {
          std::ostringstream os;
          os << "closed form for F_" << k << "(" << p << "^" << m << ") disagrees with the divisor-sum definition at coefficient "
             << j << ": " << closed[j] << " vs " << oracle[j];
          throw ConsistencyError("local", os.str());
        }
      }
    }
  }
  std::lock_guard lock(mu);
  done.insert({k, order, max_q});
}

namespace {

void check_budget(double points, double budget, const std::string& what) {
  if (points > budget)
    throw ResourceError("local", what + " needs " + format_double(points) + " lattice points, budget " +
                                     format_double(budget));
}

}  // namespace

ValueDistribution value_distribution(const QuadraticPolynomial& f, i64 q, double budget) {
  if (q < 1) throw DomainError("local", "modulus must be >= 1");
  const int n = f.ell();
  check_budget(std::pow(static_cast<double>(q), n), budget, "value distribution mod " + std::to_string(q));
  const i64 two_a = mod(2 * f.a(n - 1, n - 1), q);
  const i64 step_base = mod(f.a(n - 1, n - 1) + f.b()[static_cast<std::size_t>(n - 1)], q);

  const std::size_t chunks = n == 1 ? 1 : static_cast<std::size_t>(q);
  auto partial = parallel_chunks(chunks, [&](std::size_t chunk) {
    std::vector<i64> counts(static_cast<std::size_t>(q), 0);
    std::vector<i64> h(static_cast<std::size_t>(n), 0);
    if (n > 1) h[0] = static_cast<i64>(chunk);
    for (;;) {
      h[static_cast<std::size_t>(n - 1)] = 0;
      i64 v = mod(static_cast<i64>(evaluate(f, h) % q), q);
      i64 d = step_base;
      for (int j = 0; j < n - 1; ++j) d = mod(d + mod(f.sym(n - 1, j), q) * h[static_cast<std::size_t>(j)], q);
      for (i64 z = 0; z < q; ++z) {
        ++counts[static_cast<std::size_t>(v)];
        v += d;
        if (v >= q) v -= q;
        d += two_a;
        if (d >= q) d -= q;
      }
      int i = n - 2;
      while (i >= 1 && h[static_cast<std::size_t>(i)] == q - 1) h[static_cast<std::size_t>(i--)] = 0;
      if (i < 1) break;
      ++h[static_cast<std::size_t>(i)];
    }
    return counts;
  });
  std::vector<i64> counts(static_cast<std::size_t>(q), 0);
  for (const auto& c : partial)
    for (std::size_t v = 0; v < c.size(); ++v) counts[v] += c[v];
  return ValueDistribution(q, std::move(counts));
}

cplx char_sum(const ValueDistribution& dist, i64 a) {
  const i64 q = dist.modulus();
  cplx sum = 0;
  for (i64 v = 0; v < q; ++v) {
    const i64 c = dist[v];
    if (c == 0) continue;
    const double angle = 2 * std::numbers::pi * static_cast<double>(mod(a % q * v, q)) / static_cast<double>(q);
    sum += static_cast<double>(c) * cplx(std::cos(angle), std::sin(angle));
  }
  return sum;
}

cplx char_sum(const QuadraticPolynomial& f, i64 q, i64 a, double budget) {
  if (arith::gcd(mod(a, q), q) != 1) throw DomainError("local", "char_sum needs gcd(a, q) = 1");
  return char_sum(value_distribution(f, q, budget), a);
}

namespace {

// Fibers of the last coordinate: F(h', z) = A z^2 + B(h') z + C(h'), so
// rho(n) = sum_{h'} #{z : A z^2 + B z == -C}. The counts for every B are
// tabulated once, leaving n^{ell-1} lookups.
constexpr i64 kFiberTableMaxModulus = 4096;

i64 rho_fibered(const QuadraticPolynomial& f, i64 q) {
  const int n = f.ell();
  const i64 big_a = mod(f.a(n - 1, n - 1), q);
  std::vector<std::uint16_t> table(static_cast<std::size_t>(q * q), 0);
  for (i64 b = 0; b < q; ++b) {
    std::uint16_t* row = table.data() + b * q;
    i64 v = 0;                 // A z^2 + B z at z = 0
    i64 d = mod(big_a + b, q);  // increment to z = 1
    const i64 two_a = mod(2 * big_a, q);
    for (i64 z = 0; z < q; ++z) {
      ++row[v];
      v += d;
      if (v >= q) v -= q;
      d += two_a;
      if (d >= q) d -= q;
    }
  }
  // h' = (h_0 .. h_{n-2}); innermost coordinate is h_{n-2}.
  const int inner = n - 2;
  const i64 b_step = mod(f.sym(n - 1, inner), q);
  const i64 c_two_a = mod(2 * f.a(inner, inner), q);
  const std::size_t chunks = n >= 3 ? static_cast<std::size_t>(q) : 1;
  auto partial = parallel_chunks(chunks, [&](std::size_t chunk) -> i64 {
    std::vector<i64> h(static_cast<std::size_t>(n), 0);
    if (n >= 3) h[0] = static_cast<i64>(chunk);
    i64 count = 0;
    for (;;) {
      h[static_cast<std::size_t>(inner)] = 0;
      h[static_cast<std::size_t>(n - 1)] = 0;
      i64 c = mod(static_cast<i64>(evaluate(f, h) % q), q);
      i64 b = mod(f.b()[static_cast<std::size_t>(n - 1)], q);
      i64 dc = mod(f.a(inner, inner) + f.b()[static_cast<std::size_t>(inner)], q);
      for (int j = 0; j < inner; ++j) {
        b = mod(b + mod(f.sym(n - 1, j), q) * h[static_cast<std::size_t>(j)], q);
        dc = mod(dc + mod(f.sym(inner, j), q) * h[static_cast<std::size_t>(j)], q);
      }
      for (i64 z = 0; z < q; ++z) {
        count += table[static_cast<std::size_t>(b * q + (c == 0 ? 0 : q - c))];
        c += dc;
        if (c >= q) c -= q;
        dc += c_two_a;
        if (dc >= q) dc -= q;
        b += b_step;
        if (b >= q) b -= q;
      }
      int i = inner - 1;
      while (i >= 1 && h[static_cast<std::size_t>(i)] == q - 1) h[static_cast<std::size_t>(i--)] = 0;
      if (i < 1) break;
      ++h[static_cast<std::size_t>(i)];
    }
    return count;
  });
  i64 total = 0;
  for (i64 c : partial) total += c;
  return total;
}

bool fibered_feasible(const QuadraticPolynomial& f, i64 n, double budget) {
  return f.ell() >= 2 && n <= kFiberTableMaxModulus && std::pow(static_cast<double>(n), f.ell() - 1) <= budget;
}

}  // namespace

bool rho_F_feasible(const QuadraticPolynomial& f, i64 n, double budget) {
  return n == 1 || fibered_feasible(f, n, budget) || std::pow(static_cast<double>(n), f.ell()) <= budget;
}

i64 rho_F(const QuadraticPolynomial& f, i64 n, double budget) {
  if (n < 1) throw DomainError("local", "rho_F needs n >= 1");
  if (n == 1) return 1;
  if (fibered_feasible(f, n, budget)) return rho_fibered(f, n);
  return value_distribution(f, n, budget)[0];
}

double S_F_prime_power(const QuadraticPolynomial& f, i64 p, int m, double budget) {
  if (m < 0) throw DomainError("local", "prime-power exponent must be >= 0");
  if (m == 0) return 1.0;
  const int e = f.ell() - 1;
  const double pd = static_cast<double>(p);
  const double hi = static_cast<double>(rho_F(f, arith::ipow(p, m), budget)) / std::pow(pd, e * m);
  const double lo = static_cast<double>(rho_F(f, arith::ipow(p, m - 1), budget)) / std::pow(pd, e * (m - 1));
  return hi - lo;
}

cplx S_F_direct(const QuadraticPolynomial& f, i64 q, double budget) {
  if (q < 1) throw DomainError("local", "S_F needs q >= 1");
  const auto dist = value_distribution(f, q, budget);
  std::vector<cplx> roots(static_cast<std::size_t>(q));
  for (i64 j = 0; j < q; ++j) {
    const double angle = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(q);
    roots[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
  }
  cplx sum = 0;
  for (i64 a = 0; a < q; ++a) {
    if (arith::gcd(a, q) != 1) continue;
    for (i64 v = 0; v < q; ++v) {
      const i64 c = dist[v];
      if (c != 0) sum += static_cast<double>(c) * roots[static_cast<std::size_t>(a * v % q)];
    }
  }
  return sum / std::pow(static_cast<double>(q), f.ell());
}

double S_F_divisor_sum(const QuadraticPolynomial& f, i64 q, double budget) {
  if (q < 1) throw DomainError("local", "S_F needs q >= 1");
  double sum = 0;
  for (i64 d : arith::divisors(q)) {
    const int mu = arith::mobius(q / d);
    if (mu == 0) continue;
    sum += mu * static_cast<double>(rho_F(f, d, budget)) / std::pow(static_cast<double>(d), f.ell() - 1);
  }
  return sum;
}

double S_F_normalized(const QuadraticPolynomial& f, i64 q, double budget) {
  if (q < 1) throw DomainError("local", "S_F needs q >= 1");
  if (q == 1) return 1.0;
  const auto fac = arith::factorize(q);
  if (fac.size() == 1) return S_F_prime_power(f, fac[0].first, fac[0].second, budget);
  const double via_rho = S_F_divisor_sum(f, q, budget);
  if (std::pow(static_cast<double>(q), f.ell()) > budget) return via_rho;
  const cplx direct = S_F_direct(f, q, budget);
  if (std::abs(direct.imag()) > 1e-10)
    throw ConsistencyError("local", "S_F(" + std::to_string(q) + ") has imaginary part " + format_double(direct.imag()));
  if (std::abs(direct.real() - via_rho) > 1e-10)
    throw ConsistencyError("local", "S_F(" + std::to_string(q) + "): a-sum " + format_double(direct.real()) +
                                        " vs local-density sum " + format_double(via_rho));
  return direct.real();
}

LocalFactorTable local_factor_table(const QuadraticPolynomial& f, int k, i64 p, int depth, std::size_t order,
                                    double budget) {
  LocalFactorTable t;
  t.p = p;
  t.k = k;
  t.depth = depth;
  const int e = f.ell() - 1;
  const double pd = static_cast<double>(p);
  i64 pm = 1;
  for (int m = 0; m <= depth; ++m) {
    t.rho.push_back(rho_F(f, pm, budget));
    if (m == 0) {
      t.s_local.push_back(1.0);
    } else {
      t.s_local.push_back(static_cast<double>(t.rho[static_cast<std::size_t>(m)]) / std::pow(pd, e * m) -
                          static_cast<double>(t.rho[static_cast<std::size_t>(m - 1)]) / std::pow(pd, e * (m - 1)));
    }
    t.fk_jets.push_back(F_k_prime_power_jet(p, m, k, order));
    pm *= p;
  }
  return t;
}

std::string local_factor_csv_rows(const LocalFactorTable& t) {
  std::string out;
  for (int m = 1; m <= t.depth; ++m) {
    const auto i = static_cast<std::size_t>(m);
    out += std::to_string(t.p) + "," + std::to_string(m) + "," + std::to_string(t.rho[i]) + "," +
           format_double(t.s_local[i]) + "," + format_double(t.fk_jets[i][0]) + "\n";
  }
  return out;
}

}  // namespace divsum
