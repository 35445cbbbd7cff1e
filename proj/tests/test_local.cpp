#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "divsum/arith.hpp"
#include "divsum/errors.hpp"
#include "divsum/format.hpp"
#include "divsum/local.hpp"
#include "fixtures.hpp"

using namespace divsum;

namespace {

cplx e(double x) { return {std::cos(2 * std::numbers::pi * x), std::sin(2 * std::numbers::pi * x)}; }

cplx ramanujan_direct(i64 q, i64 a) {
  cplx s = 0;
  for (i64 h = 1; h <= q; ++h)
    if (arith::gcd(h, q) == 1) s += e(static_cast<double>(a * h % q) / static_cast<double>(q));
  return s;
}

// Brute-force S_F(q, a) straight from the definition.
cplx char_sum_brute(const QuadraticPolynomial& f, i64 q, i64 a) {
  cplx s = 0;
  std::vector<i64> h(static_cast<std::size_t>(f.ell()), 0);
  for (;;) {
    const i64 v = arith::mod(static_cast<i64>(evaluate(f, h) % q), q);
    s += e(static_cast<double>(a * v % q) / static_cast<double>(q));
    int i = 0;
    while (i < f.ell() && h[static_cast<std::size_t>(i)] == q - 1) h[static_cast<std::size_t>(i++)] = 0;
    if (i == f.ell()) break;
    ++h[static_cast<std::size_t>(i)];
  }
  return s;
}

// The closed form for F_k(p^m, s) as printed with the factor (p^s - 1)/(p - 1).
// It contradicts the divisor-sum definition; kept here as a regression subject.
double F_k_printed_at_one(i64 p, int m, int k) {
  const double pd = static_cast<double>(p);
  double bracket = 0;
  for (int v = 1; v <= k - 1; ++v)
    bracket += std::pow(1 - 1 / pd, v - 1) * static_cast<double>(arith::tau_k_prime_power(v, m - 1));
  bracket += std::pow(1 - 1 / pd, k - 1) * static_cast<double>(arith::tau_k_prime_power(k, m - 1)) * (pd - 1) / (pd - 1);
  return std::pow(pd, -m) * bracket;
}

// Direct scalar evaluation of the corrected closed form at real s.
double F_k_closed_scalar(i64 p, int m, int k, double s) {
  const double pd = static_cast<double>(p);
  const double u = 1 - std::pow(pd, -s);
  double bracket = 0;
  for (int v = 1; v <= k - 1; ++v) bracket += std::pow(u, v - 1) * static_cast<double>(arith::tau_k_prime_power(v, m - 1));
  bracket += std::pow(u, k - 1) * static_cast<double>(arith::tau_k_prime_power(k, m - 1)) * (pd - std::pow(pd, s)) / (pd - 1);
  return std::pow(pd, -m * s) * bracket;
}

void check_same(const Jet& a, const Jet& b, double tol) {
  REQUIRE(a.order() == b.order());
  for (std::size_t i = 0; i < a.order(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
}

}  // namespace

TEST_CASE("Ramanujan sums") {
  CHECK(ramanujan_sum(6, 1) == 1);
  CHECK(ramanujan_sum(4, 2) == -2);
  CHECK(ramanujan_sum(1, 5) == 1);
  for (i64 q = 1; q <= 40; ++q)
    for (i64 a = -3; a <= 45; ++a) {
      const cplx d = ramanujan_direct(q, arith::mod(a, q));
      REQUIRE(std::abs(d.real() - static_cast<double>(ramanujan_sum(q, a))) < 1e-9);
      REQUIRE(std::abs(d.imag()) < 1e-9);
      if (arith::gcd(arith::mod(a, q), q) == 1) REQUIRE(ramanujan_sum(q, a) == arith::mobius(q));
    }
}

TEST_CASE("f_k values") {
  CHECK(f_k_jet(2, 2, 2, 5)[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(f_k_jet(2, 1, 2, 5)[0] == doctest::Approx(0.25).epsilon(1e-15));
  for (int k = 1; k <= 5; ++k) check_same(f_k_jet(1, 1, k, 6), Jet::constant(1.0, 6), 0);
  // 2^{-s}(2 - 2^{-s}) expanded at s = 1: derivative is -ln2/2 * 2 + 2 * ln2/4 = -ln2/2
  CHECK(f_k_jet(2, 2, 2, 5)[1] == doctest::Approx(-std::log(2.0) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(f_k_jet(6, 4, 2, 5), DomainError);
}

TEST_CASE("F_k oracle values") {
  check_same(F_k_jet_oracle(1, 3, 5), Jet::constant(1.0, 5), 0);
  CHECK(F_k_jet_oracle(2, 2, 5)[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(F_k_jet_oracle(3, 2, 5)[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(F_k_jet(6, 2, 5)[0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(F_k_jet_oracle(6, 2, 5)[0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("printed closed form regression: F_2(2, 1) is 1/2, not 3/4") {
  CHECK(F_k_printed_at_one(2, 1, 2) == doctest::Approx(0.75));
  CHECK(F_k_jet_oracle(2, 2, 5)[0] == doctest::Approx(0.5));
  CHECK(F_k_prime_power_jet(2, 1, 2, 5)[0] == doctest::Approx(0.5));
}

TEST_CASE("corrected closed form agrees with the oracle") {
  for (int k = 1; k <= 5; ++k) CHECK_NOTHROW(validate_F_k_closed_form(k, default_jet_order(k), 128));
  for (int k = 2; k <= 5; ++k)
    for (i64 p : {2, 3, 5, 7})
      for (int m = 1; m <= 4; ++m) {
        double want = 0;
        for (int v = 1; v <= k - 1; ++v)
          want += std::pow(1 - 1.0 / p, v - 1) * static_cast<double>(arith::tau_k_prime_power(v, m - 1));
        want /= std::pow(static_cast<double>(p), m);
        CHECK(F_k_prime_power_jet(p, m, k, 6)[0] == doctest::Approx(want).epsilon(1e-14));
      }
}

TEST_CASE("closed-form jets match finite differences of the scalar formula") {
  const double h = 1e-4;
  for (int k = 2; k <= 4; ++k)
    for (i64 p : {2, 3, 5, 11})
      for (int m = 1; m <= 3; ++m) {
        const Jet j = F_k_prime_power_jet(p, m, k, 6);
        const double fp = F_k_closed_scalar(p, m, k, 1 + h), f0 = F_k_closed_scalar(p, m, k, 1),
                     fm = F_k_closed_scalar(p, m, k, 1 - h);
        const double d1 = (fp - fm) / (2 * h);
        const double d2 = (fp - 2 * f0 + fm) / (h * h);
        CHECK(j.derivative(1) == doctest::Approx(d1).epsilon(1e-5));
        CHECK(j.derivative(2) == doctest::Approx(d2).epsilon(1e-5));
      }
}

TEST_CASE("completeness identity: sum over h of f_k(q, (h,q), s) is 1") {
  for (int k : {2, 3, 4})
    for (i64 q = 1; q <= 50; ++q) {
      Jet sum(5);
      for (i64 h = 1; h <= q; ++h) sum += f_k_jet(q, arith::gcd(h, q), k, 5);
      for (std::size_t i = 0; i < 5; ++i) REQUIRE(std::abs(sum[i] - (i == 0 ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("F_{k,a}(q, 1) is independent of a and equals F_k(q, 1)") {
  for (int k : {2, 3})
    for (i64 q = 1; q <= 30; ++q) {
      std::vector<double> f(static_cast<std::size_t>(q));
      for (i64 h = 0; h < q; ++h) f[static_cast<std::size_t>(h)] = f_k_jet(q, arith::gcd(h, q), k, 2)[0];
      const double reference = F_k_jet(q, k, 2)[0];
      for (i64 a = 1; a <= q; ++a) {
        if (arith::gcd(a, q) != 1) continue;
        cplx s = 0;
        for (i64 h = 0; h < q; ++h) s += e(-static_cast<double>(a * h % q) / static_cast<double>(q)) * f[static_cast<std::size_t>(h)];
        REQUIRE(std::abs(s.real() - reference) <= 1e-12);
        REQUIRE(std::abs(s.imag()) <= 1e-12);
      }
    }
}

TEST_CASE("multiplicativity of F_k against the oracle") {
  for (int k : {2, 3})
    for (i64 q1 = 2; q1 <= 30; ++q1)
      for (i64 q2 = q1 + 1; q2 <= 30; ++q2) {
        if (arith::gcd(q1, q2) != 1) continue;
        const Jet lhs = F_k_jet_oracle(q1 * q2, k, 5);
        const Jet rhs = F_k_jet_oracle(q1, k, 5) * F_k_jet_oracle(q2, k, 5);
        for (std::size_t i = 0; i < 5; ++i) REQUIRE(std::abs(lhs[i] - rhs[i]) <= 1e-12);
      }
}

TEST_CASE("decay of F_k(q, 1)") {
  // Trend monitor: max_{q <= 500} q^{0.9} |F_k(q,1)|, frozen from the first run.
  const double frozen[] = {0, 0, 1.0, 6.090762057614169, 20.142566247633404};
  for (int k : {2, 3, 4}) {
    double worst = 0;
    for (i64 q = 1; q <= 500; ++q) worst = std::max(worst, std::pow(static_cast<double>(q), 0.9) * std::abs(F_k_jet(q, k, 2)[0]));
    MESSAGE("k=" << k << " max q^0.9 |F_k(q,1)| = " << format_double(worst));
    CHECK(worst <= frozen[k] * (1 + 1e-9));
  }
}

TEST_CASE("char_sum examples") {
  const auto q3 = fixtures::q3();
  CHECK(std::abs(char_sum(q3, 1, 0) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(char_sum(q3, 2, 1)) < 1e-12);
  const cplx s31 = char_sum(q3, 3, 1);
  CHECK(std::abs(s31 - cplx(0, -3 * std::sqrt(3.0))) < 1e-12);
  CHECK(std::abs(s31) == doctest::Approx(std::pow(3.0, 1.5)).epsilon(1e-12));
  CHECK_THROWS_AS(char_sum(q3, 6, 2), DomainError);
  CHECK_THROWS_AS(char_sum(q3, 1000, 1, 1e6), ResourceError);
}

TEST_CASE("char_sum matches brute force and conjugation symmetry") {
  for (const auto& f : {fixtures::q3(), fixtures::w3(), fixtures::mixed3(), fixtures::q3_shifted()})
    for (i64 q = 2; q <= 12; ++q) {
      const auto dist = value_distribution(f, q);
      for (i64 a = 1; a < q; ++a) {
        if (arith::gcd(a, q) != 1) continue;
        const cplx s = char_sum(dist, a);
        REQUIRE(std::abs(s - char_sum_brute(f, q, a)) < 1e-9);
        REQUIRE(std::abs(char_sum(dist, q - a) - std::conj(s)) < 1e-12);
      }
    }
}

TEST_CASE("rho_F") {
  CHECK(rho_F(fixtures::q3(), 1) == 1);
  CHECK(rho_F(fixtures::q3(), 2) == 4);
  CHECK(rho_F(fixtures::w3(), 2) == 4);
  CHECK(rho_F(fixtures::q3(), 3) == 9);
}

TEST_CASE("fibered rho_F equals the full value distribution") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> coef(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<i64> q(static_cast<std::size_t>(n * n)), b(static_cast<std::size_t>(n));
    for (auto& v : q) v = coef(rng);
    for (auto& v : b) v = coef(rng);
    QuadraticPolynomial f(n, q, b, coef(rng));
    for (i64 m : {2, 3, 4, 6, 8, 9, 10, 25}) REQUIRE(rho_F(f, m) == value_distribution(f, m)[0]);
  }
}

TEST_CASE("S_F_normalized") {
  const auto q3 = fixtures::q3();
  CHECK(S_F_normalized(q3, 1) == 1.0);
  CHECK(std::abs(S_F_normalized(q3, 2)) < 1e-15);
  CHECK(std::abs(S_F_normalized(q3, 3)) < 1e-15);
  CHECK(std::abs(S_F_direct(q3, 2)) < 1e-12);
  for (const auto& f : {fixtures::q3(), fixtures::w3(), fixtures::mixed3()})
    for (i64 q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 27}) {
      const cplx direct = S_F_direct(f, q);
      CHECK(std::abs(direct.imag()) < 1e-10);
      CHECK(std::abs(direct.real() - S_F_normalized(f, q)) < 1e-10);
      CHECK(std::abs(S_F_divisor_sum(f, q) - S_F_normalized(f, q)) < 1e-12);
    }
}

TEST_CASE("multiplicativity of S_F") {
  for (const auto& f : {fixtures::q3(), fixtures::w3()})
    for (i64 q1 = 2; q1 <= 30; ++q1)
      for (i64 q2 = q1 + 1; q2 <= 30; ++q2) {
        if (arith::gcd(q1, q2) != 1) continue;
        const double lhs = S_F_normalized(f, q1 * q2);
        const double rhs = S_F_normalized(f, q1) * S_F_normalized(f, q2);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12);
      }
}

TEST_CASE("local factor table and CSV rows") {
  const auto t = local_factor_table(fixtures::q3(), 2, 2, 3, 6);
  REQUIRE(t.rho.size() == 4);
  CHECK(t.rho[0] == 1);
  CHECK(t.rho[1] == 4);
  for (int m = 1; m <= 3; ++m) {
    const auto i = static_cast<std::size_t>(m);
    CHECK(t.s_local[i] == doctest::Approx(S_F_prime_power(fixtures::q3(), 2, m)));
    CHECK(t.s_local[i] == doctest::Approx(std::ldexp(static_cast<double>(t.rho[i]), -2 * m) -
                                          std::ldexp(static_cast<double>(t.rho[i - 1]), -2 * (m - 1))));
  }
  const std::string rows = local_factor_csv_rows(t);
  CHECK(rows.rfind("2,1,4,0,0.5\n", 0) == 0);
}
