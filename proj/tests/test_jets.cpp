#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "divsum/errors.hpp"
#include "divsum/jets.hpp"

using namespace divsum;

namespace {

void check_jet(const Jet& got, std::vector<double> want, double tol = 1e-14) {
  REQUIRE(got.order() >= want.size());
  for (std::size_t i = 0; i < got.order(); ++i) {
    const double w = i < want.size() ? want[i] : 0.0;
    CHECK(std::abs(got[i] - w) <= tol);
  }
}

// Published values of the Stieltjes constants.
constexpr double kGammaRef[] = {0.5772156649015328606, -0.0728158454836767249, -0.0096903631928723185,
                                0.0020538344203033459, 0.0023253700654673000,  0.0007933238173010627,
                                -0.0002387693454301996, -0.0005272895670577510, -0.0003521233538030396};

// Euler's constant from the harmonic series: H_n - log n with the first
// asymptotic corrections, summed in long double.
long double gamma0_from_harmonic(long long n) {
  long double h = 0;
  for (long long i = n; i >= 1; --i) h += 1.0L / static_cast<long double>(i);
  const long double x = static_cast<long double>(n);
  return h - std::log(x) - 1 / (2 * x) + 1 / (12 * x * x) - 1 / (120 * x * x * x * x);
}

}  // namespace

TEST_CASE("jet arithmetic examples") {
  const Jet a{1.0, 1.0, 0.0, 0.0};
  const Jet b{1.0, -1.0, 0.0, 0.0};
  check_jet(a * b, {1, 0, -1, 0});
  check_jet(reciprocal(a), {1, -1, 1, -1});
  check_jet(pow(a, 2), {1, 2, 1, 0});
  check_jet(a + b, {2, 0, 0, 0});
  CHECK_THROWS_AS(reciprocal(Jet{0.0, 1.0}), DomainError);
}

TEST_CASE("mismatched orders are zero-padded") {
  const Jet a{1.0, 2.0};
  const Jet b{1.0, 0.0, 3.0};
  check_jet(a + b, {2, 2, 3});
  check_jet(a * b, {1, 2, 3});
}

TEST_CASE("derivatives are factorial-scaled coefficients") {
  const auto e = Jet::exp_linear(2.0, 3.0, 6);  // 2 e^{3(s-1)}
  for (std::size_t t = 0; t < 6; ++t) CHECK(e.derivative(t) == doctest::Approx(2.0 * std::pow(3.0, t)));
}

TEST_CASE("reciprocal is an involution on random jets") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    Jet a(8);
    for (std::size_t i = 0; i < 8; ++i) a[i] = u(rng);
    a[0] = 0.5 + std::abs(a[0]);
    const Jet back = reciprocal(reciprocal(a));
    for (std::size_t i = 0; i < 8; ++i) REQUIRE(std::abs(back[i] - a[i]) <= 1e-12 * (1 + std::abs(a[i])) * 100);
  }
}

TEST_CASE("log and exp invert each other") {
  Jet a{2.0, 0.3, -0.1, 0.05, 0.01};
  const Jet back = exp(log(a));
  for (std::size_t i = 0; i < a.order(); ++i) CHECK(back[i] == doctest::Approx(a[i]).epsilon(1e-13));
}

TEST_CASE("Stieltjes constants") {
  const auto g = stieltjes_constants(8);
  REQUIRE(g.size() == 9);
  for (int n = 0; n <= 8; ++n) CHECK(std::abs(g[static_cast<std::size_t>(n)] - kGammaRef[n]) <= 1e-10);
  CHECK(std::abs(g[0] - 0.5772156649) < 1e-10);
  CHECK(std::abs(g[1] - (-0.0728158454)) < 1e-10);
  CHECK(std::abs(static_cast<long double>(g[0]) - gamma0_from_harmonic(1'000'000)) <= 1e-10);
  for (int n = 0; n <= 8; ++n) CHECK(stieltjes_euler_maclaurin(n, 40).cutoff_gap <= 1e-11L);
  CHECK_THROWS_AS(stieltjes_constants(kMaxStieltjesIndex + 1), DomainError);
}

TEST_CASE("zeta power Laurent data") {
  const auto g = stieltjes_constants(4);
  for (int k = 1; k <= 8; ++k) {
    const auto alpha = zeta_pow_principal_part(k);
    CHECK(alpha[static_cast<std::size_t>(k)] == 1.0);
  }
  // (1 + g0 t + ...)^2 has t-coefficient 2 g0.
  CHECK(std::abs(zeta_pow_principal_part(2)[1] - 2 * g[0]) <= 1e-12);
  CHECK(std::abs(zeta_pow_laurent(1, 5).coefficient(0) - g[0]) <= 1e-15);
  CHECK(std::abs(zeta_pow_laurent(1, 5).coefficient(1) + g[1]) <= 1e-15);
  CHECK(zeta_pow_laurent(3, 7).pole_order() == 3);
}

TEST_CASE("alpha_{k,r} equals Res((s-1)^{r-1} zeta^k) and the k-fold Laurent product") {
  for (int k = 1; k <= 6; ++k) {
    const auto zk = zeta_pow_laurent(k, default_jet_order(k));
    const auto z1 = zeta_pow_laurent(1, default_jet_order(k));
    LaurentSeries product = z1;
    for (int i = 1; i < k; ++i) product = product * z1;
    for (int r = 1; r <= k; ++r) {
      // Multiplying by (s-1)^{r-1} lowers the pole order by r-1.
      const LaurentSeries shifted(k - (r - 1), zk.regular_part());
      CHECK(std::abs(shifted.residue() - zk.coefficient(-r)) <= 1e-12);
      CHECK(std::abs(product.coefficient(-r) - zk.coefficient(-r)) <= 1e-12);
    }
  }
}

TEST_CASE("residue main term") {
  const double g0 = stieltjes_constants(0)[0];
  const Jet one = Jet::constant(1.0, 6);
  for (double x : {1.0, 10.0, 100.0, 12345.0})
    CHECK(residue_main_term(2, x, one) == doctest::Approx(x * std::log(x) + (2 * g0 - 1) * x).epsilon(1e-13));
  CHECK(residue_main_term(2, 100.0, one) == doctest::Approx(475.96).epsilon(1e-4));
  CHECK(residue_main_term(2, 1.0, one) == doctest::Approx(0.15443).epsilon(1e-4));
  CHECK(residue_main_term(3, 50.0, Jet(6)) == 0.0);
  CHECK_THROWS_AS(residue_main_term(3, 10.0, Jet{1.0, 0.0}), DomainError);
}

TEST_CASE("residue main term is linear in G") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 2; k <= 5; ++k) {
    for (int trial = 0; trial < 20; ++trial) {
      Jet g1(default_jet_order(k)), g2(default_jet_order(k));
      for (std::size_t i = 0; i < g1.order(); ++i) {
        g1[i] = u(rng);
        g2[i] = u(rng);
      }
      const double x = 1 + 1000 * std::abs(u(rng));
      const double lhs = residue_main_term(k, x, g1 + g2);
      const double rhs = residue_main_term(k, x, g1) + residue_main_term(k, x, g2);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}
