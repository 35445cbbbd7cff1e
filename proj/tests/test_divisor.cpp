#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "divsum/arith.hpp"
#include "divsum/divisor.hpp"
#include "divsum/errors.hpp"
#include "divsum/parallel.hpp"
#include "fixtures.hpp"

using namespace divsum;

TEST_CASE("sieve_tau_k examples") {
  CHECK(sieve_tau_k(2, 12)[12] == 6);
  CHECK(sieve_tau_k(3, 4)[4] == 6);
  CHECK(sieve_tau_k(4, 1)[1] == 1);
}

TEST_CASE("table structure") {
  for (int k = 1; k <= 5; ++k) {
    const auto t = sieve_tau_k(k, 1024);
    CHECK(t[1] == 1);
    for (i64 p : {2, 3, 5, 7, 1021}) CHECK(t[p] == static_cast<u64>(k));
    for (int a = 1; a <= 10; ++a) CHECK(t[arith::ipow(2, a)] == arith::binomial(a + k - 1, k - 1));
  }
}

TEST_CASE("table for k is table for k-1 convolved with 1") {
  const i64 n = 5000;
  const auto t2 = sieve_tau_k(2, n);
  const auto t3 = sieve_tau_k(3, n);
  for (i64 m = 1; m <= n; ++m) {
    u64 acc = 0;
    for (i64 d = 1; d * d <= m; ++d) {
      if (m % d) continue;
      acc += t2[d];
      if (d * d != m) acc += t2[m / d];
    }
    REQUIRE(acc == t3[m]);
  }
}

TEST_CASE("sieve matches factorization on random arguments") {
  const i64 n = 2'000'000;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> pick(1, n);
  for (int k : {2, 3, 4}) {
    const auto t = sieve_tau_k(k, n);
    for (int trial = 0; trial < 1000; ++trial) {
      const i64 m = pick(rng);
      REQUIRE(t[m] == arith::tau_k_factored(k, m));
    }
  }
}

TEST_CASE("sieve budget") { CHECK_THROWS_AS(sieve_tau_k(2, 1000, 100), ResourceError); }

TEST_CASE("exact_T examples") {
  CHECK(exact_T(fixtures::q3(), 2, 1) == 2);
  CHECK(exact_T(fixtures::q3(), 2, 2) == 29);
  CHECK(exact_T(fixtures::w3(), 2, 2) == 22);
  CHECK_THROWS_AS(exact_T(fixtures::q3(), 2, 100, 1000), ResourceError);
}

TEST_CASE("exact_T agrees with transposed order and per-point factorization") {
  for (const auto& f : {fixtures::q3(), fixtures::w3(), fixtures::q3_shifted(), fixtures::mixed3()}) {
    for (int k : {2, 3, 4}) {
      for (i64 x_max = 1; x_max <= 5; ++x_max) {
        const auto table = sieve_tau_k(k, static_cast<i64>(sieve_bound(f, x_max)));
        u64 by_factor = 0;
        std::vector<i64> x(3);
        for (x[0] = 1; x[0] <= x_max; ++x[0])
          for (x[1] = 1; x[1] <= x_max; ++x[1])
            for (x[2] = 1; x[2] <= x_max; ++x[2])
              by_factor += arith::tau_k_factored(k, static_cast<i64>(evaluate(f, x)));
        const u64 fast = exact_T(f, table, x_max);
        CHECK(fast == by_factor);
        CHECK(exact_T_transposed(f, table, x_max) == by_factor);
      }
    }
  }
}

TEST_CASE("exact_T is independent of the thread count") {
  const auto f = fixtures::w3();
  const auto table = sieve_tau_k(3, static_cast<i64>(sieve_bound(f, 40)));
  set_thread_count(1);
  const u64 one = exact_T(f, table, 40);
  set_thread_count(4);
  const u64 four = exact_T(f, table, 40);
  set_thread_count(1);
  CHECK(one == four);
  CHECK(one == exact_T_transposed(f, table, 40));
}

TEST_CASE("exact_T rejects values outside the table") {
  CHECK_THROWS_AS(exact_T(fixtures::negative_q3(), 2, 3), DomainError);
}

TEST_CASE("tau_k_ap_sum examples") {
  CHECK(tau_k_ap_sum(2, 10, 1, 2) == 10);
  CHECK(tau_k_ap_sum(2, 10, 2, 2) == 17);
  CHECK(tau_k_ap_sum(3, 0, 1, 1) == 0);
  CHECK_THROWS_AS(tau_k_ap_sum(2, 10, 0, 2), DomainError);
}

TEST_CASE("residue classes partition the full sum") {
  for (int k : {2, 3}) {
    const auto t = sieve_tau_k(k, 10000);
    for (i64 x : {100, 1000, 10000}) {
      u64 full = 0;
      for (i64 m = 1; m <= x; ++m) full += t[m];
      for (i64 q = 1; q <= 10; ++q) {
        u64 split = 0;
        for (i64 h = 1; h <= q; ++h) split += tau_k_ap_sum(t, x, h, q);
        REQUIRE(split == full);
      }
    }
  }
}
