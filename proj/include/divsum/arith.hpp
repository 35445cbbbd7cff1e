#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Elementary multiplicative-number-theory helpers shared by the modules.
namespace divsum::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

i64 gcd(i64 a, i64 b);

// Positive residue of a mod m (m > 0).
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

// Prime factorization by trial division, primes ascending.
std::vector<std::pair<i64, int>> factorize(i64 n);

std::vector<i64> divisors(i64 n);  // ascending
int mobius(i64 n);
i64 euler_phi(i64 n);
bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);

// Binomial coefficient C(n, r) for small arguments, exact.
u64 binomial(int n, int r);

// tau_k(p^a) = C(a + k - 1, k - 1).
inline u64 tau_k_prime_power(int k, int a) { return binomial(a + k - 1, k - 1); }

// tau_k(n) via factorization.
u64 tau_k_factored(int k, i64 n);

i64 ipow(i64 base, int exp);

}  // namespace divsum::arith
