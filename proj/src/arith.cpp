#include "divsum/arith.hpp"

#include <cstdlib>
#include <algorithm>
#include <numeric>

namespace divsum::arith {

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

std::vector<std::pair<i64, int>> factorize(i64 n) {
  std::vector<std::pair<i64, int>> out;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int mobius(i64 n) {
  int sign = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

i64 euler_phi(i64 n) {
  i64 phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<char> composite(static_cast<std::size_t>(n) + 1, 0);
  for (i64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) composite[j] = 1;
  }
  return out;
}

u64 binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  u64 c = 1;
  for (int i = 1; i <= r; ++i) c = c * static_cast<u64>(n - r + i) / static_cast<u64>(i);
  return c;
}

u64 tau_k_factored(int k, i64 n) {
  u64 t = 1;
  for (auto [p, e] : factorize(n)) t *= tau_k_prime_power(k, e);
  return t;
}

i64 ipow(i64 base, int exp) {
  i64 r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace divsum::arith
