#include "divsum/divisor.hpp"

#include <string>

#include "divsum/errors.hpp"
#include "divsum/parallel.hpp"

namespace divsum {

DivisorTable::DivisorTable(int k, std::vector<u64> values) : k_(k), values_(std::move(values)) {}

DivisorTable sieve_tau_k(int k, i64 n_max, i64 budget) {
  if (k < 1) throw DomainError("divisor", "tau_k needs k >= 1");
  if (n_max < 0) n_max = 0;
  if (n_max > budget)
    throw ResourceError("divisor", "sieve of size " + std::to_string(n_max) +
                                       " exceeds budget " + std::to_string(budget));
  const auto n = static_cast<std::size_t>(n_max);
  std::vector<u64> cur(n + 1, 1);
  cur[0] = 0;
  std::vector<u64> next(n + 1);
  for (int step = 1; step < k; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t d = 1; d <= n; ++d) {
      const u64 t = cur[d];
      for (std::size_t m = d; m <= n; m += d) next[m] += t;
    }
    cur.swap(next);
  }
  return DivisorTable(k, std::move(cur));
}

namespace {

DivisorTable table_for(const QuadraticPolynomial& f, int k, i64 x_max, i64 budget) {
  const i128 bound = sieve_bound(f, x_max);
  if (bound > budget)
    throw ResourceError("divisor", "exact_T needs a tau_k table up to N = " + to_string(bound) +
                                       ", budget is " + std::to_string(budget));
  return sieve_tau_k(k, static_cast<i64>(bound), budget);
}

[[noreturn]] void out_of_table(i128 v, const DivisorTable& table) {
  throw DomainError("divisor", "F value " + to_string(v) + " outside [1, " +
                                   std::to_string(table.size()) + "]; validate F on the box first");
}

}  // namespace

u64 exact_T(const QuadraticPolynomial& f, int k, i64 x_max, i64 budget) {
  return exact_T(f, table_for(f, k, x_max, budget), x_max);
}

u64 exact_T(const QuadraticPolynomial& f, const DivisorTable& table, i64 x_max) {
  const int n = f.ell();
  if (x_max < 1) return 0;
  const i64 limit = table.size();
  const i64 last_diag = f.a(n - 1, n - 1);
  const i64 step_base = last_diag + f.b()[static_cast<std::size_t>(n - 1)];

  // Chunk i fixes the first coordinate (or covers everything when ell = 1).
  const std::size_t chunks = n == 1 ? 1 : static_cast<std::size_t>(x_max);
  auto partial = parallel_chunks(chunks, [&](std::size_t chunk) -> u64 {
    std::vector<i64> x(static_cast<std::size_t>(n), 1);
    if (n > 1) x[0] = static_cast<i64>(chunk) + 1;
    u64 sum = 0;
    for (;;) {
      x[static_cast<std::size_t>(n - 1)] = 1;
      const i128 start = evaluate(f, x);
      if (start < 1 || start > limit) out_of_table(start, table);
      i128 delta = step_base + f.sym(n - 1, n - 1);
      for (int j = 0; j < n - 1; ++j) delta += static_cast<i128>(f.sym(n - 1, j)) * x[static_cast<std::size_t>(j)];
      i64 v = static_cast<i64>(start);
      i64 d = static_cast<i64>(delta);
      for (i64 t = 1; t <= x_max; ++t) {
        if (v < 1 || v > limit) out_of_table(v, table);
        sum += table[v];
        v += d;
        d += 2 * last_diag;
      }
      // Advance coordinates 1..n-2 (coordinate 0 is the chunk).
      int i = n - 2;
      while (i >= 1 && x[static_cast<std::size_t>(i)] == x_max) x[static_cast<std::size_t>(i--)] = 1;
      if (i < 1) break;
      ++x[static_cast<std::size_t>(i)];
    }
    return sum;
  });
  u64 total = 0;
  for (u64 s : partial) total += s;
  return total;
}

u64 exact_T_transposed(const QuadraticPolynomial& f, const DivisorTable& table, i64 x_max) {
  const int n = f.ell();
  if (x_max < 1) return 0;
  std::vector<i64> x(static_cast<std::size_t>(n), 1);
  u64 sum = 0;
  for (;;) {
    const i128 v = evaluate(f, x);
    if (v < 1 || v > table.size()) out_of_table(v, table);
    sum += table[static_cast<i64>(v)];
    int i = 0;
    while (i < n && x[static_cast<std::size_t>(i)] == x_max) x[static_cast<std::size_t>(i++)] = 1;
    if (i == n) break;
    ++x[static_cast<std::size_t>(i)];
  }
  return sum;
}

u64 tau_k_ap_sum(const DivisorTable& table, i64 x, i64 h, i64 q) {
  if (q < 1 || h < 1 || h > q) throw DomainError("divisor", "need 1 <= h <= q");
  if (x > table.size()) throw DomainError("divisor", "table too short for tau_k_ap_sum");
  u64 sum = 0;
  for (i64 m = h; m <= x; m += q) sum += table[m];
  return sum;
}

u64 tau_k_ap_sum(int k, i64 x, i64 h, i64 q) {
  if (x < 1) {
    if (q < 1 || h < 1 || h > q) throw DomainError("divisor", "need 1 <= h <= q");
    return 0;
  }
  return tau_k_ap_sum(sieve_tau_k(k, x), x, h, q);
}

}  // namespace divsum
