#include "divsum/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divsum/errors.hpp"
#include "divsum/format.hpp"

namespace divsum {

namespace {

// Re-raise err with the schedule entry prepended, keeping its type.
[[noreturn]] void rethrow_at(i64 X) {
  const std::string at = "X=" + std::to_string(X) + ": ";
  try {
    throw;
  } catch (const DomainError& e) {
    throw DomainError(e.module(), at + e.what());
  } catch (const ResourceError& e) {
    throw ResourceError(e.module(), at + e.what());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(e.module(), at + e.what());
  } catch (const AccuracyError& e) {
    throw AccuracyError(e.module(), at + e.what(), e.achieved());
  }
}

void validate_schedule(const QuadraticPolynomial& f, const std::vector<i64>& schedule) {
  if (schedule.empty()) throw DomainError("engine", "empty X schedule");
  for (i64 X : schedule) {
    if (X < 1) throw DomainError("engine", "X=" + std::to_string(X) + ": X must be >= 1");
    if (!validate(f, X).pass())
      throw DomainError("engine", "X=" + std::to_string(X) + ": polynomial fails validation on the box");
  }
}

}  // namespace

double main_term(const QuadraticPolynomial& f, const std::vector<double>& H, double X, const QuadratureSpec& spec) {
  if (H.empty()) throw DomainError("engine", "empty H vector");
  const auto I = log_power_integrals(f, X, static_cast<int>(H.size()) - 1, spec);
  double m = 0;
  for (std::size_t r = 0; r < H.size(); ++r) m += H[r] * I.values[r];
  return m;
}

double main_term(const QuadraticPolynomial& f, int k, double X, const SingularSeriesResult& ss,
                 const QuadratureSpec& spec) {
  if (ss.k != k || !(ss.F == f)) throw DomainError("engine", "singular series was computed for another (F, k)");
  return main_term(f, ss.H, X, spec);
}

double theorem_exponent(int ell, int k) {
  return ell - static_cast<double>(ell - 2) / (ell + 2) * std::min(1.0, 4.0 / (k + 1));
}

ComparisonReport compare(const QuadraticPolynomial& f, int k, std::vector<i64> schedule, const CompareOptions& opts) {
  validate_schedule(f, schedule);
  return compare(f, k, std::move(schedule), H_coeffs(f, k, opts.singular), opts);
}

ComparisonReport compare(const QuadraticPolynomial& f, int k, std::vector<i64> schedule,
                         const SingularSeriesResult& ss, const CompareOptions& opts) {
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

  ComparisonReport rep;
  rep.k = k;
  rep.ell = f.ell();
  rep.theorem_exponent = theorem_exponent(f.ell(), k);
  rep.H = ss.H;
  rep.tail_estimate = ss.tail_estimate;
  rep.P0 = ss.P0;
  rep.M0 = ss.M0;
  rep.Q0 = ss.Q0;

  validate_schedule(f, schedule);
  const i128 n_max = sieve_bound(f, schedule.back());
  if (n_max > static_cast<i128>(opts.sieve_budget))
    throw ResourceError("engine", "X=" + std::to_string(schedule.back()) + ": sieve bound " + to_string(n_max) +
                                      " exceeds the budget");
  const DivisorTable table = sieve_tau_k(k, static_cast<i64>(n_max), opts.sieve_budget);

  std::vector<double> xs, errs;
  for (i64 X : schedule) {
    try {
      ComparisonRow row;
      row.X = X;
      row.exact = exact_T(f, table, X);
      const u64 again = exact_T_transposed(f, table, X);
      if (again != row.exact)
        throw ConsistencyError("engine", "exact_T differs between enumeration orders");
      row.main_term = main_term(f, k, static_cast<double>(X), ss, opts.quadrature);
      row.ratio = static_cast<double>(row.exact) / row.main_term;
      row.abs_err = std::abs(static_cast<double>(row.exact) - row.main_term);
      rep.rows.push_back(row);
      xs.push_back(static_cast<double>(X));
      errs.push_back(row.abs_err);
    } catch (const Error&) {
      rethrow_at(X);
    }
  }
  if (rep.rows.size() >= 3) {
    const double slope = loglog_slope(xs, errs);
    if (std::isfinite(slope)) rep.fitted_exponent = slope;
  }
  return rep;
}

}  // namespace divsum
