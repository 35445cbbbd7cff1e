#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divsum/errors.hpp"
#include "divsum/integrals.hpp"
#include "divsum/quadpoly.hpp"
#include "divsum/singular.hpp"

namespace divsum {

enum class Command { exact, estimate, compare, local_dump, verify };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

struct ConfigViolation {
  int line = 0;    // 1-based; 0 when not tied to a line
  int column = 0;  // 1-based
  std::string message;
};

// Every syntax and semantic problem found in a config, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigViolation> v);
  const std::vector<ConfigViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<ConfigViolation> violations_;
};

struct RunConfig {
  Command command = Command::compare;
  std::optional<QuadraticPolynomial> polynomial;
  std::string polynomial_text;
  int k = 0;
  std::vector<i64> X;
  SingularSeriesOptions truncation;
  QuadratureSpec quadrature;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_path;
  i64 p_max = 10;               // local-dump: primes p <= p_max
  int depth = 4;                // local-dump: m = 1..depth, capped by the budget
  std::vector<i64> q_list;      // verify: moduli of the sweep
  std::vector<double> beta_steps{0.0, 0.5, 1.0};
};

// Flat "key = value" text, one entry per line, '#' starts a comment, arrays
// are written [a, b, c]. See README for the key list. Throws ConfigError.
RunConfig parse_config(const std::string& text);

// Re-checks the semantic rules after command-line overrides.
void validate_config(const RunConfig& cfg);

// "ell ; q11 q12 ... ; b1 .. b_ell ; c", entries separated by blanks or commas.
QuadraticPolynomial parse_polynomial(const std::string& text);

// Runs the command and returns the report text (CSV with '#' header lines).
std::string run(const RunConfig& cfg);

std::string version();

}  // namespace divsum
