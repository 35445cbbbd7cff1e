#include "divsum/cli.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "divsum/arith.hpp"
#include "divsum/divisor.hpp"
#include "divsum/engine.hpp"
#include "divsum/format.hpp"
#include "divsum/local.hpp"
#include "divsum/parallel.hpp"
#include "divsum/verify.hpp"

#ifndef DIVSUM_VERSION
#define DIVSUM_VERSION "0.0.0"
#endif

namespace divsum {

namespace {

std::string join_messages(const std::vector<ConfigViolation>& v) {
  std::string s = "invalid config";
  for (const auto& x : v) {
    s += "\n  ";
    if (x.line > 0) s += "line " + std::to_string(x.line) + ", column " + std::to_string(x.column) + ": ";
    s += x.message;
  }
  return s;
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// A piece of the input with its 1-based column.
struct Token {
  std::string text;
  int column = 0;
};

Token trim(const std::string& s, int column) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_blank(s[b])) ++b;
  while (e > b && is_blank(s[e - 1])) --e;
  return {s.substr(b, e - b), column + static_cast<int>(b)};
}

struct Entry {
  int line = 0;
  Token key, value;
};

class Parser {
 public:
  std::vector<ConfigViolation> errors;

  void fail(int line, int column, std::string msg) { errors.push_back({line, column, std::move(msg)}); }
  void fail(const Entry& e, std::string msg) { fail(e.line, e.value.column, std::move(msg)); }

  std::optional<i64> integer(const Entry& e, const Token& t) {
    i64 v = 0;
    const char* end = t.text.data() + t.text.size();
    const auto r = std::from_chars(t.text.data(), end, v);
    if (t.text.empty() || r.ec != std::errc() || r.ptr != end) {
      fail(e.line, t.column, "expected an integer, got '" + t.text + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> real(const Entry& e, const Token& t) {
    double v = 0;
    const char* end = t.text.data() + t.text.size();
    const auto r = std::from_chars(t.text.data(), end, v);
    if (t.text.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
      fail(e.line, t.column, "expected a decimal number, got '" + t.text + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::vector<Token>> array(const Entry& e) {
    const std::string& s = e.value.text;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
      fail(e, "expected an array [a, b, ...]");
      return std::nullopt;
    }
    std::vector<Token> items;
    const std::string inner = s.substr(1, s.size() - 2);
    if (trim(inner, 0).text.empty()) return items;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = inner.find(',', start);
      const std::string piece = inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      items.push_back(trim(piece, e.value.column + 1 + static_cast<int>(start)));
      if (items.back().text.empty()) {
        fail(e.line, items.back().column, "empty array element");
        return std::nullopt;
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return items;
  }

  std::string string(const Entry& e) {
    const std::string& s = e.value.text;
    if (!s.empty() && s.front() == '"') {
      if (s.size() < 2 || s.back() != '"') {
        fail(e, "unterminated string");
        return {};
      }
      return s.substr(1, s.size() - 2);
    }
    return s;
  }
};

std::vector<i64> numbers_in(const std::string& part) {
  std::vector<i64> out;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    i64 v = 0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
      throw DomainError("cli", "bad integer '" + tok + "' in polynomial literal");
    out.push_back(v);
    tok.clear();
  };
  for (char c : part) {
    if (is_blank(c) || c == ',' || c == '\n') flush();
    else tok += c;
  }
  flush();
  return out;
}

std::string polynomial_literal(const QuadraticPolynomial& f) {
  auto list = [](const std::vector<i64>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  return std::to_string(f.ell()) + " ; " + list(f.q()) + " ; " + list(f.b()) + " ; " + std::to_string(f.c());
}

using Where = std::function<std::pair<int, int>(const std::string& key)>;

// Semantic rules shared by parse_config and validate_config.
void semantic_checks(const RunConfig& c, const std::set<std::string>& present, const std::set<std::string>& broken,
                     const Where& where, std::vector<ConfigViolation>& out) {
  auto fail = [&](const std::string& key, std::string msg) {
    if (broken.count(key)) return;  // already reported as a syntax error
    const auto [l, col] = where(key);
    out.push_back({l, col, std::move(msg)});
  };
  const bool theorem = c.command == Command::estimate || c.command == Command::compare;
  if (!c.polynomial) {
    if (!present.count("polynomial")) fail("polynomial", "missing required key 'polynomial'");
  } else if (theorem && c.polynomial->ell() < 3) {
    fail("polynomial", "command '" + command_name(c.command) +
                           "' needs ell >= 3 (the main theorem assumes k >= 2 and ell >= 3); got ell = " +
                           std::to_string(c.polynomial->ell()));
  }
  if (!present.count("k")) fail("k", "missing required key 'k'");
  else if (c.k < 2) fail("k", "k must be >= 2 (the main theorem assumes k >= 2 and ell >= 3); got k = " + std::to_string(c.k));
  if (c.command != Command::local_dump) {
    if (c.X.empty()) {
      fail("X", present.count("X") ? "X must list at least one value" : "missing required key 'X'");
    }
    for (i64 x : c.X) {
      if (x < 1) fail("X", "X values must be >= 1; got " + std::to_string(x));
      else if (theorem && x < 2) fail("X", "estimate/compare need X >= 2; got " + std::to_string(x));
    }
  }
  if (c.truncation.P0 < 2) fail("P0", "P0 must be >= 2");
  if (c.truncation.M0_max < 2) fail("M0", "M0 must be >= 2");
  if (c.truncation.Q0 < 2) fail("Q0", "Q0 must be >= 2");
  if (!(c.truncation.tolerance > 0)) fail("singular_tolerance", "singular_tolerance must be > 0");
  if (!(c.quadrature.tolerance > 0)) fail("quadrature_tolerance", "quadrature_tolerance must be > 0");
  if (c.quadrature.panels < 0) fail("quadrature_panels", "quadrature_panels must be >= 0");
  if (c.quadrature.samples < 64) fail("samples", "samples must be >= 64");
  if (c.threads < 1) fail("threads", "threads must be >= 1");
  if (c.p_max < 2) fail("p_max", "p_max must be >= 2");
  if (c.depth < 1) fail("depth", "depth must be >= 1");
  for (i64 q : c.q_list)
    if (q < 1) fail("q", "q values must be >= 1");
  for (double s : c.beta_steps)
    if (std::abs(s) > 1) fail("beta_steps", "beta steps are multiples of q^{-2} and must lie in [-1, 1]");
}

std::string h_line(const char* name, const std::vector<double>& v) {
  std::string s = std::string("# ") + name + "=";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s + "\n";
}

std::string singular_header(const SingularSeriesResult& ss) {
  std::string s = "# P0=" + std::to_string(ss.P0) + " M0=" + std::to_string(ss.M0) + " Q0=" + std::to_string(ss.Q0) + "\n";
  s += h_line("H", ss.H);
  s += h_line("H_tail", ss.H_tail);
  s += h_line("H_qsum", ss.H_qsum);
  s += h_line("H_qsum_tail", ss.qsum_tail);
  s += "# tail_estimate=" + format_double(ss.tail_estimate) + "\n";
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigViolation> v)
    : Error("cli", join_messages(v)), violations_(std::move(v)) {}

std::optional<Command> parse_command(const std::string& name) {
  if (name == "exact") return Command::exact;
  if (name == "estimate") return Command::estimate;
  if (name == "compare") return Command::compare;
  if (name == "local-dump") return Command::local_dump;
  if (name == "verify") return Command::verify;
  return std::nullopt;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::exact: return "exact";
    case Command::estimate: return "estimate";
    case Command::compare: return "compare";
    case Command::local_dump: return "local-dump";
    case Command::verify: return "verify";
  }
  return "?";
}

QuadraticPolynomial parse_polynomial(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) parts.push_back(part);
  if (parts.size() != 4) throw DomainError("cli", "polynomial literal needs 4 ';'-separated parts: ell ; Q ; b ; c");
  const auto ell = numbers_in(parts[0]);
  if (ell.size() != 1 || ell[0] < 1 || ell[0] > 16) throw DomainError("cli", "ell must be one integer in 1..16");
  const auto q = numbers_in(parts[1]), b = numbers_in(parts[2]), c = numbers_in(parts[3]);
  const auto n = static_cast<std::size_t>(ell[0]);
  if (q.size() != n * n)
    throw DomainError("cli", "Q needs ell^2 = " + std::to_string(n * n) + " entries, got " + std::to_string(q.size()));
  if (b.size() != n) throw DomainError("cli", "b needs ell = " + std::to_string(n) + " entries, got " + std::to_string(b.size()));
  if (c.size() != 1) throw DomainError("cli", "c must be one integer");
  return QuadraticPolynomial(static_cast<int>(ell[0]), q, b, c[0]);
}

RunConfig parse_config(const std::string& text) {
  Parser p;
  RunConfig cfg;
  std::map<std::string, Entry> entries;
  std::set<std::string> present;

  std::stringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        raw.resize(i);
        break;
      }
    }
    const Token whole = trim(raw, 1);
    if (whole.text.empty()) continue;
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos) {
      p.fail(line_no, whole.column, "expected 'key = value'");
      continue;
    }
    Entry e{line_no, trim(raw.substr(0, eq), 1), trim(raw.substr(eq + 1), static_cast<int>(eq) + 2)};
    bool ident = !e.key.text.empty() && (std::isalpha(static_cast<unsigned char>(e.key.text[0])) || e.key.text[0] == '_');
    for (char c : e.key.text) ident = ident && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ident) {
      p.fail(line_no, e.key.column, "bad key '" + e.key.text + "'");
      continue;
    }
    if (e.value.text.empty()) {
      p.fail(line_no, e.value.column, "missing value for '" + e.key.text + "'");
      continue;
    }
    if (entries.count(e.key.text)) {
      p.fail(line_no, e.key.column, "duplicate key '" + e.key.text + "' (first on line " +
                                        std::to_string(entries[e.key.text].line) + ")");
      continue;
    }
    entries[e.key.text] = e;
  }

  auto int_in = [&](const Entry& e, i64 lo, i64 hi) -> std::optional<i64> {
    auto v = p.integer(e, e.value);
    if (v && (*v < lo || *v > hi)) {
      p.fail(e, "value " + std::to_string(*v) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return std::nullopt;
    }
    return v;
  };
  for (const auto& [key, e] : entries) {
    present.insert(key);
    if (key == "command") {
      const auto c = parse_command(p.string(e));
      if (!c) p.fail(e, "unknown command '" + e.value.text + "' (exact, estimate, compare, local-dump, verify)");
      else cfg.command = *c;
    } else if (key == "polynomial") {
      cfg.polynomial_text = p.string(e);
      try {
        cfg.polynomial = parse_polynomial(cfg.polynomial_text);
      } catch (const DomainError& err) {
        p.fail(e, err.what());
      }
    } else if (key == "k") {
      if (auto v = int_in(e, -1000, 64)) cfg.k = static_cast<int>(*v);
    } else if (key == "X") {
      if (auto items = p.array(e))
        for (const auto& t : *items)
          if (auto v = p.integer(e, t)) cfg.X.push_back(*v);
    } else if (key == "P0") {
      if (auto v = int_in(e, -1, 1'000'000)) cfg.truncation.P0 = *v;
    } else if (key == "M0") {
      if (auto v = int_in(e, -1, 40)) cfg.truncation.M0_max = static_cast<int>(*v);
    } else if (key == "Q0") {
      if (auto v = int_in(e, -1, 1'000'000)) cfg.truncation.Q0 = *v;
    } else if (key == "singular_tolerance") {
      if (auto v = p.real(e, e.value)) cfg.truncation.tolerance = *v;
    } else if (key == "quadrature") {
      const std::string m = p.string(e);
      if (m == "auto") cfg.quadrature.method = QuadratureMethod::automatic;
      else if (m == "tensor") cfg.quadrature.method = QuadratureMethod::tensor_gauss_legendre;
      else if (m == "monte-carlo") cfg.quadrature.method = QuadratureMethod::monte_carlo;
      else p.fail(e, "quadrature must be auto, tensor or monte-carlo");
    } else if (key == "quadrature_tolerance") {
      if (auto v = p.real(e, e.value)) cfg.quadrature.tolerance = *v;
    } else if (key == "quadrature_panels") {
      if (auto v = int_in(e, -1, 4096)) cfg.quadrature.panels = static_cast<int>(*v);
    } else if (key == "samples") {
      if (auto v = int_in(e, -1, i64{1} << 40)) cfg.quadrature.samples = *v;
    } else if (key == "seed") {
      if (auto v = int_in(e, 0, std::numeric_limits<i64>::max())) cfg.seed = static_cast<std::uint64_t>(*v);
    } else if (key == "threads") {
      if (auto v = int_in(e, 0, 1024)) cfg.threads = static_cast<unsigned>(*v);
    } else if (key == "output") {
      cfg.output_path = p.string(e);
    } else if (key == "p_max") {
      if (auto v = int_in(e, -1, 100'000)) cfg.p_max = *v;
    } else if (key == "depth") {
      if (auto v = int_in(e, -1, 60)) cfg.depth = static_cast<int>(*v);
    } else if (key == "q") {
      if (auto items = p.array(e))
        for (const auto& t : *items)
          if (auto v = p.integer(e, t)) cfg.q_list.push_back(*v);
    } else if (key == "beta_steps") {
      cfg.beta_steps.clear();
      if (auto items = p.array(e))
        for (const auto& t : *items)
          if (auto v = p.real(e, t)) cfg.beta_steps.push_back(*v);
    } else {
      p.fail(e.line, e.key.column, "unknown key '" + key + "'");
    }
  }
  if (cfg.q_list.empty() && !present.count("q"))
    for (i64 q = 3; q <= 31; q += 2) cfg.q_list.push_back(q);
  cfg.quadrature.seed = cfg.seed;

  std::set<std::string> broken;
  for (const auto& [key, e] : entries)
    for (const auto& v : p.errors)
      if (v.line == e.line) broken.insert(key);
  semantic_checks(cfg, present, broken,
                  [&](const std::string& key) -> std::pair<int, int> {
                    auto it = entries.find(key);
                    if (it == entries.end()) return {0, 0};
                    return {it->second.line, it->second.value.column};
                  },
                  p.errors);
  // document order; violations without a position (missing keys) go last
  std::stable_sort(p.errors.begin(), p.errors.end(), [](const ConfigViolation& a, const ConfigViolation& b) {
    const auto key = [](const ConfigViolation& v) { return std::pair{v.line == 0 ? INT32_MAX : v.line, v.column}; };
    return key(a) < key(b);
  });
  if (!p.errors.empty()) throw ConfigError(p.errors);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  std::vector<ConfigViolation> v;
  std::set<std::string> present{"k", "X", "polynomial"};
  semantic_checks(cfg, present, {}, [](const std::string&) { return std::pair{0, 0}; }, v);
  if (!v.empty()) throw ConfigError(v);
}

std::string version() { return DIVSUM_VERSION; }

std::string run(const RunConfig& cfg) {
  validate_config(cfg);
  set_thread_count(cfg.threads);
  const QuadraticPolynomial& f = *cfg.polynomial;
  QuadratureSpec quad = cfg.quadrature;
  quad.seed = cfg.seed;

  std::string out = "# divsum " + version() + "\n";
  out += "# command=" + command_name(cfg.command) + "\n";
  out += "# polynomial=" + polynomial_literal(f) + "\n";
  out += "# k=" + std::to_string(cfg.k) + "\n";
  out += "# seed=" + std::to_string(cfg.seed) + "\n";

  std::vector<i64> xs = cfg.X;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  switch (cfg.command) {
    case Command::exact: {
      for (i64 X : xs) {
        const auto verdict = validate(f, X);
        if (verdict.pass_diagnostic()) continue;
        std::string why;
        for (const auto& v : verdict.violations)
          if (v.rfind("dimension", 0) != 0) why += (why.empty() ? "" : "; ") + v;
        throw DomainError("quadpoly", "X=" + std::to_string(X) + ": " + why);
      }
      const i128 n = sieve_bound(f, xs.back());
      if (n > static_cast<i128>(kDefaultSieveBudget))
        throw ResourceError("divisor", "sieve bound " + to_string(n) + " exceeds the budget");
      const DivisorTable table = sieve_tau_k(cfg.k, static_cast<i64>(n));
      out += "X,exact\n";
      for (i64 X : xs) out += std::to_string(X) + "," + std::to_string(exact_T(f, table, X)) + "\n";
      break;
    }
    case Command::estimate: {
      const auto ss = H_coeffs(f, cfg.k, cfg.truncation);
      out += singular_header(ss);
      out += "X,main_term\n";
      for (i64 X : xs) out += std::to_string(X) + "," + format_double(main_term(f, cfg.k, static_cast<double>(X), ss, quad)) + "\n";
      break;
    }
    case Command::compare: {
      CompareOptions opts;
      opts.singular = cfg.truncation;
      opts.quadrature = quad;
      const auto rep = compare(f, cfg.k, xs, opts);
      out += "# P0=" + std::to_string(rep.P0) + " M0=" + std::to_string(rep.M0) + " Q0=" + std::to_string(rep.Q0) + "\n";
      out += h_line("H", rep.H);
      out += "# tail_estimate=" + format_double(rep.tail_estimate) + "\n";
      out += "X,exact,main_term,ratio,abs_err\n";
      for (const auto& r : rep.rows)
        out += std::to_string(r.X) + "," + std::to_string(r.exact) + "," + format_double(r.main_term) + "," +
               format_double(r.ratio) + "," + format_double(r.abs_err) + "\n";
      out += "# fitted_exponent=" + (rep.fitted_exponent ? format_double(*rep.fitted_exponent) : std::string("absent (needs >= 3 X values)")) + "\n";
      out += "# theorem_exponent=" + format_double(rep.theorem_exponent) + "\n";
      break;
    }
    case Command::local_dump: {
      const std::size_t order = default_jet_order(cfg.k);
      validate_F_k_closed_form(cfg.k, order, 128);
      out += "# p_max=" + std::to_string(cfg.p_max) + " depth=" + std::to_string(cfg.depth) +
             " (capped per prime by the enumeration budget)\n";
      out += "p,m,rho,S_F,F_k_at_1\n";
      for (i64 p : arith::primes_up_to(cfg.p_max)) {
        int depth = 0;
        i64 pm = 1;
        while (depth < cfg.depth && pm <= (i64{1} << 40) / p && rho_F_feasible(f, pm * p)) {
          pm *= p;
          ++depth;
        }
        if (depth == 0) throw ResourceError("local", "rho_F(" + std::to_string(p) + ") exceeds the enumeration budget");
        out += local_factor_csv_rows(local_factor_table(f, cfg.k, p, depth, order));
      }
      break;
    }
    case Command::verify: {
      std::string qs;
      for (std::size_t i = 0; i < cfg.q_list.size(); ++i) qs += (i ? ";" : "") + std::to_string(cfg.q_list[i]);
      out += "# q=" + qs + "\n";
      out += h_line("beta_steps", cfg.beta_steps);
      out += "X,alpha,q,a,beta,abs_I,bound,ratio\n";
      for (i64 X : xs) {
        const auto rows = minor_arc_sweep(f, X, cfg.q_list, cfg.beta_steps);
        const std::string csv = sweep_csv(rows);
        std::stringstream body(csv);
        std::string line;
        std::getline(body, line);  // header
        while (std::getline(body, line)) out += std::to_string(X) + "," + line + "\n";
      }
      break;
    }
  }
  return out;
}

}  // namespace divsum
