#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "divsum/cli.hpp"
#include "divsum/errors.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Failure {
  int code;
  json record;
};

json inputs_of(const std::string& config_path, const divsum::RunConfig* cfg) {
  json in = {{"config", config_path}};
  if (cfg) {
    in["command"] = divsum::command_name(cfg->command);
    in["polynomial"] = cfg->polynomial_text;
    in["k"] = cfg->k;
    in["X"] = cfg->X;
    in["seed"] = cfg->seed;
    in["threads"] = cfg->threads;
  }
  return in;
}

std::string kind_of(const divsum::Error& e) {
  if (dynamic_cast<const divsum::DomainError*>(&e)) return "domain";
  if (dynamic_cast<const divsum::ConsistencyError*>(&e)) return "consistency";
  if (dynamic_cast<const divsum::AccuracyError*>(&e)) return "accuracy";
  return "computation";
}

json error_record(const std::string& kind, const std::string& module, const std::string& message) {
  return {{"kind", kind}, {"module", module}, {"message", message}};
}

// Write through a temporary sibling and rename, so a failed run leaves no file.
void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw divsum::ResourceError("cli", "cannot open " + tmp.string() + " for writing");
    out << text;
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw divsum::ResourceError("cli", "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw divsum::ResourceError("cli", "cannot rename onto " + path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisor sums over quadratic polynomial values"};
  app.set_version_flag("--version", divsum::version());
  std::string config_path, output_path, command;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "config file")->required();
  app.add_option("--output", output_path, "output CSV (default: stdout)");
  app.add_option("--threads", threads, "worker thread cap");
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--command", command, "override the config command");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json rec = error_record("config", "cli", e.what());
    rec["violations"] = json::array();
    std::cerr << rec.dump() << "\n";
    return 2;
  }

  std::optional<divsum::RunConfig> cfg;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw divsum::ConfigError({{0, 0, "cannot read config file " + config_path}});
    std::stringstream text;
    text << in.rdbuf();
    cfg = divsum::parse_config(text.str());
    if (!command.empty()) {
      const auto c = divsum::parse_command(command);
      if (!c) throw divsum::ConfigError({{0, 0, "unknown --command '" + command + "'"}});
      cfg->command = *c;
    }
    if (threads) cfg->threads = *threads;
    if (seed) cfg->seed = *seed;
    if (!output_path.empty()) cfg->output_path = output_path;
    divsum::validate_config(*cfg);

    const std::string csv = divsum::run(*cfg);
    if (cfg->output_path.empty()) std::cout << csv;
    else write_atomic(cfg->output_path, csv);
    return 0;
  } catch (const divsum::ConfigError& e) {
    json rec = error_record("config", e.module(), e.what());
    rec["violations"] = json::array();
    for (const auto& v : e.violations())
      rec["violations"].push_back({{"line", v.line}, {"column", v.column}, {"message", v.message}});
    rec["inputs"] = inputs_of(config_path, cfg ? &*cfg : nullptr);
    std::cerr << rec.dump() << "\n";
    return 2;
  } catch (const divsum::ResourceError& e) {
    json rec = error_record("resource", e.module(), e.what());
    rec["inputs"] = inputs_of(config_path, cfg ? &*cfg : nullptr);
    std::cerr << rec.dump() << "\n";
    return 3;
  } catch (const divsum::Error& e) {
    json rec = error_record(kind_of(e), e.module(), e.what());
    rec["inputs"] = inputs_of(config_path, cfg ? &*cfg : nullptr);
    std::cerr << rec.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json rec = error_record("internal", "cli", e.what());
    rec["inputs"] = inputs_of(config_path, cfg ? &*cfg : nullptr);
    std::cerr << rec.dump() << "\n";
    return 1;
  }
}
