// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "phonon/experiments.hpp"

#ifndef PHONON_SIM_VERSION
#define PHONON_SIM_VERSION "0.0.0"
#endif

namespace phonon {

namespace {

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::optional<std::string> out;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

int do_run(const RunOptions& o, std::ostream& out) {
  const Json doc = read_json_file(o.config);
  ExperimentConfig c = parse_config(doc, experiment_registry());
  const KindSchema& schema = find_schema(experiment_registry(), c.kind);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.trials) {
    if (schema.trials_param.empty()) throw InvalidArgument(fmt::format("kind '{}' has no trial count", c.kind));
    if (*o.trials < 0) throw InvalidArgument("--trials must be >= 0");
    c.params[schema.trials_param] = *o.trials;
  }

  const ResultBundle b = run_experiment(c);

  const std::filesystem::path dir(c.output_dir);
  std::filesystem::create_directories(dir);
  Json files = Json::array();
  for (const auto& t : b.tables) {
    const std::string name = t.name + ".csv";
    write_file(dir / name, format_csv(t));
    files.push_back(name);
  }
  Json checks = Json::array();
  int passed = 0;
  for (const auto& ch : b.checks) {
    checks.push_back({{"name", ch.name}, {"value", ch.value}, {"relation", ch.relation}, {"limit", ch.limit},
                      {"pass", ch.pass}});
    passed += ch.pass ? 1 : 0;
  }
  const Json prov = provenance_config(c);
  Json summary;
  summary["kind"] = c.kind;
  summary["seed"] = c.seed;
  summary["version"] = version_string();
  summary["config"] = prov;
  summary["config_sha256"] = sha256_hex(prov.dump());
  summary["metrics"] = b.metrics;
  summary["checks"] = checks;
  summary["all_checks_pass"] = b.all_pass();
  summary["tables"] = files;
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  out << fmt::format("{}: wrote {} table(s) and summary.json to {}\n", c.kind, b.tables.size(), dir.string());
  out << fmt::format("checks passed: {}/{}\n", passed, b.checks.size());
  for (const auto& ch : b.checks) {
    out << fmt::format("  {} {}: {} {} {}\n", ch.pass ? "PASS" : "FAIL", ch.name, ch.value, ch.relation, ch.limit);
  }
  return kExitOk;
}

void do_list(std::ostream& out) {
  for (const auto& s : experiment_registry()) out << fmt::format("{:<17} {}\n", s.kind, s.summary);
}

void do_describe(const std::string& kind, bool as_json, std::ostream& out) {
  const KindSchema& s = find_schema(experiment_registry(), kind);
  if (as_json) {
    Json params = Json::array();
    for (const auto& p : s.params) {
      Json j{{"name", p.name}, {"type", type_name(p.type)}, {"default", p.default_value}, {"description", p.description}};
      if (p.dimension != Dimension::kNone) {
        j["dimension"] = dimension_name(p.dimension);
        j["units"] = units_for(p.dimension);
      }
      if (!p.choices.empty()) j["choices"] = p.choices;
      params.push_back(j);
    }
    out << Json{{"kind", s.kind}, {"summary", s.summary}, {"register", s.uses_register},
                {"trials_param", s.trials_param}, {"params", params}}
               .dump(2)
        << "\n";
    return;
  }
  out << fmt::format("{}: {}\n", s.kind, s.summary);
  out << fmt::format("register: {}\n", s.uses_register ? "required" : "not used");
  if (!s.trials_param.empty()) out << fmt::format("--trials sets: {}\n", s.trials_param);
  out << "params:\n";
  for (const auto& p : s.params) {
    std::string kind = type_name(p.type);
    if (p.dimension != Dimension::kNone) {
      std::string units;
      for (const auto& u : units_for(p.dimension)) units += (units.empty() ? "" : "|") + u;
      kind += fmt::format(" [{}: {}]", dimension_name(p.dimension), units);
    }
    if (!p.choices.empty()) {
      std::string all;
      for (const auto& c : p.choices) all += (all.empty() ? "" : "|") + c;
      kind += " {" + all + "}";
    }
    out << fmt::format("  {:<22} {}\n      default {}; {}\n", p.name, kind,
                       p.default_value.is_null() ? std::string("none") : p.default_value.dump(), p.description);
  }
}

}  // namespace

std::string version_string() { return PHONON_SIM_VERSION; }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

Json provenance_config(const ExperimentConfig& c) {
  Json j = c.to_json();
  j.erase("output_dir");
  return j;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"phonon_sim: trapped-ion phonon experiment runner"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  RunOptions run;
  std::uint64_t seed = 0;
  long trials = 0;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  run_cmd->add_option("config", run.config, "JSON config file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the master seed");
  auto* trials_opt = run_cmd->add_option("--trials", trials, "Override the trial count");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory");

  app.add_subcommand("list", "List experiment kinds");
  std::string kind;
  bool as_json = false;
  auto* describe_cmd = app.add_subcommand("describe", "Show the parameter schema of a kind");
  describe_cmd->add_option("kind", kind, "Experiment kind")->required();
  describe_cmd->add_flag("--json", as_json, "Print the schema as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForVersion&) {
    out << version_string() << "\n";
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::Success&) {
    // Help requests, including those aimed at a subcommand.
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (*run_cmd) {
      if (*seed_opt) run.seed = seed;
      if (*trials_opt) run.trials = trials;
      if (*out_opt) run.out = out_dir;
      return do_run(run, out);
    }
    if (*describe_cmd) {
      do_describe(kind, as_json, out);
      return kExitOk;
    }
    do_list(out);
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidArgument& e) {
    err << "invalid config: " << e.what() << "\n";
    return kExitValidation;
  } catch (const LeakageError& e) {
    err << "numerical failure: " << e.what() << " (raise the Fock dimension)\n";
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace phonon
