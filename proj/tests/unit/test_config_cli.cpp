// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "phonon/cli.hpp"
#include "phonon/config.hpp"
#include "phonon/errors.hpp"
#include "phonon/experiments.hpp"
#include "phonon/units.hpp"

namespace phonon {
namespace {

namespace fs = std::filesystem;

const std::string kConfigDir = std::string(PHONON_SOURCE_DIR) + "/configs";

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "phonon_sim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("phonon_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

std::string write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Units, Conversions) {
  const Dimension f = Dimension::kAngularFrequency;
  EXPECT_DOUBLE_EQ(quantity_to_si(Json{{"value", 2.0}, {"unit", "kHz"}}, f, "x"), units::khz_to_rad(2.0));
  EXPECT_DOUBLE_EQ(quantity_to_si(Json{{"value", 3.0}, {"unit", "rad/s"}}, f, "x"), 3.0);
  EXPECT_DOUBLE_EQ(quantity_to_si(Json{{"value", 100.0}, {"unit", "cm^-1"}}, f, "x"), units::wavenumber_to_rad(100.0));
  EXPECT_DOUBLE_EQ(quantity_to_si(Json{{"value", 5.0}, {"unit", "us"}}, Dimension::kTime, "x"), 5e-6);
  EXPECT_DOUBLE_EQ(quantity_to_si(Json{{"value", 316.0}, {"unit", "nK"}}, Dimension::kTemperature, "x"), 316e-9);
  EXPECT_DOUBLE_EQ(quantity_to_si(Json{{"value", 2.0}, {"unit", "amu"}}, Dimension::kMass, "x"),
                   2.0 * units::kAtomicMassUnit);
  EXPECT_DOUBLE_EQ(quantity_to_si(Json{{"value", 180.0}, {"unit", "deg"}}, Dimension::kAngle, "x"), units::kPi);
  EXPECT_EQ(quantity_list_to_si(Json{{"value", {1.0, 2.0}}, {"unit", "ms"}}, Dimension::kTime, "x"),
            (std::vector<double>{1e-3, 2e-3}));
  EXPECT_THROW(quantity_to_si(Json{{"value", 1.0}, {"unit", "ms"}}, f, "x"), InvalidArgument);
  EXPECT_THROW(quantity_to_si(Json{{"value", 1.0}, {"unit", "furlong"}}, Dimension::kTime, "x"), InvalidArgument);
  EXPECT_THROW(quantity_to_si(Json(1.0), Dimension::kTime, "x"), InvalidArgument);
}

TEST(Config, ShippedConfigsRoundTrip) {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(kConfigDir)) {
    SCOPED_TRACE(entry.path().string());
    const ExperimentConfig a = parse_config(read_json_file(entry.path().string()), experiment_registry());
    const ExperimentConfig b = parse_config(a.to_json(), experiment_registry());
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
    ++seen;
  }
  EXPECT_EQ(seen, 12);
}

TEST(Config, DefaultsFilled) {
  const ExperimentConfig c = parse_config(Json{{"kind", "gkp"}}, experiment_registry());
  const KindSchema& s = find_schema(experiment_registry(), "gkp");
  for (const auto& p : s.params) {
    if (!p.default_value.is_null()) EXPECT_TRUE(c.params.contains(p.name)) << p.name;
  }
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.output_dir, "out");
  EXPECT_TRUE(c.register_spec.is_null());
}

TEST(Config, RegisterRules) {
  const auto& reg = experiment_registry();
  EXPECT_THROW(parse_config(Json{{"kind", "noon"}}, reg), InvalidArgument);
  EXPECT_THROW(parse_config(Json{{"kind", "gkp"}, {"register", {{"modes", {{{"dim", 4}}}}}}}, reg), InvalidArgument);
  const ExperimentConfig c =
      parse_config(Json{{"kind", "noon"}, {"register", {{"modes", {{{"dim", 5}}, {{"dim", 5}}}}}}}, reg);
  const ModeRegister r = build_register(c.register_spec);
  EXPECT_EQ(r.num_modes(), 2);
  EXPECT_DOUBLE_EQ(r.modes()[0].frequency, units::khz_to_rad(1000.0));
  EXPECT_DOUBLE_EQ(r.modes()[0].lamb_dicke, 0.1);
}

TEST(Config, Rejections) {
  const auto& reg = experiment_registry();
  EXPECT_THROW(parse_config(Json{{"kind", "gkp"}, {"colour", 1}}, reg), InvalidArgument);
  EXPECT_THROW(parse_config(Json{{"kind", "gkp"}, {"params", {{"nonsense", 1}}}}, reg), InvalidArgument);
  EXPECT_THROW(parse_config(Json{{"kind", "nosuch"}}, reg), InvalidArgument);
  EXPECT_THROW(parse_config(Json{{"kind", "gkp"}, {"params", {{"dim", "eighty"}}}}, reg), InvalidArgument);
  EXPECT_THROW(parse_config(Json{{"kind", "jarzynski"}, {"params", {{"tau", 25.0}}}}, reg), InvalidArgument);
  EXPECT_THROW(parse_config(Json{{"kind", "jarzynski"}, {"params", {{"protocol", "gradual"}}}}, reg), InvalidArgument);
  EXPECT_THROW(parse_config(Json::array(), reg), InvalidArgument);
}

TEST(Csv, Formatting) {
  const Table t{"x", {"t[s]", "p"}, {{0.1, -0.0}, {1e-20, 2.0}}};
  EXPECT_EQ(format_csv(t), "t[s],p\n0.1,0\n1e-20,2\n");
}

TEST(Cli, VersionListDescribe) {
  const CliRun v = cli({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_EQ(v.out, version_string() + "\n");
  const CliRun l = cli({"list"});
  EXPECT_EQ(l.code, kExitOk);
  EXPECT_EQ(std::count(l.out.begin(), l.out.end(), '\n'), 11);
  EXPECT_EQ(cli({"describe", "vibronic"}).code, kExitOk);
  const CliRun j = cli({"describe", "fridge", "--json"});
  EXPECT_EQ(j.code, kExitOk);
  EXPECT_EQ(Json::parse(j.out)["trials_param"], "trajectories");
  EXPECT_EQ(cli({"describe", "nosuch"}).code, kExitValidation);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitParse);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitParse);
  EXPECT_EQ(cli({"run"}).code, kExitParse);
  EXPECT_EQ(cli({"run", "x.json", "--seed", "abc"}).code, kExitParse);
}

TEST(Cli, DocumentErrors) {
  TempDir tmp;
  EXPECT_EQ(cli({"run", write(tmp / "bad.json", "{\"kind\": ")}).code, kExitParse);
  EXPECT_EQ(cli({"run", (tmp / "missing.json").string()}).code, kExitParse);
  EXPECT_EQ(cli({"run", write(tmp / "unknown.json", R"({"kind": "gkp", "extra": 1})")}).code, kExitValidation);
  EXPECT_EQ(cli({"run", write(tmp / "kind.json", R"({"kind": "teleport"})")}).code, kExitValidation);
  const std::string gkp = write(tmp / "gkp.json", R"({"kind": "gkp", "params": {"dim": 12}})");
  EXPECT_EQ(cli({"run", gkp, "--out", (tmp / "o").string()}).code, kExitNumerical);
  EXPECT_EQ(cli({"run", gkp, "--trials", "10"}).code, kExitValidation);
}

TEST(Cli, RunIsDeterministic) {
  TempDir tmp;
  const std::string cfg = kConfigDir + "/cbs_truth_table.json";
  ASSERT_EQ(cli({"run", cfg, "--out", (tmp / "a").string(), "--trials", "200", "--seed", "9"}).code, kExitOk);
  ASSERT_EQ(cli({"run", cfg, "--out", (tmp / "b").string(), "--trials", "200", "--seed", "9"}).code, kExitOk);
  for (const std::string f : {"summary.json", "truth_table.csv", "ancilla_parity.csv"}) {
    EXPECT_EQ(slurp(tmp / "a" / f), slurp(tmp / "b" / f)) << f;
  }
  const Json s = Json::parse(slurp(tmp / "a" / "summary.json"));
  EXPECT_EQ(s["seed"], 9);
  EXPECT_EQ(s["config"]["params"]["shots"], 200);
  EXPECT_FALSE(s["config"].contains("output_dir"));
  EXPECT_EQ(s["config_sha256"], sha256_hex(s["config"].dump()));
  EXPECT_EQ(s["version"], version_string());
}

TEST(Cli, Sha256) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace phonon
