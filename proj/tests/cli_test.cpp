#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "aqec/device/profile.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(AQEC_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) o.output += buf.data();
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

// Fresh scratch directory per test, removed on destruction.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name)
      : path(fs::temp_directory_path() / ("aqec_cli_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  std::string sub(const std::string& s) const { return (path / s).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string write_profile(const ScratchDir& d, const std::string& name, const nlohmann::json& j) {
  const std::string path = d.sub(name + ".json");
  write_text(path, j.dump(2));
  return path;
}

}  // namespace

TEST(Cli, BudgetReportsTotalFidelity) {
  ScratchDir d("budget");
  const auto o = run_cli("run budget --profile paper-default --out " + d.sub("out"));
  EXPECT_EQ(o.status, 0) << o.output;
  EXPECT_NE(o.output.find("87.2%"), std::string::npos) << o.output;
  EXPECT_TRUE(fs::exists(d.path / "out" / "manifest.json"));
}

TEST(Cli, RateReportsOptimalInterval) {
  ScratchDir d("rate");
  const auto o = run_cli("run rate --epsilon 0.076 --gamma 2x1380 --out " + d.sub("out"));
  EXPECT_EQ(o.status, 0) << o.output;
  EXPECT_NE(o.output.find("tau_opt = 269.0 us"), std::string::npos) << o.output;
}

TEST(Cli, MalformedConfigLeavesNoOutput) {
  ScratchDir d("malformed");
  write_text(d.path / "bad.json", "{ \"kind\": \"simulate\", ");
  const auto o = run_cli("run simulate --config " + d.sub("bad.json") + " --out " + d.sub("out"));
  EXPECT_EQ(o.status, 1) << o.output;
  EXPECT_FALSE(fs::exists(d.path / "out"));
}

TEST(Cli, UnknownKeyIsNamed) {
  ScratchDir d("unknown_key");
  write_text(d.path / "cfg.json", R"({"schema_version": 1, "params": {"t_fee": 100}})");
  const auto o = run_cli("run simulate --config " + d.sub("cfg.json") + " --out " + d.sub("out"));
  EXPECT_EQ(o.status, 1) << o.output;
  EXPECT_NE(o.output.find("params.t_fee"), std::string::npos) << o.output;
  EXPECT_FALSE(fs::exists(d.path / "out"));
}

TEST(Cli, UnknownProfileFails) {
  ScratchDir d("unknown_profile");
  const auto o = run_cli("run rate --profile no-such-device --out " + d.sub("out"));
  EXPECT_EQ(o.status, 1) << o.output;
  EXPECT_FALSE(fs::exists(d.path / "out"));
}

TEST(Cli, ValidateDefaultProfile) {
  const auto o = run_cli("validate --profile paper-default");
  EXPECT_EQ(o.status, 0) << o.output;
  EXPECT_EQ(o.output.find("FAIL"), std::string::npos) << o.output;
  for (const char* check : {"cptp", "knill-laflamme", "gradient", "analytic-decay"}) {
    EXPECT_NE(o.output.find(std::string("PASS ") + check), std::string::npos) << check;
  }
}

TEST(Cli, ValidateNamesModeWithExcessiveT2) {
  ScratchDir d("t2");
  auto j = aqec::to_json(aqec::default_profile());
  for (auto& m : j["modes"]) {
    if (m["name"] == "S2") m["t2_us"] = 3.0 * m["t1_us"].get<double>();
  }
  const auto o = run_cli("validate --profile " + write_profile(d, "t2", j));
  EXPECT_NE(o.status, 0) << o.output;
  EXPECT_NE(o.output.find("mode 'S2'"), std::string::npos) << o.output;
}

TEST(Cli, ValidateNamesAsymmetricKerrPair) {
  ScratchDir d("kerr");
  auto j = aqec::to_json(aqec::default_profile());
  nlohmann::json first;
  for (const auto& e : j["kerr_mhz"]) {
    if (e[0] != e[1]) {
      first = e;
      break;
    }
  }
  ASSERT_FALSE(first.is_null());
  j["kerr_mhz"].push_back({first[1], first[0], first[2].get<double>() + 0.5});
  const auto o = run_cli("validate --profile " + write_profile(d, "kerr", j));
  EXPECT_NE(o.status, 0) << o.output;
  const std::string pair = "(" + first[0].get<std::string>() + ", " +
                           first[1].get<std::string>() + ")";
  EXPECT_NE(o.output.find("asymmetric Kerr table for pair " + pair), std::string::npos)
      << o.output;
}

TEST(Cli, ManifestDescribesRun) {
  ScratchDir d("manifest");
  const auto o = run_cli("run simulate --seed 7 --out " + d.sub("out"));
  ASSERT_EQ(o.status, 0) << o.output;
  const auto m = nlohmann::json::parse(slurp(d.path / "out" / "manifest.json"));
  EXPECT_EQ(m["kind"], "simulate");
  EXPECT_EQ(m["seed"], 7);
  EXPECT_EQ(m["schema_version"], 1);
  EXPECT_TRUE(m["params"].contains("t_fe"));
  EXPECT_EQ(aqec::device_params_from_json(m["profile"]).name,
            aqec::default_profile().name);
  ASSERT_TRUE(m["files"].contains("rounds.csv"));
  EXPECT_EQ(m["files"]["rounds.csv"]["sha256"].get<std::string>().size(), 64u);
  const std::string csv = slurp(d.path / "out" / "rounds.csv");
  EXPECT_EQ(csv.rfind("#", 0), 0u) << "CSV must start with a units comment";
}

TEST(Cli, IdenticalRunsAreByteIdentical) {
  ScratchDir d("repeat");
  for (const char* out : {"a", "b"}) {
    const auto o = run_cli("run simulate --seed 3 --out " + d.sub(out));
    ASSERT_EQ(o.status, 0) << o.output;
  }
  EXPECT_EQ(slurp(d.path / "a" / "rounds.csv"), slurp(d.path / "b" / "rounds.csv"));
  EXPECT_EQ(slurp(d.path / "a" / "manifest.json"), slurp(d.path / "b" / "manifest.json"));
}

TEST(Cli, ShippedProfileMatchesBuiltIn) {
  const fs::path p = fs::path(AQEC_SOURCE_DIR) / "profiles" / "paper-default.json";
  ASSERT_TRUE(fs::exists(p));
  EXPECT_EQ(aqec::to_json(aqec::load_profile_file(p)),
            aqec::to_json(aqec::default_profile()));
}
