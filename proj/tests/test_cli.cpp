// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "skqd/experiments.hpp"

namespace {

using namespace skqd::experiments;
namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// CSV text with the time_s column dropped.
std::string without_timing(const Table& t) {
  Table copy(t.header());
  const auto skip = t.column("time_s");
  for (const auto& row : t.rows()) {
    auto r = row;
    r[skip] = std::string("-");
    copy.add(r);
  }
  return copy.csv();
}

bool throws_config(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const skqd::Error& e) {
    return e.kind() == skqd::ErrorKind::kConfig;
  }
  return false;
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_TRUE(throws_config(Json{{"kind", "kqd"}, {"n", 6}, {"dtt", 0.1}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "skqd"}, {"seeds", {{"base", 1}, {"cnt", 2}}}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "frobnicate"}}));
  EXPECT_TRUE(throws_config(Json{{"n", 6}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "kqd"}, {"n", "eight"}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "kqd"}, {"dt", -0.1}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "kqd"}, {"noise_target", "S-only"}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "bench-tfim"}, {"M", Json::array()}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "verify-bounds"}, {"grid", "medium"}}));
  EXPECT_TRUE(throws_config(Json{{"kind", "siam"}, {"method", "rk4"}}));
  EXPECT_FALSE(throws_config(Json{{"kind", "kqd"}, {"n", 6}, {"dt", "auto"}}));
}

TEST(Config, ResolvedConfigRoundTrips) {
  for (const char* kind : {"bench-tfim", "kqd", "skqd", "siam", "verify-bounds", "sparsity-e"}) {
    const auto config = parse_config(Json{{"kind", kind}});
    EXPECT_EQ(kind_of(config), kind);
    const Json resolved = to_json(config);
    EXPECT_EQ(to_json(parse_config(resolved)), resolved) << kind;
  }
}

TEST(Config, SeedOverride) {
  auto config = parse_config(Json{{"kind", "skqd"}, {"seeds", {{"base", 3}, {"count", 2}}}});
  override_seed(config, 42);
  EXPECT_EQ(to_json(config)["seeds"]["base"], 42);
  EXPECT_EQ(to_json(config)["seeds"]["count"], 2);
}

TEST(Table, SeventeenDigits) {
  Table t({"a", "b", "c"});
  t.add({std::int64_t{3}, 0.1, std::string("x")});
  EXPECT_EQ(t.csv(), "a,b,c\n3,0.10000000000000001,x\n");
  EXPECT_THROW(t.add({std::int64_t{1}}), skqd::Error);
  EXPECT_THROW((void)t.column("d"), skqd::Error);
}

TEST(Run, DeterministicApartFromTiming) {
  const Json doc{{"kind", "bench-tfim"}, {"n", {4, 6}}, {"M", {10, 100}}, {"seeds", {{"base", 1}, {"count", 6}}}};
  const auto a = run(parse_config(doc));
  const auto b = run(parse_config(doc));
  EXPECT_EQ(without_timing(a.table), without_timing(b.table));
  EXPECT_GT(a.table.rows().size(), 0u);
}

TEST(Run, SkqdGateSmall) {
  const Json doc{{"kind", "skqd"}, {"n", {4, 6}}, {"d", {5}}, {"M", {10, 100}}, {"seeds", {{"base", 1}, {"count", 3}}}};
  const auto out = run(parse_config(doc));
  EXPECT_EQ(out.summary["violations"], 0);
  EXPECT_EQ(out.table.rows().size(), 2u * 2u * 1u * 2u * 3u);
}

TEST(Run, SiamSmoke) {
  const Json doc{{"kind", "siam"}, {"U", {4.0}}, {"d", 3}, {"M", {50, 200}}, {"stage1_M", 100}};
  const auto out = run(parse_config(doc));
  // skqd and uniform rows for two bases and two M.
  EXPECT_EQ(out.table.rows().size(), 8u);
  ASSERT_TRUE(out.correlations.has_value());
  EXPECT_EQ(out.correlations->rows().size(), 7u);
  const auto& t = out.table;
  for (const auto& row : t.rows()) {
    EXPECT_GE(std::get<double>(row[t.column("energy")]), std::get<double>(row[t.column("reference")]) - 1e-9);
  }
  EXPECT_TRUE(throws_config(Json{{"kind", "siam"}, {"L", 5}}));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("skqd_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int skqd(const std::string& args) {
    const std::string cmd = std::string(SKQD_BINARY) + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
                            (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  void write(const std::string& name, const Json& doc) { std::ofstream(dir_ / name) << doc.dump(); }

  fs::path dir_;
};

TEST_F(Cli, RunWritesOutputsAndManifestRegenerates) {
  write("kqd.json", Json{{"kind", "kqd"}, {"n", 6}, {"d", {3, 5}}});
  ASSERT_EQ(skqd("run " + (dir_ / "kqd.json").string() + " --out " + (dir_ / "a").string() + " --threads 1"), 0);
  const auto manifest = Json::parse(slurp(dir_ / "a" / "kqd.manifest.json"));
  EXPECT_EQ(manifest["kind"], "kqd");
  EXPECT_EQ(manifest["threads"], 1);
  EXPECT_EQ(manifest["outputs"], Json::array({"kqd.csv"}));
  EXPECT_TRUE(manifest["config"].contains("threshold"));

  ASSERT_EQ(skqd("run " + (dir_ / "a" / "kqd.manifest.json").string() + " --out " + (dir_ / "b").string()), 0);
  const auto strip = [](const std::string& csv) {
    // Drop the trailing time_s field of each line.
    std::stringstream in(csv), out;
    for (std::string line; std::getline(in, line);) out << line.substr(0, line.rfind(',')) << '\n';
    return out.str();
  };
  EXPECT_EQ(strip(slurp(dir_ / "a" / "kqd.csv")), strip(slurp(dir_ / "b" / "kqd.csv")));
}

TEST_F(Cli, UnknownKeyIsAnError) {
  write("bad.json", Json{{"kind", "kqd"}, {"n", 6}, {"sigmaa", 0.1}});
  EXPECT_NE(skqd("run " + (dir_ / "bad.json").string() + " --out " + dir_.string()), 0);
  EXPECT_NE(slurp(dir_ / "stderr").find("unknown key 'sigmaa'"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "kqd.csv"));
}

TEST_F(Cli, ThreadsFromEnvironmentAndSeedOverride) {
  write("skqd.json", Json{{"kind", "skqd"}, {"n", {4}}, {"d", {5}}, {"M", {10}}, {"seeds", {{"base", 1}, {"count", 2}}}});
  ASSERT_EQ(skqd("run " + (dir_ / "skqd.json").string() + " --out " + dir_.string() + " --seed-override 9"), 0);
  auto manifest = Json::parse(slurp(dir_ / "skqd.manifest.json"));
  EXPECT_EQ(manifest["config"]["seeds"]["base"], 9);
  ASSERT_EQ(::setenv("SKQD_THREADS", "2", 1), 0);
  ASSERT_EQ(skqd("run " + (dir_ / "skqd.json").string() + " --out " + dir_.string()), 0);
  ::unsetenv("SKQD_THREADS");
  manifest = Json::parse(slurp(dir_ / "skqd.manifest.json"));
  EXPECT_EQ(manifest["threads"], 2);
}

TEST_F(Cli, VerifyBoundsSmallGrid) {
  ASSERT_EQ(skqd("verify-bounds --grid small --out " + dir_.string()), 0);
  const auto report = Json::parse(slurp(dir_ / "verify-bounds.report.json"));
  ASSERT_EQ(report["sweeps"].size(), 6u);
  for (const auto& s : report["sweeps"]) {
    EXPECT_EQ(s["violations"], 0) << s["sweep"];
    for (const auto& r : s["records"]) {
      ASSERT_TRUE(r.contains("inputs") && r.contains("measured") && r.contains("bound") && r.contains("pass"));
    }
  }
  EXPECT_NE(skqd("verify-bounds --grid medium --out " + dir_.string()), 0);
}

}  // namespace
