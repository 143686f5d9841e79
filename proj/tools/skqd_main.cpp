// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

// skqd run <config.json> [--out DIR] [--threads N] [--seed-override S]
// skqd verify-bounds [--grid small|full] [--out DIR] [--threads N]

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "skqd/experiments.hpp"
#include "skqd/kernels.hpp"

namespace fs = std::filesystem;
using skqd::experiments::Json;

namespace {

constexpr int kManifestVersion = 1;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

Json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw skqd::Error(skqd::ErrorKind::kConfig, "cannot read " + path.string());
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw skqd::Error(skqd::ErrorKind::kConfig, path.string() + ": " + e.what());
  }
}

// SKQD_THREADS applies when --threads is absent.
int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SKQD_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw skqd::Error(skqd::ErrorKind::kConfig, "SKQD_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  return skqd::kernels::max_threads();
}

int execute(const skqd::experiments::ExperimentConfig& config, const fs::path& out_dir, int threads) {
  namespace ex = skqd::experiments;
  skqd::kernels::set_threads(threads);
  const std::string kind = ex::kind_of(config);
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const ex::Output result = ex::run(config);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(out_dir);
  Json outputs = Json::array();
  write_text(out_dir / (kind + ".csv"), result.table.csv());
  outputs.push_back(kind + ".csv");
  if (result.correlations) {
    write_text(out_dir / (kind + ".correlations.csv"), result.correlations->csv());
    outputs.push_back(kind + ".correlations.csv");
  }
  if (result.report) {
    write_text(out_dir / (kind + ".report.json"), result.report->dump(2) + "\n");
    outputs.push_back(kind + ".report.json");
  }
  const Json manifest{{"manifest_version", kManifestVersion},
                      {"tool", "skqd"},
                      {"version", SKQD_VERSION},
                      {"kind", kind},
                      {"config", ex::to_json(config)},
                      {"threads", threads},
                      {"wall_clock", {{"started_utc", started}, {"elapsed_s", elapsed}}},
                      {"outputs", outputs},
                      {"summary", result.summary}};
  write_text(out_dir / (kind + ".manifest.json"), manifest.dump(2) + "\n");
  std::cout << kind << ": " << result.table.rows().size() << " rows in " << elapsed << " s -> " << out_dir.string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  namespace ex = skqd::experiments;
  CLI::App app{"Sample-based Krylov quantum diagonalization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  std::uint64_t seed_override = 0;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config (or a previous manifest)");
  run->add_option("config", config_path, "Config or manifest JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed-override", seed_override, "Replace the config's base seed");

  std::string grid = "full";
  auto* verify = app.add_subcommand("verify-bounds", "Randomised sweeps of the error-bound inequalities");
  verify->add_option("--grid", grid, "Sweep size")->check(CLI::IsMember({"small", "full"}));
  verify->add_option("--out", out_dir, "Output directory");
  verify->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      Json doc = read_json(config_path);
      if (doc.is_object() && doc.contains("manifest_version")) doc = doc.at("config");
      auto config = ex::parse_config(doc);
      if (seed_opt->count() > 0) ex::override_seed(config, seed_override);
      return execute(config, out_dir, resolve_threads(threads));
    }
    ex::VerifyBoundsConfig config;
    config.grid = grid;
    return execute(config, out_dir, resolve_threads(threads));
  } catch (const std::exception& e) {
    std::cerr << "skqd: error: " << e.what() << "\n";
    return 2;
  }
}
