// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment drivers shared by the CLI and the acceptance suite. Each kind has
// a config struct (read from strict JSON) and a runner returning CSV tables
// plus a JSON summary.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "skqd/krylov.hpp"
#include "skqd/propagate.hpp"

namespace skqd::experiments {

using Json = nlohmann::ordered_json;

/// Floats are written with 17 significant digits.
std::string format_number(double v);

using Cell = std::variant<std::int64_t, double, std::string>;

class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<Cell> row);

  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] std::string csv() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

struct Seeds {
  std::uint64_t base = 1;
  std::size_t count = 1;
  [[nodiscard]] std::uint64_t at(std::size_t i) const { return base + i; }
};

struct BenchTfimConfig {
  std::vector<int> n{6, 8, 10, 12};
  double h1 = 0.1;
  double h2 = 0.1;
  int d = 15;
  std::optional<double> dt;  // nullopt = pi / width
  std::vector<std::uint64_t> shots{10, 100, 1000};
  Seeds seeds{1, 100};
  double kqd_shots = 5000.0;  // sigma = 1 / sqrt(kqd_shots)
  std::vector<NoiseTarget> noise_targets{NoiseTarget::kHAndS, NoiseTarget::kHOnly};
  std::optional<double> threshold;
};

struct KqdConfig {
  int n = 8;
  double h1 = 0.1;
  double h2 = 0.1;
  std::vector<int> d{3, 5, 7, 9, 11, 13, 15};
  std::optional<double> dt;
  double sigma = 0.0;
  NoiseTarget noise_target = NoiseTarget::kHAndS;
  std::uint64_t seed = 1;
  std::optional<double> threshold;
};

struct SkqdConfig {
  std::vector<int> n{4, 6, 8, 10};
  std::vector<std::pair<double, double>> fields{{0.1, 0.1}, {0.3, 0.1}};
  std::vector<int> d{5, 10, 15};
  std::optional<double> dt;
  std::vector<std::uint64_t> shots{10, 100, 1000};
  Seeds seeds{1, 5};
  double alpha_target = 0.99;
  std::optional<std::size_t> d_max;
  double eta = 0.1;
};

struct SiamConfig {
  int bath_sites = 7;
  std::vector<double> u{1.0, 3.0, 7.0, 10.0};
  int d = 25;
  double dt = 0.1;
  std::optional<EvolutionMethod> method;  // nullopt = size-based default
  std::vector<std::uint64_t> shots{100, 1000, 10000, 100000};
  std::uint64_t seed = 1;
  std::uint64_t stage1_shots = 1000;
  std::optional<int> k_fermi;  // nullopt = bath mode closest to zero energy
  bool uniform_baseline = true;
  bool correlations = true;
  std::optional<std::size_t> d_max;
};

struct VerifyBoundsConfig {
  std::string grid = "full";  // small | full
  std::uint64_t seed = 1;
};

struct SparsityEConfig {
  std::vector<int> n{8, 9, 10, 11, 12, 13, 14};
  std::vector<double> h{0.1, 0.3, 0.5};
};

using ExperimentConfig =
    std::variant<BenchTfimConfig, KqdConfig, SkqdConfig, SiamConfig, VerifyBoundsConfig, SparsityEConfig>;

std::string kind_of(const ExperimentConfig& config);

/// Strict reader: unknown keys, wrong types and invalid values raise kConfig.
ExperimentConfig parse_config(const Json& doc);

/// Fully resolved config (defaults filled in); parse_config(to_json(c)) == c.
Json to_json(const ExperimentConfig& config);

void override_seed(ExperimentConfig& config, std::uint64_t seed);

struct Output {
  Table table;
  std::optional<Table> correlations;
  Json summary = Json::object();
  std::optional<Json> report;  // verify-bounds records
};

Output run_bench_tfim(const BenchTfimConfig& config);
Output run_kqd(const KqdConfig& config);
Output run_skqd(const SkqdConfig& config);
Output run_siam(const SiamConfig& config);
Output run_verify_bounds(const VerifyBoundsConfig& config);
Output run_sparsity_e(const SparsityEConfig& config);

Output run(const ExperimentConfig& config);

}  // namespace skqd::experiments
