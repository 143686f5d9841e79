// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "common.hpp"
#include "skqd/bounds.hpp"
#include "skqd/experiments.hpp"

namespace skqd::experiments {

using detail::Stopwatch;

namespace {

struct Grid {
  std::size_t instances;
  std::size_t trials;
  int truncation_qubits;
  int chebyshev_points;
  int chebyshev_degree;
};

Grid grid_for(const std::string& name) {
  if (name == "small") return {100, 2000, 6, 200, 20};
  return {1000, 10000, 8, 1000, 50};
}

Json record_json(const CheckRecord& r) {
  Json inputs = Json::object();
  for (const auto& [key, value] : r.inputs) inputs[key] = value;
  return Json{{"check", r.check}, {"inputs", inputs}, {"measured", r.measured}, {"bound", r.bound}, {"pass", r.pass}};
}

}  // namespace

Output run_verify_bounds(const VerifyBoundsConfig& config) {
  Output out;
  out.table = Table({"sweep", "instances", "records", "violations", "worst_margin", "time_s"});
  const Grid grid = grid_for(config.grid);
  Json sweeps = Json::array();
  std::size_t violations = 0;

  auto record = [&](auto&& make) {
    Stopwatch clock;
    const SweepSummary s = make();
    const double elapsed = clock.seconds();
    violations += s.violations;
    out.table.add({s.name, static_cast<std::int64_t>(s.instances), static_cast<std::int64_t>(s.records.size()),
                   static_cast<std::int64_t>(s.violations), s.worst_margin, elapsed});
    Json records = Json::array();
    for (const auto& r : s.records) records.push_back(record_json(r));
    sweeps.push_back(Json{{"sweep", s.name},
                          {"instances", s.instances},
                          {"violations", s.violations},
                          {"worst_margin", s.worst_margin},
                          {"records", records}});
  };
  record([&] { return verify_state_closeness(grid.instances, config.seed); });
  record([&] { return verify_sparsity_transfer(grid.instances, config.seed); });
  record([&] { return verify_bitstring_coverage(grid.instances, config.seed); });
  record([&] { return verify_failure_probability(grid.trials, config.seed); });
  record([&] { return verify_truncation_energy(config.seed, grid.truncation_qubits); });
  record([&] { return verify_chebyshev(grid.chebyshev_points, grid.chebyshev_degree); });

  out.summary = Json{{"grid", config.grid}, {"slack", kBoundSlack}, {"violations", violations}};
  out.report = Json{{"grid", config.grid}, {"seed", config.seed}, {"slack", kBoundSlack}, {"sweeps", sweeps}};
  return out;
}

Output run_sparsity_e(const SparsityEConfig& config) {
  Output out;
  out.table = Table({"n", "h", "k", "S", "bound", "pass", "M_n", "closed_form", "deviation"});
  std::size_t checks = 0;
  std::size_t violations = 0;
  Json deviation = Json::object();
  Json monotone = Json::object();
  for (double h : config.h) {
    // Infinite-chain magnetisation below the critical field.
    const double closed = h < 1.0 ? std::pow(1.0 - h * h, 0.125) : 0.0;
    Json per_n = Json::object();
    double previous = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (int n : config.n) {
      const auto q = magnetization_sparsity(h, n);
      const double dev = std::abs(q.magnetization - closed);
      for (int k = 0; 2 * k < n; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const bool pass = q.tail[kk] <= q.bound[kk] + kBoundSlack;
        ++checks;
        if (!pass) ++violations;
        out.table.add({std::int64_t{n}, h, std::int64_t{k}, q.tail[kk], q.bound[kk], std::int64_t{pass ? 1 : 0},
                       q.magnetization, closed, dev});
      }
      per_n[std::to_string(n)] = dev;
      decreasing = decreasing && dev < previous;
      previous = dev;
    }
    deviation[Json(h).dump()] = per_n;
    monotone[Json(h).dump()] = decreasing;
  }
  out.summary = Json{{"checks", checks},
                     {"violations", violations},
                     {"deviation", deviation},
                     {"deviation_decreasing", monotone}};
  return out;
}

}  // namespace skqd::experiments
