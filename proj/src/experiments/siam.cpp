// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

// Anderson impurity experiment: SKQD in the momentum basis, then again in
// natural orbitals built from the first pass, against sector ED.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"
#include "skqd/experiments.hpp"
#include "skqd/fermion.hpp"
#include "skqd/sqd.hpp"

namespace skqd::experiments {

using detail::relative_error;
using detail::Stopwatch;

namespace {

constexpr double kLevelTie = 1e-12;

EvolutionPlan make_plan(const SiamConfig& config, const SectorHamiltonian& h) {
  if (!config.method) return default_plan(h.dim(), config.dt, config.d);
  if (*config.method == EvolutionMethod::kTrotter2) return trotter_plan(h, config.dt, config.d);
  auto plan = default_plan(h.dim(), config.dt, config.d);
  plan.method = *config.method;
  return plan;
}

// Momentum modes by single-particle level; the impurity level carries the
// U/2 Hartree shift and goes first among equal levels.
std::vector<int> momentum_fill_order(const FermionHamiltonian& h_momentum, double u) {
  RVector levels = h_momentum.h_one().diagonal();
  levels[0] += 0.5 * u;
  std::vector<int> order(static_cast<std::size_t>(levels.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(levels[a] - levels[b]) > kLevelTie) return levels[a] < levels[b];
    return a == 0 && b != 0;
  });
  return order;
}

// Bath momentum index with the level closest to zero.
int fermi_index(const FermionHamiltonian& h_momentum) {
  const auto& h1 = h_momentum.h_one();
  int best = 0;
  for (int k = 1; k < h_momentum.n_modes() - 1; ++k) {
    if (std::abs(h1(k + 1, k + 1)) < std::abs(h1(best + 1, best + 1))) best = k;
  }
  return best;
}

struct Correlations {
  std::vector<double> spin;
  std::vector<double> density;
};

Correlations correlations(const StateVector& v, int bath_sites, std::span<const BasisRotation> chain) {
  Correlations c;
  for (int j = 0; j < bath_sites; ++j) {
    c.spin.push_back(staggered_spin_correlation(v, j, chain));
    c.density.push_back(staggered_density_correlation(v, j, chain));
  }
  return c;
}

double max_deviation(const Correlations& a, const Correlations& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.spin.size(); ++j) {
    worst = std::max({worst, std::abs(a.spin[j] - b.spin[j]), std::abs(a.density[j] - b.density[j])});
  }
  return worst;
}

}  // namespace

Output run_siam(const SiamConfig& config) {
  Output out;
  out.table = Table({"U", "basis", "sampler", "M", "D", "energy", "reference", "abs_error", "rel_error", "time_s"});
  if (config.correlations) out.correlations = Table({"U", "j", "spin", "spin_ref", "density", "density_ref"});

  const int n_modes = config.bath_sites + 1;
  const auto sector = half_filling_sector(n_modes);
  const auto rule = SectorRule::per_spin(sector->n_up(), sector->n_down());
  const int n_bits = 2 * n_modes;
  const std::uint64_t largest = *std::max_element(config.shots.begin(), config.shots.end());
  Json per_u = Json::array();

  for (double u : config.u) {
    Stopwatch u_clock;
    const auto position = build_siam_position(SiamParameters::particle_hole_symmetric(config.bath_sites, u));
    const auto [momentum, to_momentum] = to_momentum_basis(position);
    const SectorHamiltonian h_momentum(momentum, sector);
    const auto ed = ground_state(h_momentum, 1024, 1e-11);
    const double e0 = ed.energy;
    const int k_fermi = config.k_fermi.value_or(fermi_index(momentum));
    require(k_fermi >= 1 && k_fermi + 1 < config.bath_sites, ErrorKind::kInvalidParameter,
            "k_fermi must leave a bath mode on each side");
    const std::vector<BasisRotation> momentum_chain{to_momentum};
    const auto reference = correlations(ed.vector, config.bath_sites, momentum_chain);

    Json entry{{"U", u}, {"e0", e0}, {"k_fermi", k_fermi}, {"ed_residual", ed.residual}};
    Json stages = Json::array();

    // One SKQD pass: rows for every M plus the matched uniform baseline.
    auto run_stage = [&](const std::string& label, const SectorHamiltonian& h, const StateVector& psi0,
                         std::span<const BasisRotation> chain) {
      Stopwatch evolve_clock;
      const auto states = krylov_states(h, psi0, make_plan(config, h));
      const double evolve_time = evolve_clock.seconds();
      Json stage{{"basis", label}, {"evolution_time_s", evolve_time}};
      if (label == "momentum") stage["overlap"] = std::norm(ed.vector.amplitudes.dot(psi0.amplitudes));
      Json errors = Json::object();
      Json uniform_errors = Json::object();
      Json deviations = Json::object();
      for (const auto shots : config.shots) {
        Stopwatch clock;
        SkqdOptions options;
        options.d_max = config.d_max;
        const auto result = skqd_from_states(h, states, shots, config.seed, options);
        const double energy = result.problem.energy;
        out.table.add({u, label, std::string("skqd"), static_cast<std::int64_t>(shots),
                       static_cast<std::int64_t>(result.problem.dim()), energy, e0, std::abs(energy - e0),
                       relative_error(energy, e0), clock.seconds()});
        errors[std::to_string(shots)] = relative_error(energy, e0);
        if (label == "natural" && config.correlations) {
          const auto measured = correlations(result.problem.embed(), config.bath_sites, chain);
          deviations[std::to_string(shots)] = max_deviation(measured, reference);
          if (shots == largest) {
            for (int j = 0; j < config.bath_sites; ++j) {
              const auto js = static_cast<std::size_t>(j);
              out.correlations->add({u, std::int64_t{j}, measured.spin[js], reference.spin[js],
                                     measured.density[js], reference.density[js]});
            }
          }
        }
        if (config.uniform_baseline) {
          Stopwatch uniform_clock;
          const auto draws = uniform_baseline(n_bits, shots * static_cast<std::uint64_t>(config.d), config.seed, rule);
          const auto basis = subspace_basis(draws, h.basis(), result.problem.dim());
          const auto baseline = solve_on_basis(h, basis);
          out.table.add({u, label, std::string("uniform"), static_cast<std::int64_t>(shots),
                         static_cast<std::int64_t>(baseline.dim()), baseline.energy, e0,
                         std::abs(baseline.energy - e0), relative_error(baseline.energy, e0),
                         uniform_clock.seconds()});
          uniform_errors[std::to_string(shots)] = relative_error(baseline.energy, e0);
        }
      }
      stage["rel_error"] = errors;
      if (config.uniform_baseline) stage["uniform_rel_error"] = uniform_errors;
      if (!deviations.empty()) stage["correlation_max_deviation"] = deviations;
      stages.push_back(stage);
      return states;
    };

    const auto momentum_psi0 = siam_initial_state(sector, momentum_fill_order(momentum, u));
    const auto momentum_states = run_stage("momentum", h_momentum, momentum_psi0, momentum_chain);

    // Natural orbitals from the first-pass subspace ground state.
    const auto first = skqd_from_states(h_momentum, momentum_states, config.stage1_shots, config.seed + 1);
    const auto gamma = one_rdm(first.problem.embed());
    const auto [natural, to_natural] = to_k_adjacent_natural_orbitals(momentum, gamma, k_fermi);
    const RMatrix rotated = to_natural.xi.transpose() * gamma.gamma * to_natural.xi;
    const SectorHamiltonian h_natural(natural, sector);
    const auto natural_psi0 = siam_initial_state(sector, fill_order_by_occupation(rotated.diagonal()));
    const std::vector<BasisRotation> natural_chain{to_momentum, to_natural};
    run_stage("natural", h_natural, natural_psi0, natural_chain);

    entry["stages"] = stages;
    entry["time_s"] = u_clock.seconds();
    per_u.push_back(entry);
  }
  out.summary = Json{{"sector_dim", sector->dim()},
                     {"method", config.method ? to_string(*config.method) : "auto"},
                     {"largest_M", largest},
                     {"per_U", per_u}};
  return out;
}

}  // namespace skqd::experiments
