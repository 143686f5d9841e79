// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "skqd/operator.hpp"
#include "skqd/pauli.hpp"
#include "skqd/state.hpp"

namespace skqd {

enum class EvolutionMethod { kExactEigen, kLanczosExpmv, kTrotter2 };

const char* to_string(EvolutionMethod method);
EvolutionMethod parse_evolution_method(std::string_view name);

struct EvolutionPlan {
  double dt = 0.0;
  int steps = 1;  // d
  EvolutionMethod method = EvolutionMethod::kLanczosExpmv;
  double tolerance = 1e-10;
  // trotter2 only: e^{-i dt/2 H2} e^{-i dt H1} e^{-i dt/2 H2}
  std::shared_ptr<const Hamiltonian> h1;
  std::shared_ptr<const Hamiltonian> h2;
  // exact-eigen refuses larger spaces.
  std::size_t exact_eigen_max_dim = 4096;
};

/// exact-eigen up to this dimension when no method is named.
inline constexpr std::size_t kDefaultExactEigenDim = 1024;

/// Plan with the default method for a space of dimension `dim`.
EvolutionPlan default_plan(std::size_t dim, double dt, int steps);

/// Trotter plan with one-body / two-body split of a sector Hamiltonian.
EvolutionPlan trotter_plan(const SectorHamiltonian& h, double dt, int steps);

/// pi / (Emax - E0).
double choose_dt(const SpectrumSummary& summary);

/// psi_k = exp(-i k H dt) psi_0 for k = 0..steps-1.
std::vector<StateVector> krylov_states(const Hamiltonian& h, const StateVector& psi0,
                                       const EvolutionPlan& plan);

/// Equal-weight superposition of the Fermi sea and all single excitations of
/// its top 3 occupied modes into the 4 lowest empty ones, per spin.
/// `fill_order` lists modes from lowest to highest single-particle level.
StateVector siam_initial_state(const SectorHandle& sector, std::span<const int> fill_order);

/// Momentum basis: bath modes in ascending energy with the impurity placed
/// right after bath index k_f.
StateVector siam_initial_state(const SectorHandle& sector, int k_fermi);

/// Modes sorted by descending occupation (stable).
std::vector<int> fill_order_by_occupation(const RVector& occupations);

using Counts = std::map<ConfigKey, std::uint64_t>;

/// M Born-rule draws in v's basis. Draw m of (seed, stream) is the same for
/// any M > m.
Counts born_sample(const StateVector& v, std::uint64_t shots, std::uint64_t seed,
                   std::uint64_t stream = 0);

}  // namespace skqd
