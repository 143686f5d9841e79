// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "skqd/operator.hpp"
#include "skqd/propagate.hpp"

namespace skqd {

enum class NoiseTarget { kHOnly, kHAndS };

const char* to_string(NoiseTarget target);
NoiseTarget parse_noise_target(std::string_view name);

/// Projected pair (H~, S~) over d Krylov states.
struct KrylovMatrices {
  int d = 0;
  CMatrix h;
  CMatrix s;
  double noise_sigma = 0.0;
  bool toeplitz = false;
};

/// Pairwise inner products <psi_j|H|psi_k>, <psi_j|psi_k>.
KrylovMatrices assemble(const Hamiltonian& h, std::span<const StateVector> states);

/// First row from <psi_0|psi_m> and <psi_0|H|psi_m>, mirrored. Valid for exact
/// time evolution, where U^m commutes with H.
KrylovMatrices assemble_toeplitz(const Hamiltonian& h, std::span<const StateVector> states);

/// Gaussian N(0, sigma) on real and imaginary parts of the upper triangle and
/// on the real diagonal, then mirrored to stay Hermitian.
KrylovMatrices inject_noise(const KrylovMatrices& m, double sigma, std::uint64_t seed,
                            NoiseTarget target = NoiseTarget::kHAndS);

struct GevpSolution {
  double energy = 0.0;
  CVector coeffs;
  int kept_dim = 0;
  double threshold_used = 0.0;
};

/// 1e-12 noiseless, max(1e-12, 5 sigma) otherwise.
double default_threshold(double sigma);

/// Canonical orthogonalization: drop S~ eigenvalues <= threshold.
GevpSolution solve_gevp(const KrylovMatrices& m, double threshold);

struct KqdOptions {
  double sigma = 0.0;
  NoiseTarget target = NoiseTarget::kHAndS;
  std::uint64_t seed = 0;
  std::optional<double> threshold;
  std::optional<EvolutionMethod> method;
};

GevpSolution kqd_estimate(const Hamiltonian& h, const StateVector& psi0, int d, double dt,
                          const KqdOptions& options = {});

}  // namespace skqd
