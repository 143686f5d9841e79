// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skqd/linalg.hpp"
#include "skqd/operator.hpp"
#include "skqd/propagate.hpp"

namespace skqd {

/// Bitstring -> count. Bitstrings follow to_bitstring() of the source basis.
struct SampleSet {
  struct Draw {
    int krylov_index = 0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
  };

  int n_bits = 0;
  std::map<std::string, std::uint64_t> counts;
  std::vector<Draw> provenance;

  [[nodiscard]] std::uint64_t total() const;
  [[nodiscard]] std::size_t distinct() const { return counts.size(); }

  void add(std::string bits, std::uint64_t count);
  void merge(const SampleSet& other);

  /// "bitstring\tcount" lines, lexicographic.
  [[nodiscard]] std::string serialize() const;
  static SampleSet parse(std::string_view text);
  void write(const std::filesystem::path& path) const;
  static SampleSet read(const std::filesystem::path& path);
};

/// Samples from every state: stream k of `seed` for state k.
SampleSet collect_samples(std::span<const StateVector> states, std::uint64_t shots, std::uint64_t seed);

/// Allowed Hamming weights: per spin half (up half first) or in total.
struct SectorRule {
  int n_up = -1;
  int n_down = -1;
  int total_weight = -1;

  static SectorRule per_spin(int n_up, int n_down) { return {n_up, n_down, -1}; }
  static SectorRule total(int weight) { return {-1, -1, weight}; }
  [[nodiscard]] bool accepts(std::string_view bits) const;
};

SampleSet uniform_baseline(int n_bits, std::uint64_t total, std::uint64_t seed,
                           const std::optional<SectorRule>& rule = std::nullopt);

struct PostselectResult {
  SampleSet kept;
  double discarded_fraction = 0.0;
  bool empty = false;
};

PostselectResult postselect(const SampleSet& samples, const SectorRule& rule);

/// Flips every bit of every shot independently with probability p.
SampleSet corrupt(const SampleSet& samples, double flip_probability, std::uint64_t seed);

/// Keys of the sampled bitstrings, ascending. With `d_max`, only the
/// d_max most-sampled strings are kept (ties: lexicographic).
std::vector<ConfigKey> subspace_basis(const SampleSet& samples, const BasisTag& basis,
                                      std::optional<std::size_t> d_max = std::nullopt);

/// <b_i|H|b_j> over a strictly increasing key list.
linalg::CsrMatrix project_hamiltonian(const Hamiltonian& h, std::span<const ConfigKey> basis);

struct SubspaceSolution {
  double energy = 0.0;
  CVector coeffs;
  double residual = 0.0;
};

inline constexpr Eigen::Index kDenseSubspaceLimit = 2000;

SubspaceSolution solve_subspace(const linalg::CsrMatrix& h_proj, double tolerance = 1e-9);

struct SubspaceProblem {
  BasisTag basis_tag;
  std::vector<ConfigKey> basis;
  linalg::CsrMatrix h_proj;
  double energy = 0.0;
  CVector coeffs;
  double residual = 0.0;

  [[nodiscard]] std::size_t dim() const { return basis.size(); }
  /// Ground vector written into the full basis.
  [[nodiscard]] StateVector embed() const;
};

SubspaceProblem solve_on_basis(const Hamiltonian& h, std::vector<ConfigKey> basis);

struct SkqdOptions {
  std::optional<SectorRule> postselect;
  std::optional<std::size_t> d_max;
  double corruption = 0.0;
};

struct SkqdResult {
  SubspaceProblem problem;
  SampleSet samples;
  double discarded_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Sample -> (postselect) -> project -> solve on precomputed Krylov states.
SkqdResult skqd_from_states(const Hamiltonian& h, std::span<const StateVector> states, std::uint64_t shots,
                            std::uint64_t seed, const SkqdOptions& options = {});

SkqdResult skqd_estimate(const Hamiltonian& h, const StateVector& psi0, int d, double dt, std::uint64_t shots,
                         std::uint64_t seed, const SkqdOptions& options = {});

/// Lowest energy over the given seeds.
SkqdResult skqd_best_of(const Hamiltonian& h, std::span<const StateVector> states, std::uint64_t shots,
                        std::span<const std::uint64_t> seeds, const SkqdOptions& options = {});

struct SparsityProfile {
  std::vector<ConfigKey> keys;  // by descending weight
  std::vector<double> weights;
  std::vector<double> alpha;  // alpha[L-1]
  std::vector<double> beta;   // beta[L-1]

  /// Smallest L with alpha_L >= target.
  [[nodiscard]] std::size_t smallest_l(double target) const;
  [[nodiscard]] std::size_t support() const;
};

SparsityProfile sparsity_profile(const StateVector& v);

struct CoverageResult {
  bool covered = false;
  std::vector<std::string> missing;
};

CoverageResult coverage_check(const SampleSet& samples, const StateVector& reference, std::size_t l);

}  // namespace skqd
