// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "skqd/core.hpp"

namespace skqd {

struct KqdBoundInputs {
  double width = 0.0;    // Emax - E0
  double gap = 0.0;      // E1 - E0
  double overlap = 1.0;  // |gamma_0|^2
  int d = 1;
};

/// KQD error bound; even d is evaluated at d - 1.
double eps_kqd(const KqdBoundInputs& inputs);

struct EpsTilde {
  double value = 0.0;
  bool saturated = false;  // eps >= gap, value pinned at 2
};

/// 2 - 2 sqrt(1 - eps / gap).
EpsTilde eps_tilde(double eps, double gap);

struct ShiftedSparsity {
  double alpha = 0.0;
  double beta = 0.0;
  bool negative = false;  // reported, never clamped
};

ShiftedSparsity sparsity_shift(double alpha0, double beta0, double eps_tilde);

/// |gamma_0|^2 beta / d^2.
double coverage_probability(double overlap, double beta, int d);

struct FailureBound {
  double tight = 0.0;  // min(1, L (1-p)^M)
  double loose = 0.0;  // L exp(-M p)
};

FailureBound failure_bound(std::size_t l, double p, double m);

/// 2 sqrt(2) ||H|| (1 - sqrt(alpha0))^{1/2}.
double subspace_energy_bound(double h_norm, double alpha0);

struct SampleComplexityReport {
  double eps = 0.0;
  EpsTilde eps_tilde;
  ShiftedSparsity shifted;
  double p = 0.0;
  double sample_bound = 0.0;  // M*; +inf when the shifted beta is not positive
  double energy_bound = 0.0;
  bool vacuous = false;
};

SampleComplexityReport sample_complexity_report(const KqdBoundInputs& inputs, double alpha0, double beta0, std::size_t l,
                                    double eta, double h_norm);

/// Normalised Chebyshev filter, p*(0) = 1, small for |theta| >= a.
double chebyshev_filter(double theta, double a, int d_poly);

/// c_k, k = -d_poly..d_poly, with p*(theta) = sum c_k e^{i k theta}.
std::vector<double> chebyshev_fourier(double a, int d_poly);

struct MagnetizationSparsity {
  int n = 0;
  double h = 0.0;
  double magnetization = 0.0;   // M_n
  std::vector<double> pbar;     // P_n(w), w = 0..n
  std::vector<double> tail;     // S_n(k), k = 0..n
  std::vector<double> bound;    // min(n (1 - M_n) / (2k + 2), 1)
  double even_energy = 0.0;
  double odd_energy = 0.0;
};

/// Periodic TFIM ground state, symmetry broken towards |0...0>.
MagnetizationSparsity magnetization_sparsity(double h, int n, int max_qubits = 24);

/// One inequality check: lhs <= rhs (+ slack).
struct CheckRecord {
  std::string check;
  std::vector<std::pair<std::string, double>> inputs;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

inline constexpr double kBoundSlack = 1e-9;

CheckRecord make_check(std::string check, std::vector<std::pair<std::string, double>> inputs, double measured,
                       double bound, double slack = kBoundSlack);

struct SweepSummary {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min over records of bound - measured
  std::vector<CheckRecord> records;

  void add(CheckRecord record);
};

/// Low-energy states are close to the ground state.
SweepSummary verify_state_closeness(std::size_t instances, std::uint64_t seed);
/// Nearby states inherit shifted sparsity.
SweepSummary verify_sparsity_transfer(std::size_t instances, std::uint64_t seed);
/// Filter-state certificate: every top-L string has weight >= p in some Krylov state.
SweepSummary verify_bitstring_coverage(std::size_t instances, std::uint64_t seed);
/// Monte-Carlo failure frequency against L (1-p)^M.
SweepSummary verify_failure_probability(std::size_t trials, std::uint64_t seed);
/// Truncated ground states obey the subspace energy bound.
SweepSummary verify_truncation_energy(std::uint64_t seed, int max_qubits = 8);
/// Filter normalisation and out-of-band decay.
SweepSummary verify_chebyshev(int grid_points = 1000, int max_degree = 50);

}  // namespace skqd
