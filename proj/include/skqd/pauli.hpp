// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "skqd/core.hpp"
#include "skqd/state.hpp"

namespace skqd {

/// Tensor product of single-qubit Paulis. ops[0] acts on qubit 1 (the most
/// significant bit of the basis index).
class PauliString {
 public:
  explicit PauliString(std::string ops);

  /// Identity on n qubits with the listed (1-based site, 'X'|'Y'|'Z') factors.
  static PauliString from_sites(int n, std::initializer_list<std::pair<int, char>> factors);

  [[nodiscard]] int n() const { return static_cast<int>(ops_.size()); }
  [[nodiscard]] const std::string& ops() const { return ops_; }
  [[nodiscard]] std::uint64_t x_mask() const { return x_mask_; }
  [[nodiscard]] std::uint64_t z_mask() const { return z_mask_; }

  /// P|b> = phase(b) |b ^ x_mask()>.
  [[nodiscard]] Complex phase(ConfigKey b) const;

 private:
  std::string ops_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
  Complex y_phase_{1.0, 0.0};  // i^{#Y}
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

class PauliSum {
 public:
  explicit PauliSum(int n);

  void add(double coefficient, PauliString string);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n_; }
  [[nodiscard]] const std::vector<PauliTerm>& terms() const { return terms_; }

  /// Appends H|b> term by term (no merging).
  void connections(ConfigKey b, std::vector<Connection>& out) const;

 private:
  int n_;
  std::vector<PauliTerm> terms_;
};

/// -sum_{j<n} Z_j Z_{j+1} - h1 sum_j X_j - h2 Z_1 (open chain).
PauliSum build_tfim_open(int n, double h1, double h2);

/// -sum_i Z_i Z_{i+1} - h sum_i X_i with Z_n == Z_0.
PauliSum build_tfim_periodic(int n, double h);

/// H v computed term by term without a dense matrix.
StateVector apply(const PauliSum& h, const StateVector& v);

/// Dense 2^n x 2^n matrix; intended for small n only.
CMatrix dense_matrix(const PauliSum& h);

struct SpectrumSummary {
  double e0 = 0.0;
  double e1 = 0.0;
  double emax = 0.0;
  StateVector ground;
  bool iterative = false;

  [[nodiscard]] double gap() const { return e1 - e0; }
  [[nodiscard]] double width() const { return emax - e0; }
  /// Spectral norm of a Hermitian operator.
  [[nodiscard]] double norm() const { return std::max(std::abs(e0), std::abs(emax)); }
};

struct SpectrumOptions {
  int dense_max_qubits = 10;
  int iterative_max_qubits = 24;
  double iterative_tolerance = 1e-10;
};

SpectrumSummary spectrum_summary(const PauliSum& h, const SpectrumOptions& options = {});

}  // namespace skqd
