// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace skqd {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Basis configuration key. Spin models use the computational-basis index;
/// fermionic models pack the spin-up occupation mask into the low n_modes bits
/// and the spin-down mask above it.
using ConfigKey = std::uint64_t;

enum class ErrorKind {
  kInvalidSize,
  kShape,
  kCapacity,
  kConvergence,
  kNormalization,
  kInvalidSector,
  kInvalidParameter,
  kIndex,
  kEmptySubspace,
  kInvalidBasis,
  kDegenerateSpectrum,
  kUndefinedBound,
  kConfig,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One nonzero of H|key>: H|key> = sum amplitude |target>.
struct Connection {
  ConfigKey target = 0;
  Complex amplitude{};
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace skqd
