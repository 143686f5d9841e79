// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "skqd/core.hpp"

namespace skqd {

class DeterminantSector;

/// Full 2^n computational basis; qubit 1 is the most significant bit.
struct SpinBasis {
  int n_qubits = 0;
};

using SectorHandle = std::shared_ptr<const DeterminantSector>;
using BasisTag = std::variant<SpinBasis, SectorHandle>;

std::size_t basis_dimension(const BasisTag& basis);
ConfigKey key_at(const BasisTag& basis, std::size_t index);
std::optional<std::size_t> index_of(const BasisTag& basis, ConfigKey key);
bool same_basis(const BasisTag& a, const BasisTag& b);

/// Length of the measurement bitstring emitted for this basis.
int bitstring_length(const BasisTag& basis);

/// Spin: character j is qubit j+1. Sector: up occupations of modes 0..n-1
/// followed by down occupations of modes 0..n-1.
std::string to_bitstring(const BasisTag& basis, ConfigKey key);

/// Inverse of to_bitstring. Throws kInvalidBasis for malformed strings and,
/// for sector bases, for strings outside the (n_up, n_down) sector.
ConfigKey parse_bitstring(const BasisTag& basis, std::string_view bits);

struct StateVector {
  CVector amplitudes;
  BasisTag basis;

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  [[nodiscard]] double norm() const { return amplitudes.norm(); }
};

StateVector basis_state(const BasisTag& basis, ConfigKey key);

/// Throws kNormalization when | ||v|| - 1 | > tol.
void require_unit_norm(const StateVector& v, double tol, const char* where);

}  // namespace skqd
