// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "skqd/core.hpp"
#include "skqd/fermion.hpp"
#include "skqd/linalg.hpp"
#include "skqd/pauli.hpp"
#include "skqd/state.hpp"

namespace skqd {

/// Hermitian operator bound to a basis: what propagation, Krylov projection
/// and sampled-subspace projection need from a model.
class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;

  [[nodiscard]] virtual const BasisTag& basis() const = 0;
  [[nodiscard]] std::size_t dim() const { return basis_dimension(basis()); }

  virtual void apply(const CVector& in, CVector& out) const = 0;
  virtual void connections(ConfigKey key, std::vector<Connection>& out) const = 0;

  [[nodiscard]] linalg::MatVec matvec() const {
    return [this](const CVector& in, CVector& out) { apply(in, out); };
  }
  [[nodiscard]] CVector operator*(const CVector& v) const {
    CVector out(v.size());
    apply(v, out);
    return out;
  }
};

class SpinHamiltonian final : public Hamiltonian {
 public:
  explicit SpinHamiltonian(PauliSum sum) : sum_(std::move(sum)), basis_(SpinBasis{sum_.n()}) {}

  [[nodiscard]] const BasisTag& basis() const override { return basis_; }
  void apply(const CVector& in, CVector& out) const override;
  void connections(ConfigKey key, std::vector<Connection>& out) const override {
    sum_.connections(key, out);
  }
  [[nodiscard]] const PauliSum& pauli_sum() const { return sum_; }

 private:
  PauliSum sum_;
  BasisTag basis_;
};

class SectorHamiltonian final : public Hamiltonian {
 public:
  SectorHamiltonian(FermionHamiltonian h, SectorHandle sector);

  [[nodiscard]] const BasisTag& basis() const override { return basis_; }
  void apply(const CVector& in, CVector& out) const override;
  void connections(ConfigKey key, std::vector<Connection>& out) const override {
    h_.connections(key, out);
  }
  [[nodiscard]] const FermionHamiltonian& fermion() const { return h_; }
  [[nodiscard]] const SectorHandle& sector() const { return sector_; }

 private:
  FermionHamiltonian h_;
  SectorHandle sector_;
  BasisTag basis_;
};

/// Dense matrix of any bound Hamiltonian (built from its connections).
CMatrix dense_matrix(const Hamiltonian& h);

struct GroundState {
  double energy = 0.0;
  StateVector vector;
  double residual = 0.0;
};

/// Lowest eigenpair: dense below `dense_limit`, Lanczos above.
GroundState ground_state(const Hamiltonian& h, std::size_t dense_limit = 1024,
                         double tolerance = 1e-10);

}  // namespace skqd
