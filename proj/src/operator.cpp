// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/operator.hpp"

#include "skqd/kernels.hpp"

namespace skqd {

void SpinHamiltonian::apply(const CVector& in, CVector& out) const {
  require(static_cast<std::size_t>(in.size()) == sum_.dim(), ErrorKind::kShape,
          "vector length differs from 2^n");
  kernels::pauli_apply(sum_, in, out);
}

SectorHamiltonian::SectorHamiltonian(FermionHamiltonian h, SectorHandle sector)
    : h_(std::move(h)), sector_(std::move(sector)), basis_(sector_) {
  require(sector_ != nullptr, ErrorKind::kShape, "null sector");
  require(sector_->n_modes() == h_.n_modes(), ErrorKind::kShape,
          "Hamiltonian and sector mode counts differ");
}

void SectorHamiltonian::apply(const CVector& in, CVector& out) const {
  require(static_cast<std::size_t>(in.size()) == sector_->dim(), ErrorKind::kShape,
          "vector length differs from the sector dimension");
  kernels::sector_apply(h_, *sector_, in, out);
}

CMatrix dense_matrix(const Hamiltonian& h) {
  const auto dim = static_cast<Eigen::Index>(h.dim());
  CMatrix m = CMatrix::Zero(dim, dim);
  std::vector<Connection> buffer;
  const auto& basis = h.basis();
  for (Eigen::Index j = 0; j < dim; ++j) {
    buffer.clear();
    h.connections(key_at(basis, static_cast<std::size_t>(j)), buffer);
    for (const auto& c : buffer) {
      const auto i = index_of(basis, c.target);
      require(i.has_value(), ErrorKind::kShape, "Hamiltonian leaves its basis");
      m(static_cast<Eigen::Index>(*i), j) += c.amplitude;
    }
  }
  return m;
}

GroundState ground_state(const Hamiltonian& h, std::size_t dense_limit, double tolerance) {
  GroundState out;
  if (h.dim() <= dense_limit) {
    const auto spectrum = linalg::hermitian_eigen(dense_matrix(h));
    out.energy = spectrum.values[0];
    out.vector = StateVector{spectrum.vectors.col(0).normalized(), h.basis()};
    CVector hv = h * out.vector.amplitudes;
    out.residual = (hv - out.energy * out.vector.amplitudes).norm();
    return out;
  }
  linalg::LanczosOptions opts;
  opts.tolerance = tolerance;
  const auto pair = linalg::lanczos_lowest(h.matvec(), static_cast<Eigen::Index>(h.dim()), opts);
  out.energy = pair.value;
  out.vector = StateVector{pair.vector, h.basis()};
  out.residual = pair.residual;
  return out;
}

}  // namespace skqd
