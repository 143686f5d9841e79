// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/pauli.hpp"

#include <bit>
#include <sstream>

#include "skqd/kernels.hpp"
#include "skqd/linalg.hpp"

namespace skqd {

PauliString::PauliString(std::string ops) : ops_(std::move(ops)) {
  const int n = static_cast<int>(ops_.size());
  require(n >= 1 && n <= 62, ErrorKind::kInvalidSize, "Pauli strings support 1..62 qubits");
  int y_count = 0;
  for (int j = 0; j < n; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - j);
    switch (ops_[static_cast<std::size_t>(j)]) {
      case 'I': break;
      case 'X': x_mask_ |= bit; break;
      case 'Z': z_mask_ |= bit; break;
      case 'Y':
        x_mask_ |= bit;
        z_mask_ |= bit;
        ++y_count;
        break;
      default:
        throw Error(ErrorKind::kInvalidParameter, "Pauli string '" + ops_ + "' has an invalid factor");
    }
  }
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  y_phase_ = kPowers[y_count % 4];
}

PauliString PauliString::from_sites(int n, std::initializer_list<std::pair<int, char>> factors) {
  require(n >= 1, ErrorKind::kInvalidSize, "Pauli string needs at least one qubit");
  std::string ops(static_cast<std::size_t>(n), 'I');
  for (const auto& [site, op] : factors) {
    require(site >= 1 && site <= n, ErrorKind::kIndex, "Pauli factor site out of range");
    ops[static_cast<std::size_t>(site - 1)] = op;
  }
  return PauliString(std::move(ops));
}

Complex PauliString::phase(ConfigKey b) const {
  return (std::popcount(b & z_mask_) & 1) ? -y_phase_ : y_phase_;
}

PauliSum::PauliSum(int n) : n_(n) {
  require(n >= 1 && n <= 62, ErrorKind::kInvalidSize, "Pauli sums support 1..62 qubits");
}

void PauliSum::add(double coefficient, PauliString string) {
  require(string.n() == n_, ErrorKind::kShape, "Pauli string length differs from the sum's qubit count");
  require(std::isfinite(coefficient), ErrorKind::kInvalidParameter, "non-finite Pauli coefficient");
  terms_.push_back({coefficient, std::move(string)});
}

void PauliSum::connections(ConfigKey b, std::vector<Connection>& out) const {
  for (const auto& term : terms_) {
    out.push_back({b ^ term.string.x_mask(), term.coefficient * term.string.phase(b)});
  }
}

PauliSum build_tfim_open(int n, double h1, double h2) {
  require(n >= 2, ErrorKind::kInvalidSize, "open TFIM needs n >= 2");
  PauliSum h(n);
  for (int j = 1; j < n; ++j) h.add(-1.0, PauliString::from_sites(n, {{j, 'Z'}, {j + 1, 'Z'}}));
  if (h1 != 0.0) {
    for (int j = 1; j <= n; ++j) h.add(-h1, PauliString::from_sites(n, {{j, 'X'}}));
  }
  if (h2 != 0.0) h.add(-h2, PauliString::from_sites(n, {{1, 'Z'}}));
  return h;
}

PauliSum build_tfim_periodic(int n, double h) {
  require(n >= 3, ErrorKind::kInvalidSize, "periodic TFIM needs n >= 3");
  PauliSum sum(n);
  for (int i = 1; i <= n; ++i) {
    sum.add(-1.0, PauliString::from_sites(n, {{i, 'Z'}, {i % n + 1, 'Z'}}));
  }
  for (int i = 1; i <= n; ++i) sum.add(-h, PauliString::from_sites(n, {{i, 'X'}}));
  return sum;
}

StateVector apply(const PauliSum& h, const StateVector& v) {
  const auto* basis = std::get_if<SpinBasis>(&v.basis);
  require(basis != nullptr && basis->n_qubits == h.n() &&
              v.dim() == h.dim(),
          ErrorKind::kShape, "state dimension does not match the 2^n Pauli space");
  StateVector out{CVector(v.amplitudes.size()), v.basis};
  kernels::pauli_apply(h, v.amplitudes, out.amplitudes);
  return out;
}

CMatrix dense_matrix(const PauliSum& h) {
  const auto dim = static_cast<Eigen::Index>(h.dim());
  CMatrix m = CMatrix::Zero(dim, dim);
  std::vector<Connection> buffer;
  for (Eigen::Index b = 0; b < dim; ++b) {
    buffer.clear();
    h.connections(static_cast<ConfigKey>(b), buffer);
    for (const auto& c : buffer) m(static_cast<Eigen::Index>(c.target), b) += c.amplitude;
  }
  return m;
}

SpectrumSummary spectrum_summary(const PauliSum& h, const SpectrumOptions& options) {
  const BasisTag basis = SpinBasis{h.n()};
  SpectrumSummary out;
  if (h.n() <= options.dense_max_qubits) {
    const auto spectrum = linalg::hermitian_eigen(dense_matrix(h));
    const auto& values = spectrum.values;
    out.e0 = values[0];
    out.e1 = values.size() > 1 ? values[1] : values[0];
    out.emax = values[values.size() - 1];
    out.ground = StateVector{spectrum.vectors.col(0), basis};
    out.ground.amplitudes.normalize();
    return out;
  }
  if (h.n() > options.iterative_max_qubits) {
    std::ostringstream msg;
    msg << "spectrum_summary supports at most " << options.iterative_max_qubits
        << " qubits (iterative limit); got " << h.n();
    throw Error(ErrorKind::kCapacity, msg.str());
  }
  const auto dim = static_cast<Eigen::Index>(h.dim());
  linalg::MatVec op = [&h](const CVector& in, CVector& o) { kernels::pauli_apply(h, in, o); };
  linalg::LanczosOptions lopts;
  lopts.tolerance = options.iterative_tolerance;
  const auto ground = linalg::lanczos_lowest(op, dim, lopts);
  const CVector deflate[] = {ground.vector};
  const auto first = linalg::lanczos_lowest(op, dim, lopts, deflate);
  const auto top = linalg::lanczos_highest(op, dim, lopts);
  out.e0 = ground.value;
  out.e1 = std::max(first.value, ground.value);
  out.emax = top.value;
  out.ground = StateVector{ground.vector, basis};
  out.iterative = true;
  return out;
}

}  // namespace skqd
