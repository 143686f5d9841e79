// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/state.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "skqd/fermion.hpp"

namespace skqd {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidSize: return "invalid-size";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kConvergence: return "convergence";
    case ErrorKind::kNormalization: return "normalization";
    case ErrorKind::kInvalidSector: return "invalid-sector";
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kIndex: return "index";
    case ErrorKind::kEmptySubspace: return "empty-subspace";
    case ErrorKind::kInvalidBasis: return "invalid-basis";
    case ErrorKind::kDegenerateSpectrum: return "degenerate-spectrum";
    case ErrorKind::kUndefinedBound: return "undefined-bound";
    case ErrorKind::kConfig: return "config";
  }
  return "error";
}

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

std::size_t basis_dimension(const BasisTag& basis) {
  return std::visit(Overloaded{[](const SpinBasis& s) { return std::size_t{1} << s.n_qubits; },
                               [](const SectorHandle& s) { return s->dim(); }},
                    basis);
}

ConfigKey key_at(const BasisTag& basis, std::size_t index) {
  return std::visit(Overloaded{[&](const SpinBasis&) { return static_cast<ConfigKey>(index); },
                               [&](const SectorHandle& s) { return s->key(index); }},
                    basis);
}

std::optional<std::size_t> index_of(const BasisTag& basis, ConfigKey key) {
  return std::visit(
      Overloaded{[&](const SpinBasis& s) -> std::optional<std::size_t> {
                   if (s.n_qubits < 64 && (key >> s.n_qubits) != 0) return std::nullopt;
                   return static_cast<std::size_t>(key);
                 },
                 [&](const SectorHandle& s) { return s->index(key); }},
      basis);
}

bool same_basis(const BasisTag& a, const BasisTag& b) {
  if (a.index() != b.index()) return false;
  if (const auto* sa = std::get_if<SpinBasis>(&a)) return sa->n_qubits == std::get<SpinBasis>(b).n_qubits;
  const auto& x = std::get<SectorHandle>(a);
  const auto& y = std::get<SectorHandle>(b);
  return x == y || (x->n_modes() == y->n_modes() && x->n_up() == y->n_up() && x->n_down() == y->n_down());
}

int bitstring_length(const BasisTag& basis) {
  return std::visit(Overloaded{[](const SpinBasis& s) { return s.n_qubits; },
                               [](const SectorHandle& s) { return 2 * s->n_modes(); }},
                    basis);
}

std::string to_bitstring(const BasisTag& basis, ConfigKey key) {
  if (const auto* s = std::get_if<SpinBasis>(&basis)) {
    std::string out(static_cast<std::size_t>(s->n_qubits), '0');
    for (int j = 0; j < s->n_qubits; ++j) {
      if ((key >> (s->n_qubits - 1 - j)) & 1U) out[static_cast<std::size_t>(j)] = '1';
    }
    return out;
  }
  const auto& sector = std::get<SectorHandle>(basis);
  const int n = sector->n_modes();
  std::string out(static_cast<std::size_t>(2 * n), '0');
  for (int p = 0; p < 2 * n; ++p) {
    if ((key >> p) & 1U) out[static_cast<std::size_t>(p)] = '1';
  }
  return out;
}

ConfigKey parse_bitstring(const BasisTag& basis, std::string_view bits) {
  const int length = bitstring_length(basis);
  if (static_cast<int>(bits.size()) != length) {
    std::ostringstream msg;
    msg << "bitstring '" << bits << "' has length " << bits.size() << ", expected " << length;
    throw Error(ErrorKind::kInvalidBasis, msg.str());
  }
  ConfigKey key = 0;
  const bool spin = std::holds_alternative<SpinBasis>(basis);
  for (int j = 0; j < length; ++j) {
    const char c = bits[static_cast<std::size_t>(j)];
    require(c == '0' || c == '1', ErrorKind::kInvalidBasis,
            "bitstring '" + std::string(bits) + "' contains a non-binary character");
    if (c == '1') key |= ConfigKey{1} << (spin ? length - 1 - j : j);
  }
  if (!spin) {
    const auto& sector = std::get<SectorHandle>(basis);
    require(sector->contains(key), ErrorKind::kInvalidBasis,
            "bitstring '" + std::string(bits) + "' lies outside the determinant sector");
  }
  return key;
}

StateVector basis_state(const BasisTag& basis, ConfigKey key) {
  const auto index = index_of(basis, key);
  require(index.has_value(), ErrorKind::kInvalidBasis, "basis state outside the basis");
  StateVector v{CVector::Zero(static_cast<Eigen::Index>(basis_dimension(basis))), basis};
  v.amplitudes[static_cast<Eigen::Index>(*index)] = 1.0;
  return v;
}

void require_unit_norm(const StateVector& v, double tol, const char* where) {
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > tol) {
    std::ostringstream msg;
    msg << where << ": state norm " << norm << " deviates from 1 by more than " << tol;
    throw Error(ErrorKind::kNormalization, msg.str());
  }
}

}  // namespace skqd
