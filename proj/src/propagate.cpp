// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/propagate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "skqd/fermion.hpp"
#include "skqd/random.hpp"

namespace skqd {

const char* to_string(EvolutionMethod method) {
  switch (method) {
    case EvolutionMethod::kExactEigen: return "exact-eigen";
    case EvolutionMethod::kLanczosExpmv: return "lanczos-expmv";
    case EvolutionMethod::kTrotter2: return "trotter2";
  }
  return "?";
}

EvolutionMethod parse_evolution_method(std::string_view name) {
  if (name == "exact-eigen") return EvolutionMethod::kExactEigen;
  if (name == "lanczos-expmv") return EvolutionMethod::kLanczosExpmv;
  if (name == "trotter2") return EvolutionMethod::kTrotter2;
  throw Error(ErrorKind::kInvalidParameter, "unknown evolution method '" + std::string(name) + "'");
}

EvolutionPlan default_plan(std::size_t dim, double dt, int steps) {
  EvolutionPlan plan;
  plan.dt = dt;
  plan.steps = steps;
  plan.method = dim <= kDefaultExactEigenDim ? EvolutionMethod::kExactEigen : EvolutionMethod::kLanczosExpmv;
  return plan;
}

EvolutionPlan trotter_plan(const SectorHamiltonian& h, double dt, int steps) {
  EvolutionPlan plan;
  plan.dt = dt;
  plan.steps = steps;
  plan.method = EvolutionMethod::kTrotter2;
  plan.h1 = std::make_shared<SectorHamiltonian>(h.fermion().one_body_part(), h.sector());
  plan.h2 = std::make_shared<SectorHamiltonian>(h.fermion().two_body_part(), h.sector());
  return plan;
}

double choose_dt(const SpectrumSummary& summary) {
  const double width = summary.width();
  require(width > 0.0, ErrorKind::kDegenerateSpectrum, "spectral width is zero; dt = pi/width undefined");
  return std::numbers::pi / width;
}

std::vector<StateVector> krylov_states(const Hamiltonian& h, const StateVector& psi0,
                                       const EvolutionPlan& plan) {
  require(plan.dt > 0.0, ErrorKind::kInvalidParameter, "dt must be positive");
  require(plan.steps >= 1, ErrorKind::kInvalidParameter, "need at least one Krylov state");
  require(plan.tolerance > 0.0, ErrorKind::kInvalidParameter, "tolerance must be positive");
  require(same_basis(h.basis(), psi0.basis) && psi0.dim() == h.dim(), ErrorKind::kShape,
          "initial state and Hamiltonian live in different bases");
  require_unit_norm(psi0, 1e-9, "krylov_states");

  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(plan.steps));
  out.push_back(psi0);

  switch (plan.method) {
    case EvolutionMethod::kExactEigen: {
      if (h.dim() > plan.exact_eigen_max_dim) {
        std::ostringstream msg;
        msg << "exact-eigen evolution limited to dimension " << plan.exact_eigen_max_dim << "; got " << h.dim();
        throw Error(ErrorKind::kCapacity, msg.str());
      }
      const auto spectrum = linalg::hermitian_eigen(dense_matrix(h));
      const CVector c = spectrum.vectors.adjoint() * psi0.amplitudes;
      for (int k = 1; k < plan.steps; ++k) {
        CVector phased(c.size());
        for (Eigen::Index i = 0; i < c.size(); ++i) {
          phased[i] = std::exp(Complex(0.0, -k * plan.dt * spectrum.values[i])) * c[i];
        }
        out.push_back({spectrum.vectors * phased, psi0.basis});
      }
      break;
    }
    case EvolutionMethod::kLanczosExpmv: {
      linalg::ExpmvOptions opts;
      opts.tolerance = plan.tolerance;
      const auto op = h.matvec();
      CVector v = psi0.amplitudes;
      for (int k = 1; k < plan.steps; ++k) {
        linalg::expmv(op, v, plan.dt, opts);
        out.push_back({v, psi0.basis});
      }
      break;
    }
    case EvolutionMethod::kTrotter2: {
      require(plan.h1 != nullptr && plan.h2 != nullptr, ErrorKind::kInvalidParameter,
              "trotter2 needs both splitting Hamiltonians");
      require(same_basis(plan.h1->basis(), psi0.basis) && same_basis(plan.h2->basis(), psi0.basis),
              ErrorKind::kShape, "Trotter factors live in a different basis");
      linalg::ExpmvOptions opts;
      opts.tolerance = plan.tolerance;
      const auto op1 = plan.h1->matvec();
      const auto op2 = plan.h2->matvec();
      CVector v = psi0.amplitudes;
      for (int k = 1; k < plan.steps; ++k) {
        linalg::expmv(op2, v, 0.5 * plan.dt, opts);
        linalg::expmv(op1, v, plan.dt, opts);
        linalg::expmv(op2, v, 0.5 * plan.dt, opts);
        out.push_back({v, psi0.basis});
      }
      break;
    }
  }
  return out;
}

namespace {

std::vector<std::uint64_t> excitation_strings(int n_modes, int n_occupied, std::span<const int> order) {
  if (n_occupied < 3 || n_modes - n_occupied < 4) {
    std::ostringstream msg;
    msg << "initial state needs >= 3 occupied and >= 4 empty modes per spin; got " << n_occupied << " of "
        << n_modes;
    throw Error(ErrorKind::kInvalidSector, msg.str());
  }
  std::uint64_t reference = 0;
  for (int i = 0; i < n_occupied; ++i) reference |= std::uint64_t{1} << order[static_cast<std::size_t>(i)];
  std::vector<std::uint64_t> out{reference};
  for (int o = n_occupied - 3; o < n_occupied; ++o) {
    for (int e = n_occupied; e < n_occupied + 4; ++e) {
      out.push_back(reference ^ (std::uint64_t{1} << order[static_cast<std::size_t>(o)]) ^
                    (std::uint64_t{1} << order[static_cast<std::size_t>(e)]));
    }
  }
  return out;
}

}  // namespace

StateVector siam_initial_state(const SectorHandle& sector, std::span<const int> fill_order) {
  require(sector != nullptr, ErrorKind::kShape, "null sector");
  const int n = sector->n_modes();
  require(static_cast<int>(fill_order.size()) == n, ErrorKind::kShape, "fill order must list every mode");
  std::vector<int> check(fill_order.begin(), fill_order.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n; ++i) {
    require(check[static_cast<std::size_t>(i)] == i, ErrorKind::kInvalidParameter,
            "fill order is not a permutation of the modes");
  }
  const auto up = excitation_strings(n, sector->n_up(), fill_order);
  const auto down = excitation_strings(n, sector->n_down(), fill_order);
  StateVector v{CVector::Zero(static_cast<Eigen::Index>(sector->dim())), BasisTag{sector}};
  const double amp = 1.0 / std::sqrt(static_cast<double>(up.size() * down.size()));
  for (auto u : up) {
    for (auto d : down) {
      v.amplitudes[static_cast<Eigen::Index>(*sector->index(sector->compose(u, d)))] = amp;
    }
  }
  return v;
}

StateVector siam_initial_state(const SectorHandle& sector, int k_fermi) {
  require(sector != nullptr, ErrorKind::kShape, "null sector");
  const int bath = sector->n_modes() - 1;
  require(k_fermi >= 0 && k_fermi < bath, ErrorKind::kIndex, "k_f outside the bath");
  std::vector<int> order;
  for (int k = 0; k <= k_fermi; ++k) order.push_back(k + 1);
  order.push_back(0);
  for (int k = k_fermi + 1; k < bath; ++k) order.push_back(k + 1);
  return siam_initial_state(sector, order);
}

std::vector<int> fill_order_by_occupation(const RVector& occupations) {
  std::vector<int> order(static_cast<std::size_t>(occupations.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return occupations[a] > occupations[b]; });
  return order;
}

Counts born_sample(const StateVector& v, std::uint64_t shots, std::uint64_t seed, std::uint64_t stream) {
  require_unit_norm(v, 1e-9, "born_sample");
  const auto dim = v.dim();
  std::vector<double> cumulative(dim);
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += std::norm(v.amplitudes[static_cast<Eigen::Index>(i)]);
    cumulative[i] = acc;
  }
  Counts counts;
  Rng rng(seed, stream);
  for (std::uint64_t m = 0; m < shots; ++m) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto idx = static_cast<std::size_t>(it - cumulative.begin());
    // Rounding can push u onto the total; fall back to the last populated entry.
    if (idx >= dim) {
      idx = dim - 1;
      while (idx > 0 && std::norm(v.amplitudes[static_cast<Eigen::Index>(idx)]) == 0.0) --idx;
    }
    ++counts[key_at(v.basis, idx)];
  }
  return counts;
}

}  // namespace skqd
