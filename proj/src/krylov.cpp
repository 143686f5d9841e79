// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skqd/random.hpp"

namespace skqd {

const char* to_string(NoiseTarget target) {
  return target == NoiseTarget::kHOnly ? "H-only" : "H-and-S";
}

NoiseTarget parse_noise_target(std::string_view name) {
  if (name == "H-only") return NoiseTarget::kHOnly;
  if (name == "H-and-S") return NoiseTarget::kHAndS;
  throw Error(ErrorKind::kInvalidParameter, "unknown noise target '" + std::string(name) + "'");
}

namespace {

void check_states(const Hamiltonian& h, std::span<const StateVector> states) {
  require(!states.empty(), ErrorKind::kShape, "no Krylov states");
  for (const auto& v : states) {
    require(same_basis(v.basis, h.basis()) && v.dim() == h.dim(), ErrorKind::kShape,
            "Krylov state and Hamiltonian live in different bases");
    require_unit_norm(v, 1e-8, "assemble");
  }
}

void hermitize(CMatrix& m) { m = (0.5 * (m + m.adjoint())).eval(); }

}  // namespace

KrylovMatrices assemble(const Hamiltonian& h, std::span<const StateVector> states) {
  check_states(h, states);
  const auto d = static_cast<Eigen::Index>(states.size());
  KrylovMatrices out{static_cast<int>(d), CMatrix(d, d), CMatrix(d, d), 0.0, false};
  std::vector<CVector> hv(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) hv[k] = h * states[k].amplitudes;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j; k < d; ++k) {
      const auto& vj = states[static_cast<std::size_t>(j)].amplitudes;
      out.s(j, k) = vj.dot(states[static_cast<std::size_t>(k)].amplitudes);
      out.h(j, k) = vj.dot(hv[static_cast<std::size_t>(k)]);
      out.s(k, j) = std::conj(out.s(j, k));
      out.h(k, j) = std::conj(out.h(j, k));
    }
    out.s(j, j) = out.s(j, j).real();
    out.h(j, j) = out.h(j, j).real();
  }
  return out;
}

KrylovMatrices assemble_toeplitz(const Hamiltonian& h, std::span<const StateVector> states) {
  check_states(h, states);
  const auto d = static_cast<Eigen::Index>(states.size());
  const CVector h_psi0 = h * states[0].amplitudes;
  CVector s_row(d);
  CVector h_row(d);
  for (Eigen::Index m = 0; m < d; ++m) {
    const auto& vm = states[static_cast<std::size_t>(m)].amplitudes;
    s_row[m] = states[0].amplitudes.dot(vm);
    h_row[m] = h_psi0.dot(vm);
  }
  s_row[0] = s_row[0].real();
  h_row[0] = h_row[0].real();
  KrylovMatrices out{static_cast<int>(d), CMatrix(d, d), CMatrix(d, d), 0.0, true};
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      out.s(j, k) = k >= j ? s_row[k - j] : std::conj(s_row[j - k]);
      out.h(j, k) = k >= j ? h_row[k - j] : std::conj(h_row[j - k]);
    }
  }
  return out;
}

KrylovMatrices inject_noise(const KrylovMatrices& m, double sigma, std::uint64_t seed, NoiseTarget target) {
  require(sigma >= 0.0, ErrorKind::kInvalidParameter, "noise sigma must be nonnegative");
  if (sigma == 0.0) return m;
  KrylovMatrices out = m;
  out.noise_sigma = sigma;
  Rng rng(seed, 0x6b7164);
  const auto perturb = [&](CMatrix& a) {
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      a(j, j) += sigma * rng.normal();
      for (Eigen::Index k = j + 1; k < a.cols(); ++k) {
        const double re = sigma * rng.normal();
        const double im = sigma * rng.normal();
        a(j, k) += Complex(re, im);
        a(k, j) = std::conj(a(j, k));
      }
    }
    hermitize(a);
  };
  perturb(out.h);
  if (target == NoiseTarget::kHAndS) perturb(out.s);
  return out;
}

double default_threshold(double sigma) { return sigma > 0.0 ? std::max(1e-12, 5.0 * sigma) : 1e-12; }

GevpSolution solve_gevp(const KrylovMatrices& m, double threshold) {
  require(threshold >= 0.0, ErrorKind::kInvalidParameter, "threshold must be nonnegative");
  require(m.d >= 1 && m.h.rows() == m.d && m.s.rows() == m.d, ErrorKind::kShape, "malformed Krylov matrices");
  CMatrix s = m.s;
  CMatrix h = m.h;
  hermitize(s);
  hermitize(h);
  const auto sd = linalg::hermitian_eigen(s);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < sd.values.size(); ++i) {
    if (sd.values[i] > threshold) kept.push_back(i);
  }
  if (kept.empty()) {
    std::ostringstream msg;
    msg << "all overlap eigenvalues are <= threshold " << threshold << " (largest "
        << sd.values[sd.values.size() - 1] << ")";
    throw Error(ErrorKind::kEmptySubspace, msg.str());
  }
  const auto r = static_cast<Eigen::Index>(kept.size());
  CMatrix x(m.d, r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const auto i = kept[static_cast<std::size_t>(c)];
    x.col(c) = sd.vectors.col(i) / std::sqrt(sd.values[i]);
  }
  CMatrix reduced = x.adjoint() * h * x;
  hermitize(reduced);
  const auto rd = linalg::hermitian_eigen(reduced);
  GevpSolution out;
  out.energy = rd.values[0];
  out.coeffs = x * rd.vectors.col(0);
  out.kept_dim = static_cast<int>(r);
  out.threshold_used = threshold;
  return out;
}

GevpSolution kqd_estimate(const Hamiltonian& h, const StateVector& psi0, int d, double dt,
                          const KqdOptions& options) {
  EvolutionPlan plan = default_plan(h.dim(), dt, d);
  if (options.method) {
    require(*options.method != EvolutionMethod::kTrotter2, ErrorKind::kInvalidParameter,
            "kqd_estimate takes exact evolution methods only");
    plan.method = *options.method;
  }
  const auto states = krylov_states(h, psi0, plan);
  const auto clean = assemble_toeplitz(h, states);
  const auto noisy = inject_noise(clean, options.sigma, options.seed, options.target);
  return solve_gevp(noisy, options.threshold.value_or(default_threshold(options.sigma)));
}

}  // namespace skqd
