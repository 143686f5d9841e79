// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

// Helpers shared by the experiment runners.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <vector>

#include "skqd/operator.hpp"
#include "skqd/pauli.hpp"
#include "skqd/propagate.hpp"
#include "skqd/state.hpp"

namespace skqd::experiments::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline double relative_error(double energy, double reference) {
  if (reference == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(energy - reference) / std::abs(reference);
}

/// Runs body(i) for i in [0, count) on the OpenMP team. The first exception
/// thrown by any iteration is rethrown after the loop.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  std::exception_ptr failure;
  std::mutex guard;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Open TFIM chain started from |0...0> with its exact Krylov states.
struct TfimSetup {
  int n = 0;
  double h1 = 0.0;
  double h2 = 0.0;
  SpinHamiltonian hamiltonian;
  SpectrumSummary spectrum;
  double dt = 0.0;
  double overlap = 0.0;  // |<ground|0...0>|^2
  std::vector<StateVector> states;

  TfimSetup(int n_qubits, double field1, double field2, const std::optional<double>& dt_override, int d)
      : n(n_qubits), h1(field1), h2(field2), hamiltonian(build_tfim_open(n_qubits, field1, field2)) {
    spectrum = spectrum_summary(hamiltonian.pauli_sum());
    dt = dt_override ? *dt_override : choose_dt(spectrum);
    overlap = std::norm(spectrum.ground.amplitudes[0]);
    const auto psi0 = basis_state(hamiltonian.basis(), 0);
    states = krylov_states(hamiltonian, psi0, default_plan(hamiltonian.dim(), dt, d));
  }
};

}  // namespace skqd::experiments::detail
