// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "skqd/core.hpp"

namespace skqd::linalg {

/// out <- A in for a Hermitian operator A. out is pre-sized by the caller.
using MatVec = std::function<void(const CVector& in, CVector& out)>;

struct LanczosOptions {
  int max_basis = 160;
  int max_restarts = 400;
  double tolerance = 1e-10;  // on ||A x - theta x|| / max(1, |theta|)
  std::uint64_t seed = 0x5eed;
};

struct EigenPair {
  double value = 0.0;
  CVector vector;
  double residual = 0.0;
  int matvecs = 0;
};

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
/// Vectors in `deflate` (orthonormal) are projected out of the Krylov space.
/// Throws kConvergence, naming the achieved residual, when max_restarts is hit.
EigenPair lanczos_lowest(const MatVec& op, Eigen::Index dim, const LanczosOptions& options = {},
                         std::span<const CVector> deflate = {}, const CVector* start = nullptr);

/// Highest eigenpair (lowest of -A).
EigenPair lanczos_highest(const MatVec& op, Eigen::Index dim, const LanczosOptions& options = {});

struct DenseSpectrum {
  RVector values;  // ascending
  CMatrix vectors;
};

/// Hermitian eigendecomposition; routes through the real solver when the
/// matrix has no imaginary part.
DenseSpectrum hermitian_eigen(const CMatrix& m);

struct ExpmvOptions {
  double tolerance = 1e-10;
  int max_krylov = 48;
};

/// v <- exp(-i t A) v via Lanczos propagation with adaptive sub-stepping.
/// Returns the accumulated a-posteriori error estimate.
double expmv(const MatVec& op, CVector& v, double t, const ExpmvOptions& options = {});

/// Compressed sparse row matrix, complex valued.
struct CsrMatrix {
  Eigen::Index rows = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int64_t> cols;
  std::vector<Complex> values;

  [[nodiscard]] std::size_t nnz() const { return values.size(); }
  [[nodiscard]] bool is_real(double tol = 0.0) const;
  [[nodiscard]] CMatrix to_dense() const;
  [[nodiscard]] double hermiticity_error() const;
};

/// Deterministic unit vector used as a Lanczos start.
CVector pseudo_random_unit(Eigen::Index dim, std::uint64_t seed);

}  // namespace skqd::linalg
