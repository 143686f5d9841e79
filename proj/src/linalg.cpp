// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace skqd::linalg {

namespace {

void project_out(CVector& w, std::span<const CVector> basis) {
  for (const auto& q : basis) w -= q * q.dot(w);
}

void project_out(CVector& w, const std::vector<CVector>& basis, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) w -= basis[i] * basis[i].dot(w);
}

struct Tridiagonal {
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples j and j+1

  Eigen::SelfAdjointEigenSolver<RMatrix> solve(std::size_t size) const {
    RVector diag(static_cast<Eigen::Index>(size));
    RVector sub(static_cast<Eigen::Index>(size > 0 ? size - 1 : 0));
    for (std::size_t i = 0; i < size; ++i) diag[static_cast<Eigen::Index>(i)] = alpha[i];
    for (std::size_t i = 0; i + 1 < size; ++i) sub[static_cast<Eigen::Index>(i)] = beta[i];
    Eigen::SelfAdjointEigenSolver<RMatrix> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    return es;
  }
};

}  // namespace

CVector pseudo_random_unit(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    const double im = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    v[i] = Complex(re, im);
  }
  v.normalize();
  return v;
}

EigenPair lanczos_lowest(const MatVec& op, Eigen::Index dim, const LanczosOptions& options,
                         std::span<const CVector> deflate, const CVector* start) {
  require(dim > 0, ErrorKind::kShape, "lanczos on empty space");
  const auto available = static_cast<Eigen::Index>(deflate.size());
  require(available < dim, ErrorKind::kShape, "deflation space fills the whole space");

  CVector v = start != nullptr ? *start : pseudo_random_unit(dim, options.seed);
  project_out(v, deflate);
  if (v.norm() < 1e-8) {
    v = pseudo_random_unit(dim, options.seed + 1);
    project_out(v, deflate);
  }
  v.normalize();

  const auto max_basis =
      static_cast<std::size_t>(std::min<Eigen::Index>(options.max_basis, dim - available));
  EigenPair result;
  CVector w(dim);
  CVector hx(dim);
  std::vector<CVector> basis;
  basis.reserve(max_basis + 1);

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    basis.clear();
    basis.push_back(v);
    Tridiagonal tri;
    double scale = 1.0;
    bool invariant = false;
    std::size_t size = 0;
    for (std::size_t j = 0; j < max_basis; ++j) {
      op(basis[j], w);
      ++result.matvecs;
      const double a = basis[j].dot(w).real();
      tri.alpha.push_back(a);
      scale = std::max(scale, std::abs(a));
      // Two passes of classical Gram-Schmidt keep the basis orthogonal to
      // working precision.
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, basis, basis.size());
        project_out(w, deflate);
      }
      const double b = w.norm();
      size = j + 1;
      if (b <= 1e-13 * scale) {
        invariant = true;
        break;
      }
      if (j + 1 == max_basis) break;
      tri.beta.push_back(b);
      basis.push_back(w / b);
    }

    const auto es = tri.solve(size);
    const RVector y = es.eigenvectors().col(0);
    CVector x = CVector::Zero(dim);
    for (std::size_t i = 0; i < size; ++i) x += basis[i] * y[static_cast<Eigen::Index>(i)];
    project_out(x, deflate);
    x.normalize();
    op(x, hx);
    ++result.matvecs;
    const double theta = x.dot(hx).real();
    CVector r = hx - theta * x;
    project_out(r, deflate);
    result.value = theta;
    result.vector = x;
    result.residual = r.norm();
    if (result.residual <= options.tolerance * std::max(1.0, std::abs(theta)) ||
        (invariant && result.residual <= 1e-9 * std::max(1.0, std::abs(theta)))) {
      return result;
    }
    v = x;
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge after " << options.max_restarts
      << " restarts; achieved residual " << result.residual;
  throw Error(ErrorKind::kConvergence, msg.str());
}

EigenPair lanczos_highest(const MatVec& op, Eigen::Index dim, const LanczosOptions& options) {
  MatVec negated = [&op](const CVector& in, CVector& out) {
    op(in, out);
    out = -out;
  };
  EigenPair p = lanczos_lowest(negated, dim, options);
  p.value = -p.value;
  return p;
}

DenseSpectrum hermitian_eigen(const CMatrix& m) {
  require(m.rows() == m.cols(), ErrorKind::kShape, "eigendecomposition of a non-square matrix");
  DenseSpectrum out;
  if (m.imag().cwiseAbs().maxCoeff() == 0.0 || m.size() == 0) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(m.real());
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors().cast<Complex>();
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

double expmv(const MatVec& op, CVector& v, double t, const ExpmvOptions& options) {
  require(options.max_krylov >= 2, ErrorKind::kInvalidParameter, "max_krylov must be >= 2");
  if (t == 0.0) return 0.0;
  const Eigen::Index dim = v.size();
  const double total = std::abs(t);
  const double sign = t > 0 ? 1.0 : -1.0;
  double remaining = total;
  double tau_guess = total;
  double accumulated = 0.0;
  CVector w(dim);
  std::vector<CVector> basis;

  while (remaining > 0.0) {
    const double norm_v = v.norm();
    if (norm_v == 0.0) return accumulated;
    basis.clear();
    basis.push_back(v / norm_v);
    Tridiagonal tri;
    double tau = std::min(tau_guess, remaining);
    bool accepted = false;
    CVector coeffs;
    double err = 0.0;
    const auto max_size = static_cast<std::size_t>(std::min<Eigen::Index>(options.max_krylov, dim));

    // Exponentiates the current tridiagonal at step tau; returns the
    // coefficient vector and the standard error estimate.
    auto propagate_small = [&](std::size_t size, double step, double next_beta) {
      const auto es = tri.solve(size);
      const RMatrix& y = es.eigenvectors();
      CVector phases(static_cast<Eigen::Index>(size));
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(size); ++i) {
        phases[i] = std::exp(Complex(0.0, -sign * step * es.eigenvalues()[i])) * y(0, i);
      }
      CVector c = y.cast<Complex>() * phases;
      const double e = next_beta * std::abs(c[static_cast<Eigen::Index>(size) - 1]) * norm_v;
      return std::make_pair(c, e);
    };

    std::size_t size = 0;
    double last_beta = 0.0;
    bool invariant = false;
    for (std::size_t j = 0; j < max_size; ++j) {
      op(basis[j], w);
      const double a = basis[j].dot(w).real();
      tri.alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass) project_out(w, basis, basis.size());
      last_beta = w.norm();
      size = j + 1;
      if (last_beta <= 1e-14 * std::max(1.0, std::abs(a))) {
        invariant = true;
        break;
      }
      if (size >= 2) {
        auto [c, e] = propagate_small(size, tau, last_beta);
        if (e <= options.tolerance * tau / total) {
          coeffs = std::move(c);
          err = e;
          accepted = true;
          break;
        }
      }
      if (j + 1 == max_size) break;
      tri.beta.push_back(last_beta);
      basis.push_back(w / last_beta);
    }

    if (invariant) {
      auto [c, e] = propagate_small(size, tau, 0.0);
      coeffs = std::move(c);
      err = e;
      accepted = true;
    }
    while (!accepted) {
      tau *= 0.5;
      require(tau > 1e-12 * total, ErrorKind::kConvergence, "expmv step size underflow");
      auto [c, e] = propagate_small(size, tau, last_beta);
      if (e <= options.tolerance * tau / total) {
        coeffs = std::move(c);
        err = e;
        accepted = true;
      }
    }

    CVector next = CVector::Zero(dim);
    for (std::size_t i = 0; i < size; ++i) next += basis[i] * coeffs[static_cast<Eigen::Index>(i)];
    v = norm_v * next;
    accumulated += err;
    remaining -= tau;
    if (remaining < 1e-15 * total) remaining = 0.0;
    tau_guess = size < max_size / 2 ? tau * 2.0 : tau;
  }
  return accumulated;
}

bool CsrMatrix::is_real(double tol) const {
  return std::all_of(values.begin(), values.end(),
                     [tol](const Complex& z) { return std::abs(z.imag()) <= tol; });
}

CMatrix CsrMatrix::to_dense() const {
  CMatrix m = CMatrix::Zero(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (auto p = row_ptr[static_cast<std::size_t>(i)]; p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      m(i, cols[static_cast<std::size_t>(p)]) += values[static_cast<std::size_t>(p)];
    }
  }
  return m;
}

double CsrMatrix::hermiticity_error() const {
  const CMatrix m = to_dense();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace skqd::linalg
