// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "skqd/kernels.hpp"
#include "skqd/linalg.hpp"
#include "skqd/pauli.hpp"
#include "skqd/random.hpp"

namespace skqd {

double eps_kqd(const KqdBoundInputs& in) {
  if (in.overlap == 0.0) throw Error(ErrorKind::kUndefinedBound, "ground-state overlap is zero");
  require(in.overlap > 0.0 && in.overlap <= 1.0, ErrorKind::kInvalidParameter, "overlap must lie in (0, 1]");
  require(in.gap > 0.0 && in.width >= in.gap, ErrorKind::kInvalidParameter, "need width >= gap > 0");
  require(in.d >= 1, ErrorKind::kInvalidParameter, "Krylov dimension must be >= 1");
  const int d = in.d % 2 == 1 ? in.d : in.d - 1;
  const double decay = std::pow(1.0 + std::numbers::pi * in.gap / in.width, -(d - 1));
  return 8.0 * in.width * ((1.0 - in.overlap) / in.overlap) * decay;
}

EpsTilde eps_tilde(double eps, double gap) {
  require(eps >= 0.0 && gap > 0.0, ErrorKind::kInvalidParameter, "eps_tilde needs eps >= 0 and gap > 0");
  if (eps >= gap) return {2.0, true};
  return {2.0 - 2.0 * std::sqrt(1.0 - eps / gap), false};
}

ShiftedSparsity sparsity_shift(double alpha0, double beta0, double eps_tilde) {
  require(eps_tilde >= 0.0, ErrorKind::kInvalidParameter, "eps_tilde must be nonnegative");
  const double shift = 2.0 * std::sqrt(eps_tilde);
  ShiftedSparsity out{alpha0 - shift, beta0 - shift, false};
  out.negative = out.alpha < 0.0 || out.beta < 0.0;
  return out;
}

double coverage_probability(double overlap, double beta, int d) {
  require(d >= 1, ErrorKind::kInvalidParameter, "Krylov dimension must be >= 1");
  return overlap * beta / (static_cast<double>(d) * d);
}

FailureBound failure_bound(std::size_t l, double p, double m) {
  require(l >= 1 && p >= 0.0 && p <= 1.0 && m >= 0.0, ErrorKind::kInvalidParameter,
          "failure bound needs L >= 1, p in [0, 1], M >= 0");
  const double ld = static_cast<double>(l);
  return {std::min(1.0, ld * std::pow(1.0 - p, m)), ld * std::exp(-m * p)};
}

double subspace_energy_bound(double h_norm, double alpha0) {
  require(alpha0 >= 0.0 && alpha0 <= 1.0 + 1e-12, ErrorKind::kInvalidParameter, "alpha must lie in [0, 1]");
  return 2.0 * std::numbers::sqrt2 * h_norm * std::sqrt(std::max(0.0, 1.0 - std::sqrt(std::min(1.0, alpha0))));
}

SampleComplexityReport sample_complexity_report(const KqdBoundInputs& inputs, double alpha0, double beta0, std::size_t l,
                                    double eta, double h_norm) {
  require(eta > 0.0 && l >= 1, ErrorKind::kInvalidParameter, "need eta > 0 and L >= 1");
  SampleComplexityReport r;
  r.eps = eps_kqd(inputs);
  r.eps_tilde = eps_tilde(r.eps, inputs.gap);
  r.shifted = sparsity_shift(alpha0, beta0, r.eps_tilde.value);
  r.energy_bound = subspace_energy_bound(h_norm, alpha0);
  if (r.shifted.beta <= 0.0) {
    r.vacuous = true;
    r.p = 0.0;
    r.sample_bound = std::numeric_limits<double>::infinity();
    return r;
  }
  r.p = coverage_probability(inputs.overlap, r.shifted.beta, inputs.d);
  const double dd = static_cast<double>(inputs.d) * inputs.d;
  r.sample_bound = dd * std::log(static_cast<double>(l) / eta) / (inputs.overlap * r.shifted.beta);
  return r;
}

double chebyshev_filter(double theta, double a, int d_poly) {
  require(a > 0.0 && a < std::numbers::pi, ErrorKind::kInvalidParameter, "filter edge a must lie in (0, pi)");
  require(d_poly >= 1, ErrorKind::kInvalidParameter, "filter degree must be at least 1");
  const double ca = std::cos(a);
  const double x = 1.0 + 2.0 * (std::cos(theta) - ca) / (ca + 1.0);
  const double x0 = 1.0 + 2.0 * (1.0 - ca) / (ca + 1.0);
  const double k = d_poly;
  const double y0 = std::acosh(x0);
  if (x > 1.0) {
    // Ratio of cosh values without forming either one.
    const double y = std::acosh(x);
    return std::exp(k * (y - y0)) * (1.0 + std::exp(-2.0 * k * y)) / (1.0 + std::exp(-2.0 * k * y0));
  }
  const double inv_cosh = 2.0 * std::exp(-k * y0) / (1.0 + std::exp(-2.0 * k * y0));
  return std::cos(k * std::acos(std::max(-1.0, x))) * inv_cosh;
}

std::vector<double> chebyshev_fourier(double a, int d_poly) {
  require(d_poly >= 0, ErrorKind::kInvalidParameter, "filter degree must be nonnegative");
  if (d_poly == 0) return {1.0};
  const int points = 4 * d_poly + 3;
  std::vector<double> samples(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    samples[static_cast<std::size_t>(j)] = chebyshev_filter(2.0 * std::numbers::pi * j / points, a, d_poly);
  }
  std::vector<double> c(static_cast<std::size_t>(2 * d_poly + 1));
  for (int k = -d_poly; k <= d_poly; ++k) {
    double acc = 0.0;
    for (int j = 0; j < points; ++j) {
      acc += samples[static_cast<std::size_t>(j)] * std::cos(2.0 * std::numbers::pi * k * j / points);
    }
    c[static_cast<std::size_t>(k + d_poly)] = acc / points;
  }
  return c;
}

MagnetizationSparsity magnetization_sparsity(double h, int n, int max_qubits) {
  require(h > 0.0, ErrorKind::kInvalidParameter, "field must be positive (the h = 0 ground state is degenerate)");
  if (n > max_qubits) {
    std::ostringstream msg;
    msg << "sparsity quantities limited to " << max_qubits << " qubits; got " << n;
    throw Error(ErrorKind::kCapacity, msg.str());
  }
  const PauliSum hamiltonian = build_tfim_periodic(n, h);
  const auto dim = static_cast<Eigen::Index>(hamiltonian.dim());
  const auto full = static_cast<Eigen::Index>(dim - 1);
  const auto flip = [&](const CVector& v) {
    CVector out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) out[i] = v[i ^ full];
    return out;
  };
  const auto sector_ground = [&](double sign) {
    linalg::MatVec op = [&](const CVector& in, CVector& out) {
      const CVector projected = 0.5 * (in + sign * flip(in));
      kernels::pauli_apply(hamiltonian, projected, out);
      out = (0.5 * (out + sign * flip(out))).eval();
    };
    CVector start = linalg::pseudo_random_unit(dim, 0xe5);
    start = (0.5 * (start + sign * flip(start))).normalized();
    return linalg::lanczos_lowest(op, dim, {}, {}, &start);
  };
  const auto even = sector_ground(1.0);
  const auto odd = sector_ground(-1.0);

  // Magnetisation operator (1/n) sum Z_i is diagonal: 1 - 2 w / n.
  RVector zbar(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    zbar[i] = 1.0 - 2.0 * std::popcount(static_cast<std::uint64_t>(i)) / static_cast<double>(n);
  }
  const Complex cross = even.vector.dot(zbar.cast<Complex>().cwiseProduct(odd.vector));
  const Complex phase = std::abs(cross) > 0.0 ? std::conj(cross) / std::abs(cross) : Complex(1.0);
  const CVector ground = (even.vector + phase * odd.vector) / std::numbers::sqrt2;

  MagnetizationSparsity out;
  out.n = n;
  out.h = h;
  out.even_energy = even.value;
  out.odd_energy = odd.value;
  out.pbar.assign(static_cast<std::size_t>(n + 1), 0.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.pbar[static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(i)))] += std::norm(ground[i]);
  }
  double acc = 0.0;
  for (int w = 0; w <= n; ++w) {
    out.magnetization += out.pbar[static_cast<std::size_t>(w)] * (1.0 - 2.0 * w / static_cast<double>(n));
  }
  for (int k = 0; k <= n; ++k) {
    acc += out.pbar[static_cast<std::size_t>(k)];
    out.tail.push_back(std::max(0.0, 1.0 - acc));
    out.bound.push_back(std::min(n * (1.0 - out.magnetization) / (2.0 * k + 2.0), 1.0));
  }
  return out;
}

CheckRecord make_check(std::string check, std::vector<std::pair<std::string, double>> inputs, double measured,
                       double bound, double slack) {
  const bool pass = std::isfinite(measured) && std::isfinite(bound) && measured <= bound + slack;
  return {std::move(check), std::move(inputs), measured, bound, pass};
}

void SweepSummary::add(CheckRecord record) {
  ++instances;
  if (!record.pass) ++violations;
  worst_margin = std::min(worst_margin, record.bound - record.measured);
  records.push_back(std::move(record));
}

namespace {

CVector random_vector(Rng& rng, Eigen::Index dim) {
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return v;
}

CMatrix random_hermitian(Rng& rng, Eigen::Index dim) {
  CMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return 0.5 * (m + m.adjoint());
}

// Indices by descending |v_i|^2 (ties by index).
std::vector<Eigen::Index> weight_order(const CVector& v) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::norm(v[a]) > std::norm(v[b]); });
  return order;
}

double log_uniform(Rng& rng, double lo_exp, double hi_exp) {
  return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * rng.uniform());
}

}  // namespace

SweepSummary verify_state_closeness(std::size_t instances, std::uint64_t seed) {
  SweepSummary out;
  out.name = "state-closeness";
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(seed, i);
    const int n = 2 + static_cast<int>(rng.below(5));
    const Eigen::Index dim = Eigen::Index{1} << n;
    const CMatrix h = random_hermitian(rng, dim);
    const auto spec = linalg::hermitian_eigen(h);
    const double gap = spec.values[1] - spec.values[0];
    const CVector phi0 = spec.vectors.col(0);
    CVector psi = (phi0 + log_uniform(rng, -4.0, 0.5) * random_vector(rng, dim).normalized()).normalized();
    const Complex ov = psi.dot(phi0);
    psi *= ov / std::abs(ov);  // <psi|phi0> real, nonnegative
    const double eps = std::max(0.0, psi.dot(h * psi).real() - spec.values[0]);
    const double dist = (psi - phi0).squaredNorm();
    out.add(make_check("state-closeness", {{"n", n}, {"eps", eps}, {"gap", gap}}, dist, eps_tilde(eps, gap).value));
  }
  return out;
}

SweepSummary verify_sparsity_transfer(std::size_t instances, std::uint64_t seed) {
  SweepSummary out;
  out.name = "sparsity-transfer";
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(seed, i);
    const int n = 2 + static_cast<int>(rng.below(7));
    const Eigen::Index dim = Eigen::Index{1} << n;
    const double decay = 3.0 * rng.uniform();
    CVector phi = random_vector(rng, dim);
    for (Eigen::Index j = 0; j < dim; ++j) phi[j] *= std::exp(-decay * j);
    phi.normalize();
    const CVector psi = (phi + log_uniform(rng, -4.0, 0.0) * random_vector(rng, dim).normalized()).normalized();
    const double eps = (psi - phi).squaredNorm();
    const auto order = weight_order(phi);
    const auto l = static_cast<std::size_t>(1 + rng.below(static_cast<std::uint64_t>(dim)));
    double alpha0 = 0.0;
    double beta0 = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
    for (std::size_t j = 0; j < l; ++j) {
      alpha0 += std::norm(phi[order[j]]);
      beta0 = std::min(beta0, std::norm(phi[order[j]]));
      alpha += std::norm(psi[order[j]]);
      beta = std::min(beta, std::norm(psi[order[j]]));
    }
    const auto shifted = sparsity_shift(alpha0, beta0, eps);
    const std::vector<std::pair<std::string, double>> inputs{
        {"n", n}, {"L", static_cast<double>(l)}, {"eps", eps}, {"alpha0", alpha0}, {"beta0", beta0}};
    out.add(make_check("sparsity-transfer-alpha", inputs, shifted.alpha, alpha));
    out.add(make_check("sparsity-transfer-beta", inputs, shifted.beta, beta));
  }
  return out;
}

SweepSummary verify_bitstring_coverage(std::size_t instances, std::uint64_t seed) {
  SweepSummary out;
  out.name = "bitstring-coverage";
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(seed, i);
    CMatrix h;
    CVector psi0;
    int n = 0;
    if (i % 4 == 0) {
      n = 2 + static_cast<int>(rng.below(5));
      const double h1 = 0.05 + 0.95 * rng.uniform();
      const double h2 = 0.05 + 0.95 * rng.uniform();
      h = dense_matrix(build_tfim_open(n, h1, h2));
      psi0 = CVector::Zero(h.rows());
      psi0[0] = 1.0;
    } else {
      n = 2 + static_cast<int>(rng.below(4));
      h = random_hermitian(rng, Eigen::Index{1} << n);
    }
    const auto spec = linalg::hermitian_eigen(h);
    const Eigen::Index dim = h.rows();
    const double e0 = spec.values[0];
    const double width = spec.values[dim - 1] - e0;
    const double gap = spec.values[1] - e0;
    if (gap <= 1e-9 * width) continue;
    const CVector phi0 = spec.vectors.col(0);
    if (psi0.size() == 0) {
      psi0 = (random_vector(rng, dim).normalized() + 2.0 * rng.uniform() * phi0).normalized();
    }
    const double overlap = std::norm(phi0.dot(psi0));
    if (overlap < 1e-6) continue;
    const int d = 1 + static_cast<int>(rng.below(10));
    const int dp = (d - 1) / 2;
    const double dt = std::numbers::pi / width;
    const double a = std::numbers::pi * gap / width;
    const auto ctilde = chebyshev_fourier(a, dp);

    const CVector spectral = spec.vectors.adjoint() * psi0;
    std::vector<CVector> states;
    for (int m = 0; m < d; ++m) {
      CVector phased(dim);
      for (Eigen::Index j = 0; j < dim; ++j) phased[j] = std::exp(Complex(0.0, -m * dt * spec.values[j])) * spectral[j];
      states.push_back(spec.vectors * phased);
    }
    // Shifted filter state, moved onto states 0..2dp by a global evolution.
    CVector cert = CVector::Zero(dim);
    std::vector<Complex> coeff;
    for (int k = -dp; k <= dp; ++k) {
      const Complex ck = ctilde[static_cast<std::size_t>(k + dp)] * std::exp(Complex(0.0, k * e0 * dt));
      coeff.push_back(ck);
      cert += ck * states[static_cast<std::size_t>(k + dp)];
    }
    const double norm = cert.norm();
    double max_dk = 0.0;
    for (const auto& ck : coeff) max_dk = std::max(max_dk, std::abs(ck) / norm);
    const CVector certificate = cert / norm;
    const double gamma = std::sqrt(overlap);
    const std::vector<std::pair<std::string, double>> inputs{
        {"n", n}, {"d", d}, {"overlap", overlap}, {"gap", gap}, {"width", width}};
    out.add(make_check("certificate-coefficients", inputs, max_dk * gamma, 1.0));
    out.add(make_check("certificate-norm", inputs, gamma, norm));
    const double energy = certificate.dot(h * certificate).real() - e0;
    out.add(make_check("certificate-energy", inputs, energy, eps_kqd({width, gap, std::min(1.0, overlap), d})));

    const auto order = weight_order(certificate);
    std::size_t support = 0;
    while (support < order.size() && std::norm(certificate[order[support]]) > 1e-14) ++support;
    if (support == 0) continue;
    const auto l = static_cast<std::size_t>(1 + rng.below(support));
    const double beta = std::norm(certificate[order[l - 1]]);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < l; ++j) {
      double best = 0.0;
      for (const auto& s : states) best = std::max(best, std::norm(s[order[j]]));
      worst = std::min(worst, best);
    }
    auto with_l = inputs;
    with_l.emplace_back("L", static_cast<double>(l));
    with_l.emplace_back("beta", beta);
    out.add(make_check("bitstring-coverage", with_l, coverage_probability(overlap, beta, d), worst));
  }
  return out;
}

SweepSummary verify_failure_probability(std::size_t trials, std::uint64_t seed) {
  SweepSummary out;
  out.name = "failure-probability";
  std::uint64_t point = 0;
  for (std::size_t l : {1, 2, 4, 8}) {
    for (double p : {0.01, 0.05, 0.1}) {
      for (std::uint64_t m : {10, 30, 100}) {
        Rng rng(seed, point++);
        std::size_t failures = 0;
        std::vector<char> seen(l);
        for (std::size_t t = 0; t < trials; ++t) {
          std::fill(seen.begin(), seen.end(), 0);
          for (std::uint64_t s = 0; s < m; ++s) {
            const double u = rng.uniform();
            const auto slot = static_cast<std::size_t>(u / p);
            if (slot < l) seen[slot] = 1;
          }
          if (std::find(seen.begin(), seen.end(), 0) != seen.end()) ++failures;
        }
        const double freq = static_cast<double>(failures) / static_cast<double>(trials);
        const double bound = failure_bound(l, p, static_cast<double>(m)).tight;
        // Three binomial standard deviations of Monte-Carlo noise.
        const double slack = 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
        out.add(make_check("failure-probability",
                           {{"L", static_cast<double>(l)}, {"p", p}, {"M", static_cast<double>(m)},
                            {"trials", static_cast<double>(trials)}, {"mc_slack", slack}},
                           freq, bound, slack + kBoundSlack));
      }
    }
  }
  return out;
}

SweepSummary verify_truncation_energy(std::uint64_t seed, int max_qubits) {
  SweepSummary out;
  out.name = "truncation-energy";
  std::uint64_t instance = 0;
  for (int n = 2; n <= max_qubits; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      Rng rng(seed, instance++);
      const double h1 = 0.05 + 1.45 * rng.uniform();
      const double h2 = 0.05 + 1.45 * rng.uniform();
      const CMatrix h = dense_matrix(build_tfim_open(n, h1, h2));
      const auto spec = linalg::hermitian_eigen(h);
      const double e0 = spec.values[0];
      const double h_norm = std::max(std::abs(e0), std::abs(spec.values[spec.values.size() - 1]));
      const CVector phi0 = spec.vectors.col(0);
      const auto order = weight_order(phi0);
      CVector trunc = CVector::Zero(h.rows());
      double alpha = 0.0;
      for (std::size_t l = 1; l <= order.size(); ++l) {
        trunc[order[l - 1]] = phi0[order[l - 1]];
        alpha += std::norm(phi0[order[l - 1]]);
        const CVector state = trunc.normalized();
        const double err = state.dot(h * state).real() - e0;
        out.add(make_check("truncation-energy",
                           {{"n", n}, {"h1", h1}, {"h2", h2}, {"L", static_cast<double>(l)}, {"alpha", alpha}},
                           err, subspace_energy_bound(h_norm, std::min(1.0, alpha))));
      }
    }
  }
  return out;
}

SweepSummary verify_chebyshev(int grid_points, int max_degree) {
  SweepSummary out;
  out.name = "chebyshev-filter";
  for (double a : {0.1, 0.5, 1.0}) {
    for (int dp = 1; dp <= max_degree; ++dp) {
      const double at_zero = chebyshev_filter(0.0, a, dp);
      out.add(make_check("filter-normalisation", {{"a", a}, {"d_poly", dp}}, std::abs(at_zero - 1.0), 0.0, 0.0));
      double worst = 0.0;
      for (int i = 0; i < grid_points; ++i) {
        const double theta = a + (std::numbers::pi - a) * i / (grid_points - 1);
        const double v = chebyshev_filter(theta, a, dp);
        worst = std::isfinite(v) ? std::max(worst, std::abs(v)) : v;
      }
      out.add(make_check("filter-out-of-band", {{"a", a}, {"d_poly", dp}}, worst, 2.0 * std::pow(1.0 + a, -dp)));
    }
  }
  return out;
}

}  // namespace skqd
