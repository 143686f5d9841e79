// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/fermion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "skqd/kernels.hpp"

namespace skqd {

namespace {

constexpr std::uint64_t bit(int p) { return std::uint64_t{1} << p; }

// Occupied modes strictly between p and q.
int between_parity(std::uint64_t mask, int p, int q) {
  const int lo = std::min(p, q);
  const int hi = std::max(p, q);
  if (hi - lo <= 1) return 0;
  const std::uint64_t window = (bit(hi) - 1) & ~(bit(lo + 1) - 1);
  return std::popcount(mask & window) & 1;
}

// Sign of a global Jordan-Wigner string below position g.
double jw_sign(ConfigKey key, int g) {
  return (std::popcount(key & (bit(g) - 1)) & 1) ? -1.0 : 1.0;
}

// a+_p a_r on one spin block; returns false when the result vanishes.
bool excite(std::uint64_t mask, int p, int r, std::uint64_t& out, double& sign) {
  if (!(mask & bit(r))) return false;
  if (p == r) {
    out = mask;
    sign = 1.0;
    return true;
  }
  if (mask & bit(p)) return false;
  out = mask ^ bit(r) ^ bit(p);
  sign = between_parity(mask, p, r) ? -1.0 : 1.0;
  return true;
}

struct Term {
  std::uint64_t mask;
  double amplitude;
};

// B|m> with B = sum_{p,r in support} w_p w_r a+_p a_r, merged.
void apply_rank_one_density(std::uint64_t mask, const RVector& w, const std::vector<int>& support,
                            std::vector<Term>& out) {
  out.clear();
  for (int r : support) {
    if (!(mask & bit(r))) continue;
    for (int p : support) {
      std::uint64_t next = 0;
      double sign = 1.0;
      if (!excite(mask, p, r, next, sign)) continue;
      const double amp = w[p] * w[r] * sign;
      auto it = std::find_if(out.begin(), out.end(), [next](const Term& t) { return t.mask == next; });
      if (it == out.end()) {
        out.push_back({next, amp});
      } else {
        it->amplitude += amp;
      }
    }
  }
}

std::vector<std::uint64_t> strings_with_weight(int n, int k) {
  std::vector<std::uint64_t> out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint64_t limit = bit(n);
  // Gosper's hack enumerates same-weight masks in increasing order.
  for (std::uint64_t x = bit(k) - 1; x < limit;) {
    out.push_back(x);
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// DeterminantSector

DeterminantSector::DeterminantSector(int n_modes, int n_up, int n_down)
    : n_modes_(n_modes), n_up_(n_up), n_down_(n_down) {
  require(n_modes >= 1 && n_modes <= 31, ErrorKind::kInvalidSector, "sector supports 1..31 modes");
  if (n_up < 0 || n_up > n_modes || n_down < 0 || n_down > n_modes) {
    std::ostringstream msg;
    msg << "electron counts (" << n_up << ", " << n_down << ") out of range for " << n_modes << " modes";
    throw Error(ErrorKind::kInvalidSector, msg.str());
  }
  up_ = strings_with_weight(n_modes, n_up);
  down_ = strings_with_weight(n_modes, n_down);
  binomial_.assign(static_cast<std::size_t>(n_modes + 1), std::vector<std::size_t>(static_cast<std::size_t>(n_modes + 2), 0));
  for (int a = 0; a <= n_modes; ++a) {
    binomial_[static_cast<std::size_t>(a)][0] = 1;
    for (int b = 1; b <= a; ++b) {
      binomial_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          binomial_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] +
          (b <= a - 1 ? binomial_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)] : 0);
    }
  }
}

std::size_t DeterminantSector::rank(std::uint64_t mask) const {
  // Combinatorial number system: colex rank == rank in increasing integer order.
  std::size_t r = 0;
  std::size_t i = 1;
  while (mask) {
    const int c = std::countr_zero(mask);
    if (static_cast<std::size_t>(c) >= i) r += binomial_[static_cast<std::size_t>(c)][i];
    mask &= mask - 1;
    ++i;
  }
  return r;
}

ConfigKey DeterminantSector::key(std::size_t index) const {
  require(index < dim(), ErrorKind::kIndex, "determinant index out of range");
  return compose(up_[index / down_.size()], down_[index % down_.size()]);
}

bool DeterminantSector::contains(ConfigKey key) const {
  if (n_modes_ < 32 && (key >> (2 * n_modes_)) != 0) return false;
  return std::popcount(up_mask(key)) == n_up_ && std::popcount(down_mask(key)) == n_down_;
}

std::optional<std::size_t> DeterminantSector::index(ConfigKey key) const {
  if (!contains(key)) return std::nullopt;
  return rank(up_mask(key)) * down_.size() + rank(down_mask(key));
}

SectorHandle make_sector(int n_modes, int n_up, int n_down) {
  return std::make_shared<const DeterminantSector>(n_modes, n_up, n_down);
}

SectorHandle half_filling_sector(int n_modes) {
  return make_sector(n_modes, n_modes / 2, n_modes / 2);
}

// ---------------------------------------------------------------------------
// FermionHamiltonian

FermionHamiltonian::FermionHamiltonian(RMatrix h_one, TwoBody h_two, double core_shift)
    : h_one_(std::move(h_one)), h_two_(std::move(h_two)), core_shift_(core_shift) {
  const auto n = h_one_.rows();
  require(n >= 1 && h_one_.cols() == n, ErrorKind::kShape, "one-body matrix must be square");
  require(n <= 31, ErrorKind::kInvalidSize, "at most 31 spatial modes");
  const double asym = (h_one_ - h_one_.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * std::max(1.0, h_one_.cwiseAbs().maxCoeff()), ErrorKind::kInvalidParameter,
          "one-body matrix is not symmetric");
  h_one_ = 0.5 * (h_one_ + h_one_.transpose());
  if (const auto* r1 = std::get_if<RankOneInteraction>(&h_two_)) {
    require(r1->weights.size() == n, ErrorKind::kShape, "rank-one weights must have n_modes entries");
    const double norm = r1->weights.norm();
    if (norm > 0.0 && r1->u != 0.0) {
      rank_one_u_ = r1->u * std::pow(norm, 4);
      rank_one_w_ = r1->weights / norm;
      for (int p = 0; p < n; ++p) {
        if (std::abs(rank_one_w_[p]) > 1e-15) rank_one_support_.push_back(p);
      }
    }
  } else if (const auto* dense = std::get_if<DenseInteraction>(&h_two_)) {
    const auto nn = static_cast<std::size_t>(n);
    require(dense->n_modes == n && dense->values.size() == nn * nn * nn * nn, ErrorKind::kShape,
            "dense two-body tensor must have n_modes^4 entries");
  }
}

double FermionHamiltonian::two_body(int p, int q, int r, int s) const {
  if (const auto* r1 = std::get_if<RankOneInteraction>(&h_two_)) {
    return r1->u * r1->weights[p] * r1->weights[q] * r1->weights[r] * r1->weights[s];
  }
  if (const auto* dense = std::get_if<DenseInteraction>(&h_two_)) return (*dense)(p, q, r, s);
  return 0.0;
}

DenseInteraction FermionHamiltonian::dense_two_body() const {
  const int n = n_modes();
  DenseInteraction out{n, std::vector<double>(static_cast<std::size_t>(n * n * n * n), 0.0)};
  std::size_t idx = 0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) out.values[idx++] = two_body(p, q, r, s);
  return out;
}

FermionHamiltonian FermionHamiltonian::one_body_part() const {
  return FermionHamiltonian(h_one_, std::monostate{}, core_shift_);
}

FermionHamiltonian FermionHamiltonian::two_body_part() const {
  return FermionHamiltonian(RMatrix::Zero(h_one_.rows(), h_one_.cols()), h_two_, 0.0);
}

void FermionHamiltonian::connections(ConfigKey det, std::vector<Connection>& out) const {
  const int n = n_modes();
  const std::uint64_t masks[2] = {det & (bit(n) - 1), det >> n};
  const auto compose = [n](std::uint64_t up, std::uint64_t down) { return up | (down << n); };
  double diagonal = core_shift_;

  for (int s = 0; s < 2; ++s) {
    const std::uint64_t m = masks[s];
    for (std::uint64_t occ = m; occ; occ &= occ - 1) {
      const int q = std::countr_zero(occ);
      diagonal += h_one_(q, q);
      for (int p = 0; p < n; ++p) {
        if (p == q || (m & bit(p))) continue;
        const double hpq = h_one_(p, q);
        if (hpq == 0.0) continue;
        const std::uint64_t next = m ^ bit(q) ^ bit(p);
        const double sign = between_parity(m, p, q) ? -1.0 : 1.0;
        const ConfigKey target = s == 0 ? compose(next, masks[1]) : compose(masks[0], next);
        out.push_back({target, hpq * sign});
      }
    }
  }
  out.push_back({det, diagonal});

  if (rank_one_u_ != 0.0) {
    // U' n_{b,up} n_{b,down}: up and down densities commute.
    std::vector<Term> down_terms;
    std::vector<Term> up_terms;
    apply_rank_one_density(masks[1], rank_one_w_, rank_one_support_, down_terms);
    if (down_terms.empty()) return;
    apply_rank_one_density(masks[0], rank_one_w_, rank_one_support_, up_terms);
    for (const auto& d : down_terms) {
      for (const auto& u : up_terms) {
        out.push_back({compose(u.mask, d.mask), rank_one_u_ * u.amplitude * d.amplitude});
      }
    }
    return;
  }

  const auto* dense = std::get_if<DenseInteraction>(&h_two_);
  if (dense == nullptr) return;
  // a+_p a+_q a_s a_r = E_pr E_qs - delta_{qr} E_ps (same spin).
  for (int tau = 0; tau < 2; ++tau) {
    for (std::uint64_t occ_s = masks[tau]; occ_s; occ_s &= occ_s - 1) {
      const int s_mode = std::countr_zero(occ_s);
      for (int q = 0; q < n; ++q) {
        std::uint64_t m1 = 0;
        double sign1 = 1.0;
        if (!excite(masks[tau], q, s_mode, m1, sign1)) continue;
        std::uint64_t mid[2] = {masks[0], masks[1]};
        mid[tau] = m1;
        for (int sigma = 0; sigma < 2; ++sigma) {
          for (std::uint64_t occ_r = mid[sigma]; occ_r; occ_r &= occ_r - 1) {
            const int r = std::countr_zero(occ_r);
            for (int p = 0; p < n; ++p) {
              const double h = (*dense)(p, q, r, s_mode);
              if (h == 0.0) continue;
              std::uint64_t m2 = 0;
              double sign2 = 1.0;
              if (!excite(mid[sigma], p, r, m2, sign2)) continue;
              std::uint64_t fin[2] = {mid[0], mid[1]};
              fin[sigma] = m2;
              out.push_back({compose(fin[0], fin[1]), 0.5 * h * sign1 * sign2});
            }
          }
        }
      }
    }
  }
  for (int sigma = 0; sigma < 2; ++sigma) {
    for (std::uint64_t occ_s = masks[sigma]; occ_s; occ_s &= occ_s - 1) {
      const int s_mode = std::countr_zero(occ_s);
      for (int p = 0; p < n; ++p) {
        double k = 0.0;
        for (int q = 0; q < n; ++q) k += (*dense)(p, q, q, s_mode);
        if (k == 0.0) continue;
        std::uint64_t m1 = 0;
        double sign = 1.0;
        if (!excite(masks[sigma], p, s_mode, m1, sign)) continue;
        std::uint64_t fin[2] = {masks[0], masks[1]};
        fin[sigma] = m1;
        out.push_back({compose(fin[0], fin[1]), -0.5 * k * sign});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Rotations

BasisRotation BasisRotation::identity(int n_modes) { return {RMatrix::Identity(n_modes, n_modes)}; }

double BasisRotation::orthogonality_error() const {
  return (xi.transpose() * xi - RMatrix::Identity(xi.cols(), xi.cols())).cwiseAbs().maxCoeff();
}

BasisRotation compose(const BasisRotation& first, const BasisRotation& then) {
  require(first.xi.cols() == then.xi.rows(), ErrorKind::kShape, "rotation sizes do not chain");
  return {first.xi * then.xi};
}

BasisRotation compose(std::span<const BasisRotation> chain, int n_modes) {
  BasisRotation total = BasisRotation::identity(n_modes);
  for (const auto& r : chain) total = compose(total, r);
  return total;
}

FermionHamiltonian rotate(const FermionHamiltonian& h, const BasisRotation& rotation) {
  const auto& xi = rotation.xi;
  const int n = h.n_modes();
  require(xi.rows() == n && xi.cols() == n, ErrorKind::kShape, "rotation size differs from n_modes");
  RMatrix h_one = xi.transpose() * h.h_one() * xi;
  h_one = 0.5 * (h_one + h_one.transpose());
  TwoBody two = std::monostate{};
  if (const auto* r1 = std::get_if<RankOneInteraction>(&h.h_two())) {
    two = RankOneInteraction{r1->u, xi.transpose() * r1->weights};
  } else if (const auto* dense = std::get_if<DenseInteraction>(&h.h_two())) {
    // One index at a time: O(n^5).
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> cur = dense->values;
    std::vector<double> next(cur.size(), 0.0);
    const std::size_t strides[4] = {nn * nn * nn, nn * nn, nn, 1};
    for (int axis = 0; axis < 4; ++axis) {
      std::fill(next.begin(), next.end(), 0.0);
      const std::size_t stride = strides[axis];
      for (std::size_t idx = 0; idx < cur.size(); ++idx) {
        const std::size_t old_i = (idx / stride) % nn;
        const std::size_t base = idx - old_i * stride;
        for (std::size_t a = 0; a < nn; ++a) {
          next[base + a * stride] += xi(static_cast<Eigen::Index>(old_i), static_cast<Eigen::Index>(a)) * cur[idx];
        }
      }
      std::swap(cur, next);
    }
    two = DenseInteraction{n, std::move(cur)};
  }
  return FermionHamiltonian(std::move(h_one), std::move(two), h.core_shift());
}

// ---------------------------------------------------------------------------
// SIAM builders

SiamParameters SiamParameters::particle_hole_symmetric(int bath_sites, double u) {
  return {bath_sites, u, 1.0, -1.0, -u / 2.0};
}

FermionHamiltonian build_siam_position(const SiamParameters& params) {
  require(params.bath_sites >= 1, ErrorKind::kInvalidSize, "SIAM needs at least one bath site");
  const int n = params.bath_sites + 1;
  RMatrix h = RMatrix::Zero(n, n);
  h(0, 0) = params.eps_imp;
  h(0, 1) = h(1, 0) = params.v;
  for (int j = 0; j + 1 < params.bath_sites; ++j) h(j + 1, j + 2) = h(j + 2, j + 1) = -params.t;
  RVector w = RVector::Zero(n);
  w[0] = 1.0;
  return FermionHamiltonian(std::move(h), RankOneInteraction{params.u, std::move(w)});
}

namespace {

void fix_column_sign_largest(RMatrix& vecs) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      if (std::abs(vecs(r, c)) > best + 1e-12) {
        best = std::abs(vecs(r, c));
        arg = r;
      }
    }
    if (vecs(arg, c) < 0) vecs.col(c) *= -1.0;
  }
}

}  // namespace

std::pair<FermionHamiltonian, BasisRotation> to_momentum_basis(const FermionHamiltonian& h_position) {
  const int n = h_position.n_modes();
  const int bath = n - 1;
  require(bath >= 1, ErrorKind::kInvalidSize, "momentum basis needs at least one bath site");
  const RMatrix hopping = h_position.h_one().block(1, 1, bath, bath);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(hopping);
  RMatrix xi_bath = es.eigenvectors();
  for (Eigen::Index k = 0; k < bath; ++k) {
    if (std::abs(xi_bath(0, k)) > 1e-12) {
      if (xi_bath(0, k) < 0) xi_bath.col(k) *= -1.0;
    } else {
      RMatrix col = xi_bath.col(k);
      fix_column_sign_largest(col);
      xi_bath.col(k) = col;
    }
  }
  BasisRotation rotation = BasisRotation::identity(n);
  rotation.xi.block(1, 1, bath, bath) = xi_bath;
  return {rotate(h_position, rotation), rotation};
}

std::pair<FermionHamiltonian, BasisRotation> to_k_adjacent_natural_orbitals(
    const FermionHamiltonian& h_momentum, const OneRdm& gamma, int k_fermi) {
  const int n = h_momentum.n_modes();
  const int bath = n - 1;
  require(gamma.gamma.rows() == n && gamma.gamma.cols() == n, ErrorKind::kShape,
          "1-RDM dimension differs from the Hamiltonian's mode count");
  if (k_fermi - 1 < 0 || k_fermi + 1 > bath - 1) {
    std::ostringstream msg;
    msg << "k_f = " << k_fermi << " needs neighbours inside 0.." << bath - 1;
    throw Error(ErrorKind::kIndex, msg.str());
  }
  std::vector<std::vector<int>> blocks(3);
  blocks[0] = {0, k_fermi, k_fermi + 1, k_fermi + 2};
  for (int k = 0; k <= k_fermi - 2; ++k) blocks[1].push_back(k + 1);
  for (int k = k_fermi + 2; k <= bath - 1; ++k) blocks[2].push_back(k + 1);

  BasisRotation rotation{RMatrix::Zero(n, n)};
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    const auto size = static_cast<Eigen::Index>(block.size());
    RMatrix sub(size, size);
    for (Eigen::Index a = 0; a < size; ++a)
      for (Eigen::Index b = 0; b < size; ++b) sub(a, b) = gamma.gamma(block[static_cast<std::size_t>(a)], block[static_cast<std::size_t>(b)]);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (sub + sub.transpose()));
    RMatrix vecs = es.eigenvectors().rowwise().reverse();  // descending occupation
    fix_column_sign_largest(vecs);
    for (Eigen::Index a = 0; a < size; ++a)
      for (Eigen::Index c = 0; c < size; ++c)
        rotation.xi(block[static_cast<std::size_t>(a)], block[static_cast<std::size_t>(c)]) = vecs(a, c);
  }
  return {rotate(h_momentum, rotation), rotation};
}

// ---------------------------------------------------------------------------
// Sector operations and observables

namespace {

const SectorHandle& sector_of(const StateVector& v, const char* where) {
  const auto* handle = std::get_if<SectorHandle>(&v.basis);
  require(handle != nullptr && *handle != nullptr, ErrorKind::kShape,
          std::string(where) + ": state is not a determinant-sector state");
  require(v.dim() == (*handle)->dim(), ErrorKind::kShape,
          std::string(where) + ": amplitude count differs from the sector dimension");
  return *handle;
}

}  // namespace

StateVector sector_apply(const FermionHamiltonian& h, const SectorHandle& sector, const StateVector& v) {
  require(sector != nullptr, ErrorKind::kShape, "null sector");
  require(h.n_modes() == sector->n_modes(), ErrorKind::kShape, "Hamiltonian and sector mode counts differ");
  require(same_basis(v.basis, BasisTag{sector}) && v.dim() == sector->dim(), ErrorKind::kShape,
          "state does not live in the requested sector");
  StateVector out{CVector(v.amplitudes.size()), v.basis};
  kernels::sector_apply(h, *sector, v.amplitudes, out.amplitudes);
  return out;
}

CMatrix dense_sector_matrix(const FermionHamiltonian& h, const DeterminantSector& sector) {
  const auto dim = static_cast<Eigen::Index>(sector.dim());
  CMatrix m = CMatrix::Zero(dim, dim);
  std::vector<Connection> buffer;
  for (Eigen::Index j = 0; j < dim; ++j) {
    buffer.clear();
    h.connections(sector.key(static_cast<std::size_t>(j)), buffer);
    for (const auto& c : buffer) m(static_cast<Eigen::Index>(*sector.index(c.target)), j) += c.amplitude;
  }
  return m;
}

OneRdm one_rdm(const StateVector& v) {
  const auto& sector = sector_of(v, "one_rdm");
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "one_rdm: state norm " << norm << " deviates from 1 by more than 1e-8";
    throw Error(ErrorKind::kNormalization, msg.str());
  }
  const int n = sector->n_modes();
  CMatrix g = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < sector->dim(); ++i) {
    const Complex amp = v.amplitudes[static_cast<Eigen::Index>(i)];
    if (amp == Complex{}) continue;
    const ConfigKey key = sector->key(i);
    const std::uint64_t masks[2] = {sector->up_mask(key), sector->down_mask(key)};
    for (int s = 0; s < 2; ++s) {
      for (std::uint64_t occ = masks[s]; occ; occ &= occ - 1) {
        const int q = std::countr_zero(occ);
        g(q, q) += std::norm(amp);
        for (int p = 0; p < n; ++p) {
          if (masks[s] & bit(p)) continue;
          std::uint64_t next = 0;
          double sign = 1.0;
          excite(masks[s], p, q, next, sign);
          const ConfigKey target = s == 0 ? sector->compose(next, masks[1]) : sector->compose(masks[0], next);
          g(p, q) += std::conj(v.amplitudes[static_cast<Eigen::Index>(*sector->index(target))]) * sign * amp;
        }
      }
    }
  }
  RMatrix real = g.real();
  return {0.5 * (real + real.transpose())};
}

RVector natural_occupations(const OneRdm& gamma) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gamma.gamma, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

CVector apply_one_body(const StateVector& v, const RMatrix& m, Spin from, Spin to,
                       const DeterminantSector& target) {
  const auto& sector = sector_of(v, "apply_one_body");
  const int n = sector->n_modes();
  require(m.rows() == n && m.cols() == n, ErrorKind::kShape, "one-body operator size differs from n_modes");
  require(target.n_modes() == n, ErrorKind::kShape, "target sector mode count differs");
  const int off_from = from == Spin::kUp ? 0 : n;
  const int off_to = to == Spin::kUp ? 0 : n;
  CVector out = CVector::Zero(static_cast<Eigen::Index>(target.dim()));
  for (std::size_t i = 0; i < sector->dim(); ++i) {
    const Complex amp = v.amplitudes[static_cast<Eigen::Index>(i)];
    if (amp == Complex{}) continue;
    const ConfigKey key = sector->key(i);
    for (int q = 0; q < n; ++q) {
      const int gq = off_from + q;
      if (!(key & bit(gq))) continue;
      const double s1 = jw_sign(key, gq);
      const ConfigKey removed = key ^ bit(gq);
      for (int p = 0; p < n; ++p) {
        const double mpq = m(p, q);
        if (mpq == 0.0) continue;
        const int gp = off_to + p;
        if (removed & bit(gp)) continue;
        const double s2 = jw_sign(removed, gp);
        const auto j = target.index(removed | bit(gp));
        require(j.has_value(), ErrorKind::kShape, "one-body operator leaves the target sector");
        out[static_cast<Eigen::Index>(*j)] += mpq * s1 * s2 * amp;
      }
    }
  }
  return out;
}

namespace {

struct CorrelationSetup {
  SectorHandle sector;
  RMatrix impurity_density;  // r_d r_d^T in v's basis
  RMatrix site_density;
  double stagger;
};

CorrelationSetup correlation_setup(const StateVector& v, int bath_site,
                                   std::span<const BasisRotation> chain, const char* where) {
  const auto& sector = sector_of(v, where);
  const int n = sector->n_modes();
  const int bath = n - 1;
  if (bath_site < 0 || bath_site >= bath) {
    std::ostringstream msg;
    msg << where << ": bath site " << bath_site << " outside 0.." << bath - 1;
    throw Error(ErrorKind::kIndex, msg.str());
  }
  const RMatrix xi = compose(chain, n).xi;
  require(xi.rows() == n, ErrorKind::kShape, "rotation chain size differs from n_modes");
  const RVector rd = xi.row(0).transpose();
  const RVector rj = xi.row(bath_site + 1).transpose();
  return {sector, rd * rd.transpose(), rj * rj.transpose(), (bath_site % 2 == 0) ? 1.0 : -1.0};
}

std::optional<DeterminantSector> shifted_sector(const DeterminantSector& s, int d_up) {
  const int up = s.n_up() + d_up;
  const int down = s.n_down() - d_up;
  if (up < 0 || up > s.n_modes() || down < 0 || down > s.n_modes()) return std::nullopt;
  return DeterminantSector(s.n_modes(), up, down);
}

}  // namespace

double staggered_density_correlation(const StateVector& v, int bath_site,
                                     std::span<const BasisRotation> chain) {
  const auto setup = correlation_setup(v, bath_site, chain, "staggered_density_correlation");
  const auto& sector = *setup.sector;
  double total = 0.0;
  for (Spin s : {Spin::kUp, Spin::kDown}) {
    const CVector nd = apply_one_body(v, setup.impurity_density, s, s, sector);
    const CVector nj = apply_one_body(v, setup.site_density, s, s, sector);
    const double joint = nd.dot(nj).real();
    const double mean_d = v.amplitudes.dot(nd).real();
    const double mean_j = v.amplitudes.dot(nj).real();
    total += joint - mean_d * mean_j;
  }
  return setup.stagger * total;
}

double staggered_spin_correlation(const StateVector& v, int bath_site,
                                  std::span<const BasisRotation> chain) {
  const auto setup = correlation_setup(v, bath_site, chain, "staggered_spin_correlation");
  const auto& sector = *setup.sector;
  const CVector sz_d = apply_one_body(v, setup.impurity_density, Spin::kUp, Spin::kUp, sector) -
                       apply_one_body(v, setup.impurity_density, Spin::kDown, Spin::kDown, sector);
  const CVector sz_j = apply_one_body(v, setup.site_density, Spin::kUp, Spin::kUp, sector) -
                       apply_one_body(v, setup.site_density, Spin::kDown, Spin::kDown, sector);
  double zz = sz_d.dot(sz_j).real();
  const double mean_d = v.amplitudes.dot(sz_d).real();
  const double mean_j = v.amplitudes.dot(sz_j).real();

  // S^x S^x + S^y S^y = 2 (S^+_d S^-_j + S^-_d S^+_j), S^+ = c+_up c_down.
  double flip = 0.0;
  if (auto lowered = shifted_sector(sector, -1)) {
    const CVector a = apply_one_body(v, setup.impurity_density, Spin::kUp, Spin::kDown, *lowered);
    const CVector b = apply_one_body(v, setup.site_density, Spin::kUp, Spin::kDown, *lowered);
    flip += a.dot(b).real();
  }
  if (auto raised = shifted_sector(sector, +1)) {
    const CVector a = apply_one_body(v, setup.impurity_density, Spin::kDown, Spin::kUp, *raised);
    const CVector b = apply_one_body(v, setup.site_density, Spin::kDown, Spin::kUp, *raised);
    flip += a.dot(b).real();
  }
  return setup.stagger * (zz + 2.0 * flip - mean_d * mean_j);
}

}  // namespace skqd
