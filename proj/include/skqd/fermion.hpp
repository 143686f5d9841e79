// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "skqd/core.hpp"
#include "skqd/state.hpp"

namespace skqd {

enum class Spin { kUp = 0, kDown = 1 };

/// Fixed (n_up, n_down) determinant space. Determinants are ordered
/// lexicographically by (up string, down string), each string compared as an
/// integer occupation mask (bit p = mode p).
class DeterminantSector {
 public:
  DeterminantSector(int n_modes, int n_up, int n_down);

  [[nodiscard]] int n_modes() const { return n_modes_; }
  [[nodiscard]] int n_up() const { return n_up_; }
  [[nodiscard]] int n_down() const { return n_down_; }
  [[nodiscard]] std::size_t dim() const { return up_.size() * down_.size(); }

  [[nodiscard]] const std::vector<std::uint64_t>& up_strings() const { return up_; }
  [[nodiscard]] const std::vector<std::uint64_t>& down_strings() const { return down_; }

  [[nodiscard]] ConfigKey key(std::size_t index) const;
  [[nodiscard]] std::optional<std::size_t> index(ConfigKey key) const;
  [[nodiscard]] bool contains(ConfigKey key) const;

  [[nodiscard]] std::uint64_t up_mask(ConfigKey key) const { return key & mode_mask(); }
  [[nodiscard]] std::uint64_t down_mask(ConfigKey key) const { return key >> n_modes_; }
  [[nodiscard]] ConfigKey compose(std::uint64_t up, std::uint64_t down) const {
    return up | (down << n_modes_);
  }
  [[nodiscard]] std::uint64_t mode_mask() const { return (std::uint64_t{1} << n_modes_) - 1; }

 private:
  [[nodiscard]] std::size_t rank(std::uint64_t mask) const;

  int n_modes_;
  int n_up_;
  int n_down_;
  std::vector<std::uint64_t> up_;
  std::vector<std::uint64_t> down_;
  std::vector<std::vector<std::size_t>> binomial_;
};

SectorHandle make_sector(int n_modes, int n_up, int n_down);

/// n_up = n_down = floor(n_modes / 2).
SectorHandle half_filling_sector(int n_modes);

/// h_pqrs = U w_p w_q w_r w_s, e.g. U n_{d,up} n_{d,down} with w = e_d.
struct RankOneInteraction {
  double u = 0.0;
  RVector weights;
};

/// Dense h_pqrs, row-major in (p, q, r, s).
struct DenseInteraction {
  int n_modes = 0;
  std::vector<double> values;

  [[nodiscard]] double operator()(int p, int q, int r, int s) const {
    const auto n = static_cast<std::size_t>(n_modes);
    return values[((static_cast<std::size_t>(p) * n + static_cast<std::size_t>(q)) * n +
                   static_cast<std::size_t>(r)) * n + static_cast<std::size_t>(s)];
  }
};

using TwoBody = std::variant<std::monostate, RankOneInteraction, DenseInteraction>;

/// H = sum h_pq a+_{p s} a_{q s} + sum (h_pqrs / 2) a+_{p s} a+_{q t} a_{s t} a_{r s} + core_shift.
class FermionHamiltonian {
 public:
  FermionHamiltonian(RMatrix h_one, TwoBody h_two, double core_shift = 0.0);

  [[nodiscard]] int n_modes() const { return static_cast<int>(h_one_.rows()); }
  [[nodiscard]] const RMatrix& h_one() const { return h_one_; }
  [[nodiscard]] const TwoBody& h_two() const { return h_two_; }
  [[nodiscard]] double core_shift() const { return core_shift_; }

  /// Element of the two-body tensor, whatever its storage.
  [[nodiscard]] double two_body(int p, int q, int r, int s) const;
  [[nodiscard]] DenseInteraction dense_two_body() const;

  [[nodiscard]] FermionHamiltonian one_body_part() const;
  [[nodiscard]] FermionHamiltonian two_body_part() const;

  /// Appends H|det> (keys in the up | down << n_modes layout), unmerged.
  void connections(ConfigKey det, std::vector<Connection>& out) const;

 private:
  RMatrix h_one_;
  TwoBody h_two_;
  double core_shift_;
  // Rank-one storage is normalised to unit weights so the interaction reads
  // U' n_{b,up} n_{b,down} with b = sum_p w_p a_p.
  double rank_one_u_ = 0.0;
  RVector rank_one_w_;
  std::vector<int> rank_one_support_;
};

/// Single-particle basis change: new mode p = sum_x xi(x, p) old mode x.
struct BasisRotation {
  RMatrix xi;

  static BasisRotation identity(int n_modes);
  [[nodiscard]] double orthogonality_error() const;
};

/// Composite rotation applying `first` and then `then`.
BasisRotation compose(const BasisRotation& first, const BasisRotation& then);
BasisRotation compose(std::span<const BasisRotation> chain, int n_modes);

/// h' = xi^T h xi, w' = xi^T w, h'_{pqrs} = sum xi xi xi xi h.
FermionHamiltonian rotate(const FermionHamiltonian& h, const BasisRotation& rotation);

struct SiamParameters {
  int bath_sites = 1;  // L
  double u = 0.0;
  double t = 1.0;
  double v = -1.0;
  double eps_imp = 0.0;

  /// t = -V = 1, eps = -U/2.
  static SiamParameters particle_hole_symmetric(int bath_sites, double u);
};

/// Position basis: mode 0 is the impurity, mode j+1 is bath site j.
FermionHamiltonian build_siam_position(const SiamParameters& params);

/// Diagonalises the bath hopping chain. Bath modes are ordered by ascending
/// eps_k and each column of Xi is signed so that Xi_{0k} > 0.
std::pair<FermionHamiltonian, BasisRotation> to_momentum_basis(const FermionHamiltonian& h_position);

struct OneRdm {
  RMatrix gamma;  // spin summed
};

/// Block-diagonalises gamma over {imp, k_f-1, k_f, k_f+1}, {k < k_f-1},
/// {k > k_f+1} (k are bath momentum indices, mode = k + 1). Within a block the
/// new orbitals fill the block's slots in descending occupation.
std::pair<FermionHamiltonian, BasisRotation> to_k_adjacent_natural_orbitals(
    const FermionHamiltonian& h_momentum, const OneRdm& gamma, int k_fermi);

/// H v restricted to the sector.
StateVector sector_apply(const FermionHamiltonian& h, const SectorHandle& sector, const StateVector& v);

/// Dense sector matrix; small sectors only.
CMatrix dense_sector_matrix(const FermionHamiltonian& h, const DeterminantSector& sector);

/// Gamma_pq = sum_s <v| a+_{p s} a_{q s} |v>, real part (symmetric).
OneRdm one_rdm(const StateVector& v);

/// Occupation eigenvalues of gamma, descending.
RVector natural_occupations(const OneRdm& gamma);

/// sum_pq m_pq a+_{p,to} a_{q,from} applied to v (living in v.basis); the
/// result lives in `target`.
CVector apply_one_body(const StateVector& v, const RMatrix& m, Spin from, Spin to,
                       const DeterminantSector& target);

/// (-1)^j [<S_d . S_j> - <S_d>.<S_j>] with S^mu = sum sigma^mu c+ c.
/// `chain` maps position-basis modes to v's basis (empty = position basis).
double staggered_spin_correlation(const StateVector& v, int bath_site,
                                  std::span<const BasisRotation> chain = {});

/// (-1)^j sum_s [<n_{d s} n_{j s}> - <n_{d s}><n_{j s}>].
double staggered_density_correlation(const StateVector& v, int bath_site,
                                     std::span<const BasisRotation> chain = {});

}  // namespace skqd
