// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "skqd/fermion.hpp"
#include "skqd/linalg.hpp"
#include "skqd/operator.hpp"

namespace skqd {
namespace {

std::size_t choose(int n, int k) {
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

RMatrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  return m;
}

RMatrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<RMatrix> qr(a);
  return qr.householderQ();
}

// h_pqrs = sum_k A_k(p, r) A_k(q, s): all the real two-electron symmetries.
DenseInteraction random_interaction(int n, std::mt19937_64& rng) {
  DenseInteraction d{n, std::vector<double>(static_cast<std::size_t>(n * n * n * n), 0.0)};
  for (int k = 0; k < 2; ++k) {
    const RMatrix a = random_symmetric(n, rng);
    std::size_t idx = 0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) d.values[idx++] += 0.3 * a(p, r) * a(q, s);
  }
  return d;
}

StateVector random_sector_state(const SectorHandle& s, std::uint64_t seed) {
  return {linalg::pseudo_random_unit(static_cast<Eigen::Index>(s->dim()), seed), s};
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

TEST(Sector, DimensionsAndRoundTrip) {
  for (int n = 1; n <= 6; ++n)
    for (int nu = 0; nu <= n; ++nu)
      for (int nd = 0; nd <= n; ++nd) {
        const DeterminantSector s(n, nu, nd);
        ASSERT_EQ(s.dim(), choose(n, nu) * choose(n, nd));
        ConfigKey prev = 0;
        for (std::size_t i = 0; i < s.dim(); ++i) {
          const ConfigKey k = s.key(i);
          EXPECT_EQ(std::popcount(s.up_mask(k)), nu);
          EXPECT_EQ(std::popcount(s.down_mask(k)), nd);
          EXPECT_EQ(s.index(k), i);
          if (i > 0) {
            const auto a = std::make_pair(s.up_mask(prev), s.down_mask(prev));
            const auto b = std::make_pair(s.up_mask(k), s.down_mask(k));
            EXPECT_LT(a, b);
          }
          prev = k;
        }
      }
  EXPECT_EQ(DeterminantSector(16, 8, 8).dim(), 12870u * 12870u);
  EXPECT_EQ(DeterminantSector(8, 4, 4).dim(), 4900u);
  EXPECT_THROW(DeterminantSector(4, 5, 1), Error);
  EXPECT_THROW(DeterminantSector(0, 0, 0), Error);
}

TEST(Sector, BitstringLayout) {
  const auto s = make_sector(3, 1, 2);
  const ConfigKey k = s->compose(0b001, 0b110);
  EXPECT_EQ(to_bitstring(s, k), "100011");
  EXPECT_EQ(parse_bitstring(s, "100011"), k);
  EXPECT_THROW(parse_bitstring(s, "110011"), Error);
  EXPECT_FALSE(s->contains(s->compose(0b011, 0b110)));
}

TEST(SiamPosition, Structure) {
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(3, 4.0));
  EXPECT_EQ(h.n_modes(), 4);
  EXPECT_DOUBLE_EQ(h.h_one()(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(h.h_one()(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(h.h_one()(1, 2), -1.0);
  EXPECT_DOUBLE_EQ(h.h_one()(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(h.two_body(0, 0, 0, 0), 4.0);
  EXPECT_DOUBLE_EQ(h.two_body(0, 0, 0, 1), 0.0);
  EXPECT_THROW(build_siam_position(SiamParameters{0, 1.0, 1.0, -1.0, 0.0}), Error);
}

TEST(SiamPosition, SingleBathHalfFillingMatchesOracle) {
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(1, 2.0));
  const auto sector = half_filling_sector(2);
  const oracle::Fock fock(2);
  const CMatrix ref = fock.restrict(fock.hamiltonian(h), *sector);
  EXPECT_LT(max_abs(dense_sector_matrix(h, *sector) - ref), 1e-13);
  // Two-site Hubbard dimer with eps = -U/2 on one site.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(ref);
  EXPECT_EQ(es.eigenvalues().size(), 4);
}

TEST(SectorApply, OneBodyMatchesFockOracle) {
  std::mt19937_64 rng(11);
  const int n = 4;
  const FermionHamiltonian h(random_symmetric(n, rng), std::monostate{}, 0.7);
  const oracle::Fock fock(n);
  const auto ref_op = fock.hamiltonian(h);
  for (auto [nu, nd] : {std::pair{2, 2}, std::pair{1, 3}, std::pair{0, 2}, std::pair{4, 1}}) {
    const auto sector = make_sector(n, nu, nd);
    EXPECT_LT(max_abs(dense_sector_matrix(h, *sector) - fock.restrict(ref_op, *sector)), 1e-12);
  }
}

TEST(SectorApply, RankOneMatchesFockOracle) {
  std::mt19937_64 rng(12);
  const int n = 4;
  RVector w = RVector::Zero(n);
  std::normal_distribution<double> g;
  for (int p = 0; p < n; ++p) w[p] = g(rng);
  const FermionHamiltonian h(random_symmetric(n, rng), RankOneInteraction{1.7, w});
  const oracle::Fock fock(n);
  const auto ref_op = fock.hamiltonian(h);
  for (auto [nu, nd] : {std::pair{2, 2}, std::pair{1, 2}, std::pair{3, 3}}) {
    const auto sector = make_sector(n, nu, nd);
    EXPECT_LT(max_abs(dense_sector_matrix(h, *sector) - fock.restrict(ref_op, *sector)), 1e-11);
    const auto v = random_sector_state(sector, 5);
    const CVector ref = fock.restrict(ref_op, *sector) * v.amplitudes;
    EXPECT_LT((sector_apply(h, sector, v).amplitudes - ref).norm(), 1e-11);
  }
}

TEST(SectorApply, DenseInteractionMatchesFockOracle) {
  std::mt19937_64 rng(13);
  const int n = 4;
  const FermionHamiltonian h(random_symmetric(n, rng), random_interaction(n, rng), -0.25);
  const oracle::Fock fock(n);
  const auto ref_op = fock.hamiltonian(h);
  for (auto [nu, nd] : {std::pair{2, 2}, std::pair{2, 1}, std::pair{1, 1}, std::pair{3, 2}}) {
    const auto sector = make_sector(n, nu, nd);
    const CMatrix ref = fock.restrict(ref_op, *sector);
    EXPECT_LT(max_abs(dense_sector_matrix(h, *sector) - ref), 1e-11);
    EXPECT_LT(max_abs(ref - ref.adjoint()), 1e-12);
  }
}

TEST(SectorApply, SiamMatchesFockOracle) {
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(3, 3.0));
  const oracle::Fock fock(4);
  const auto sector = half_filling_sector(4);
  const auto v = random_sector_state(sector, 3);
  const CVector ref = fock.restrict(fock.hamiltonian(h), *sector) * v.amplitudes;
  EXPECT_LT((sector_apply(h, sector, v).amplitudes - ref).norm(), 1e-12);
}

TEST(SectorApply, BasisMismatch) {
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(3, 3.0));
  const auto v = random_sector_state(make_sector(4, 1, 2), 3);
  EXPECT_THROW(sector_apply(h, half_filling_sector(4), v), Error);
}

TEST(Rotation, SpectrumInvariant) {
  std::mt19937_64 rng(21);
  const int n = 4;
  const FermionHamiltonian rank_one = build_siam_position(SiamParameters::particle_hole_symmetric(3, 5.0));
  const FermionHamiltonian dense(random_symmetric(n, rng), random_interaction(n, rng));
  const BasisRotation r{random_orthogonal(n, rng)};
  EXPECT_LT(r.orthogonality_error(), 1e-12);
  const auto sector = make_sector(n, 2, 1);
  for (const auto* h : {&rank_one, &dense}) {
    const auto a = linalg::hermitian_eigen(dense_sector_matrix(*h, *sector)).values;
    const auto b = linalg::hermitian_eigen(dense_sector_matrix(rotate(*h, r), *sector)).values;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Rotation, ComposeAssociatesWithRotate) {
  std::mt19937_64 rng(22);
  const int n = 4;
  const FermionHamiltonian h(random_symmetric(n, rng), random_interaction(n, rng));
  const BasisRotation a{random_orthogonal(n, rng)};
  const BasisRotation b{random_orthogonal(n, rng)};
  const auto once = rotate(h, compose(a, b));
  const auto twice = rotate(rotate(h, a), b);
  EXPECT_LT((once.h_one() - twice.h_one()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(std::abs(once.two_body(0, 1, 2, 3) - twice.two_body(0, 1, 2, 3)), 1e-12);
}

TEST(Momentum, BathEnergiesAndSigns) {
  for (int l : {1, 3, 7}) {
    const auto pos = build_siam_position(SiamParameters::particle_hole_symmetric(l, 3.0));
    const auto [mom, rot] = to_momentum_basis(pos);
    EXPECT_LT(rot.orthogonality_error(), 1e-12);
    EXPECT_DOUBLE_EQ(rot.xi(0, 0), 1.0);
    for (int k = 0; k < l; ++k) {
      const double eps = -2.0 * std::cos(std::numbers::pi * (k + 1) / (l + 1.0));
      EXPECT_NEAR(mom.h_one()(k + 1, k + 1), eps, 1e-12);
      EXPECT_GT(rot.xi(1, k + 1), 0.0);
      for (int q = k + 1; q < l; ++q) EXPECT_NEAR(mom.h_one()(k + 1, q + 1), 0.0, 1e-12);
    }
    EXPECT_NEAR(mom.h_one()(0, 0), -1.5, 1e-14);
    EXPECT_DOUBLE_EQ(mom.two_body(0, 0, 0, 0), 3.0);
  }
}

TEST(Rdm, Properties) {
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(5, 3.0));
  const auto sector = half_filling_sector(6);
  const auto gs = ground_state(SectorHamiltonian(h, sector));
  const auto gamma = one_rdm(gs.vector).gamma;
  EXPECT_NEAR(gamma.trace(), 6.0, 1e-10);
  EXPECT_LT((gamma - gamma.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  const RVector occ = natural_occupations({gamma});
  EXPECT_LE(occ.maxCoeff(), 2.0 + 1e-10);
  EXPECT_GE(occ.minCoeff(), -1e-10);
  for (Eigen::Index i = 1; i < occ.size(); ++i) EXPECT_GE(occ[i - 1], occ[i]);
  StateVector bad = gs.vector;
  bad.amplitudes *= 2.0;
  EXPECT_THROW(one_rdm(bad), Error);
}

TEST(Rdm, MatchesFockOracle) {
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(3, 2.0));
  const auto sector = make_sector(4, 2, 1);
  const auto v = random_sector_state(sector, 9);
  const oracle::Fock fock(4);
  const CVector f = fock.embed(v, *sector);
  const auto gamma = one_rdm(v).gamma;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      Complex e = 0.0;
      for (int s = 0; s < 2; ++s) e += f.dot((fock.adag(p, s) * fock.a(q, s)).cast<Complex>() * f);
      EXPECT_NEAR(gamma(p, q), e.real(), 1e-12);
    }
}

TEST(Rdm, NonInteractingIsProjector) {
  const auto pos = build_siam_position(SiamParameters::particle_hole_symmetric(5, 0.0));
  const auto [mom, rot] = to_momentum_basis(pos);
  const auto sector = half_filling_sector(6);
  const auto gs = ground_state(SectorHamiltonian(mom, sector));
  const RMatrix half = 0.5 * one_rdm(gs.vector).gamma;
  EXPECT_LT((half * half - half).cwiseAbs().maxCoeff(), 1e-8);
  const RVector occ = natural_occupations({one_rdm(gs.vector).gamma});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(occ[i], 2.0, 1e-8);
  for (int i = 3; i < 6; ++i) EXPECT_NEAR(occ[i], 0.0, 1e-8);
}

TEST(NaturalOrbitals, BlockStructureAndInvariance) {
  const int l = 7;
  const int kf = 3;
  const auto pos = build_siam_position(SiamParameters::particle_hole_symmetric(l, 3.0));
  const auto [mom, rot] = to_momentum_basis(pos);
  const auto sector = make_sector(l + 1, 2, 2);
  const auto gs = ground_state(SectorHamiltonian(mom, sector));
  const OneRdm gamma = one_rdm(gs.vector);
  const auto [no, r2] = to_k_adjacent_natural_orbitals(mom, gamma, kf);
  EXPECT_LT(r2.orthogonality_error(), 1e-12);
  std::vector<int> block_of(static_cast<std::size_t>(l + 1));
  for (int m = 0; m <= l; ++m) {
    if (m == 0 || (m >= kf && m <= kf + 2)) block_of[static_cast<std::size_t>(m)] = 0;
    else if (m < kf) block_of[static_cast<std::size_t>(m)] = 1;
    else block_of[static_cast<std::size_t>(m)] = 2;
  }
  for (int a = 0; a <= l; ++a)
    for (int b = 0; b <= l; ++b)
      if (block_of[static_cast<std::size_t>(a)] != block_of[static_cast<std::size_t>(b)]) {
        EXPECT_EQ(r2.xi(a, b), 0.0);
      }
  // Rotated gamma is diagonal within the mixed block.
  const RMatrix g2 = r2.xi.transpose() * gamma.gamma * r2.xi;
  for (int a : {0, kf, kf + 1, kf + 2})
    for (int b : {0, kf, kf + 1, kf + 2})
      if (a != b) EXPECT_NEAR(g2(a, b), 0.0, 1e-10);
  const auto e_mom = ground_state(SectorHamiltonian(mom, sector)).energy;
  const auto e_no = ground_state(SectorHamiltonian(no, sector)).energy;
  EXPECT_NEAR(e_mom, e_no, 1e-9);
  EXPECT_THROW(to_k_adjacent_natural_orbitals(mom, gamma, l), Error);
  EXPECT_THROW(to_k_adjacent_natural_orbitals(mom, gamma, -1), Error);
}

// Fock-space reference for the staggered correlators.
struct CorrelationOracle {
  const oracle::Fock& fock;
  RMatrix xi;  // position mode x = sum_p xi(x, p) mode p

  [[nodiscard]] oracle::SpMat a(int x, int s) const {
    oracle::SpMat out(fock.dim(), fock.dim());
    for (int p = 0; p < fock.n_modes(); ++p)
      if (xi(x, p) != 0.0) out += xi(x, p) * fock.a(p, s);
    return out;
  }
  [[nodiscard]] oracle::SpMat n(int x, int s) const { return oracle::SpMat(oracle::SpMat(a(x, s).transpose()) * a(x, s)); }

  [[nodiscard]] std::array<Eigen::SparseMatrix<Complex>, 3> spin(int x) const {
    const oracle::SpMat up_dn = oracle::SpMat(a(x, 0).transpose()) * a(x, 1);
    const oracle::SpMat dn_up = oracle::SpMat(a(x, 1).transpose()) * a(x, 0);
    Eigen::SparseMatrix<Complex> sx = (up_dn + dn_up).cast<Complex>();
    Eigen::SparseMatrix<Complex> sy = (Complex(0, -1) * up_dn.cast<Complex>()) + (Complex(0, 1) * dn_up.cast<Complex>());
    Eigen::SparseMatrix<Complex> sz = (n(x, 0) - n(x, 1)).cast<Complex>();
    return {sx, sy, sz};
  }

  [[nodiscard]] double spin_corr(const CVector& f, int j) const {
    const auto sd = spin(0);
    const auto sj = spin(j + 1);
    Complex total = 0.0;
    for (int mu = 0; mu < 3; ++mu) {
      const CVector sjf = sj[static_cast<std::size_t>(mu)] * f;
      total += f.dot(sd[static_cast<std::size_t>(mu)] * sjf);
      total -= f.dot(sd[static_cast<std::size_t>(mu)] * f) * f.dot(sjf);
    }
    return (j % 2 == 0 ? 1.0 : -1.0) * total.real();
  }

  [[nodiscard]] double density_corr(const CVector& f, int j) const {
    double total = 0.0;
    for (int s = 0; s < 2; ++s) {
      const oracle::SpMat nd = n(0, s);
      const oracle::SpMat nj = n(j + 1, s);
      const CVector njf = nj.cast<Complex>() * f;
      total += f.dot(nd.cast<Complex>() * njf).real() - f.dot(nd.cast<Complex>() * f).real() * f.dot(njf).real();
    }
    return (j % 2 == 0 ? 1.0 : -1.0) * total;
  }
};

TEST(Correlations, PositionBasisMatchesFockOracle) {
  const int l = 3;
  const auto h = build_siam_position(SiamParameters::particle_hole_symmetric(l, 4.0));
  const auto sector = half_filling_sector(l + 1);
  const auto gs = ground_state(SectorHamiltonian(h, sector));
  const oracle::Fock fock(l + 1);
  const CorrelationOracle ref{fock, RMatrix::Identity(l + 1, l + 1)};
  const CVector f = fock.embed(gs.vector, *sector);
  for (int j = 0; j < l; ++j) {
    EXPECT_NEAR(staggered_spin_correlation(gs.vector, j), ref.spin_corr(f, j), 1e-10) << j;
    EXPECT_NEAR(staggered_density_correlation(gs.vector, j), ref.density_corr(f, j), 1e-10) << j;
  }
  // The impurity-bath spin correlation is antiferromagnetic at site 0.
  EXPECT_LT(staggered_spin_correlation(gs.vector, 0), 0.0);
}

TEST(Correlations, RotatedBasisMatchesOracleAndPosition) {
  const int l = 3;
  std::mt19937_64 rng(31);
  const auto pos = build_siam_position(SiamParameters::particle_hole_symmetric(l, 2.5));
  const auto [mom, r1] = to_momentum_basis(pos);
  const BasisRotation r2{random_orthogonal(l + 1, rng)};
  const auto rotated = rotate(mom, r2);
  const std::vector<BasisRotation> chain{r1, r2};
  for (auto [nu, nd] : {std::pair{2, 2}, std::pair{2, 1}}) {
    const auto sector = make_sector(l + 1, nu, nd);
    const auto v_pos = random_sector_state(sector, 40 + nu + nd);
    const auto gs_pos = ground_state(SectorHamiltonian(pos, sector));
    const auto gs_rot = ground_state(SectorHamiltonian(rotated, sector));
    const oracle::Fock fock(l + 1);
    const CorrelationOracle ref{fock, compose(std::span<const BasisRotation>(chain), l + 1).xi};
    const CVector f = fock.embed(gs_rot.vector, *sector);
    for (int j = 0; j < l; ++j) {
      const double s_rot = staggered_spin_correlation(gs_rot.vector, j, chain);
      const double n_rot = staggered_density_correlation(gs_rot.vector, j, chain);
      EXPECT_NEAR(s_rot, ref.spin_corr(f, j), 1e-10);
      EXPECT_NEAR(n_rot, ref.density_corr(f, j), 1e-10);
      if (nu == nd) {  // non-degenerate ground state
        EXPECT_NEAR(s_rot, staggered_spin_correlation(gs_pos.vector, j), 1e-8);
        EXPECT_NEAR(n_rot, staggered_density_correlation(gs_pos.vector, j), 1e-8);
      }
    }
    // Random state, position basis, against the oracle.
    const CorrelationOracle ref_pos{fock, RMatrix::Identity(l + 1, l + 1)};
    const CVector fp = fock.embed(v_pos, *sector);
    for (int j = 0; j < l; ++j) {
      EXPECT_NEAR(staggered_spin_correlation(v_pos, j), ref_pos.spin_corr(fp, j), 1e-10);
      EXPECT_NEAR(staggered_density_correlation(v_pos, j), ref_pos.density_corr(fp, j), 1e-10);
    }
  }
}

TEST(Correlations, EmptyImpurityDeterminantGivesZero) {
  const auto sector = make_sector(4, 2, 1);
  const ConfigKey k = sector->compose(0b0110, 0b1000);
  const auto v = basis_state(sector, k);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(staggered_spin_correlation(v, j), 0.0, 1e-15);
    EXPECT_NEAR(staggered_density_correlation(v, j), 0.0, 1e-15);
  }
  EXPECT_THROW(staggered_spin_correlation(v, 3), Error);
}

TEST(Correlations, DensityCovarianceBounded) {
  const auto sector = make_sector(5, 2, 3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto v = random_sector_state(sector, seed);
    for (int j = 0; j < 4; ++j) EXPECT_LE(std::abs(staggered_density_correlation(v, j)), 2.0);
  }
}

}  // namespace
}  // namespace skqd
