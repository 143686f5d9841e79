// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "skqd/bounds.hpp"
#include "skqd/kernels.hpp"
#include "skqd/linalg.hpp"
#include "skqd/operator.hpp"
#include "skqd/propagate.hpp"
#include "skqd/sqd.hpp"

namespace skqd {
namespace {

StateVector plus_state(int n) {
  return {CVector::Constant(Eigen::Index{1} << n, std::pow(2.0, -0.5 * n)), SpinBasis{n}};
}

std::vector<ConfigKey> all_keys(const BasisTag& b) {
  std::vector<ConfigKey> out;
  for (std::size_t i = 0; i < basis_dimension(b); ++i) out.push_back(key_at(b, i));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(SampleSet, SerializeRoundTrip) {
  SampleSet s;
  s.add("0110", 3);
  s.add("0001", 12);
  s.add("1111", 1);
  s.add("0110", 2);
  EXPECT_EQ(s.total(), 18u);
  EXPECT_EQ(s.distinct(), 3u);
  const std::string text = s.serialize();
  EXPECT_EQ(text, "0001\t12\n0110\t5\n1111\t1\n");
  const auto back = SampleSet::parse(text);
  EXPECT_EQ(back.counts, s.counts);
  EXPECT_EQ(back.n_bits, 4);
  EXPECT_EQ(back.serialize(), text);

  const auto dir = std::filesystem::temp_directory_path() / "skqd_sampleset_test";
  std::filesystem::create_directories(dir);
  s.write(dir / "s.tsv");
  EXPECT_EQ(SampleSet::read(dir / "s.tsv").serialize(), text);
  std::filesystem::remove_all(dir);
}

TEST(SampleSet, ParseRejectsMalformed) {
  for (const char* bad : {"01 3\n", "01\t0\n", "01\tx\n", "0a\t1\n", "01\t1\n01\t2\n", "01\t1\n011\t1\n", "01\t-1\n"}) {
    EXPECT_THROW(SampleSet::parse(bad), Error) << bad;
  }
  SampleSet s;
  s.add("01", 1);
  EXPECT_THROW(s.add("011", 1), Error);
  s.add("10", 0);
  EXPECT_EQ(s.distinct(), 1u);
}

TEST(Collect, PointMassAndBookkeeping) {
  const std::vector<StateVector> one{basis_state(SpinBasis{2}, 0b10)};
  const auto s = collect_samples(one, 50, 3);
  EXPECT_EQ(s.counts.size(), 1u);
  EXPECT_EQ(s.counts.at("10"), 50u);
  const SpinHamiltonian h(build_tfim_open(5, 0.3, 0.1));
  const auto states = krylov_states(h, plus_state(5), default_plan(h.dim(), 0.4, 4));
  const auto t = collect_samples(states, 25, 9);
  EXPECT_EQ(t.total(), 100u);
  ASSERT_EQ(t.provenance.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(t.provenance[static_cast<std::size_t>(k)].krylov_index, k);
    EXPECT_EQ(t.provenance[static_cast<std::size_t>(k)].shots, 25u);
  }
}

TEST(Collect, DistinctCountGrowsWithShots) {
  const int n = 6;
  const SpinHamiltonian h(build_tfim_open(n, 0.1, 0.1));
  const auto states =
      krylov_states(h, plus_state(n), default_plan(h.dim(), choose_dt(spectrum_summary(h.pauli_sum())), 15));
  std::size_t prev = 0;
  for (std::uint64_t m : {1, 10, 100, 1000, 10000}) {
    const auto s = collect_samples(states, m, 4);
    EXPECT_GE(s.distinct(), prev);
    prev = s.distinct();
  }
}

TEST(Uniform, SupportAndConstraints) {
  const auto s = uniform_baseline(2, 4, 1);
  EXPECT_EQ(s.total(), 4u);
  for (const auto& [b, c] : s.counts) EXPECT_EQ(b.size(), 2u);
  const auto w1 = uniform_baseline(2, 200, 2, SectorRule::total(1));
  for (const auto& [b, c] : w1.counts) EXPECT_TRUE(b == "01" || b == "10");
  EXPECT_EQ(w1.counts.size(), 2u);
  const auto spin = uniform_baseline(8, 500, 3, SectorRule::per_spin(2, 1));
  for (const auto& [b, c] : spin.counts) EXPECT_TRUE(SectorRule::per_spin(2, 1).accepts(b));
  EXPECT_THROW(uniform_baseline(2, 4, 1, SectorRule::total(3)), Error);
  EXPECT_THROW(uniform_baseline(4, 4, 1, SectorRule::per_spin(3, 0)), Error);
  EXPECT_THROW(uniform_baseline(4, 0, 1), Error);
  EXPECT_EQ(uniform_baseline(6, 100, 5).counts, uniform_baseline(6, 100, 5).counts);
}

TEST(Uniform, IsRoughlyUniform) {
  const std::uint64_t m = 64000;
  const auto s = uniform_baseline(4, m, 7);
  ASSERT_EQ(s.counts.size(), 16u);
  const double expect = static_cast<double>(m) / 16.0;
  const double sd = std::sqrt(expect * (15.0 / 16.0));
  for (const auto& [b, c] : s.counts) EXPECT_LE(std::abs(static_cast<double>(c) - expect), 5 * sd) << b;
}

TEST(Postselect, Filters) {
  SampleSet s;
  s.add("1010", 3);  // (1,1)
  s.add("1001", 2);  // (1,1)
  s.add("1100", 4);  // (2,0)
  s.add("0000", 1);
  const auto r = postselect(s, SectorRule::per_spin(1, 1));
  EXPECT_EQ(r.kept.total(), 5u);
  EXPECT_EQ(r.kept.counts.size(), 2u);
  EXPECT_NEAR(r.discarded_fraction, 0.5, 1e-15);
  EXPECT_FALSE(r.empty);
  const auto none = postselect(s, SectorRule::per_spin(2, 2));
  EXPECT_TRUE(none.empty);
  EXPECT_DOUBLE_EQ(none.discarded_fraction, 1.0);
  EXPECT_EQ(postselect(s, SectorRule::total(2)).kept.total(), 9u);
}

TEST(Postselect, ExactSectorSamplesSurviveCorruptedDoNot) {
  const auto sector = half_filling_sector(5);
  const SectorHamiltonian h(build_siam_position(SiamParameters::particle_hole_symmetric(4, 3.0)), sector);
  const StateVector psi0{linalg::pseudo_random_unit(static_cast<Eigen::Index>(sector->dim()), 2), sector};
  const auto states = krylov_states(h, psi0, default_plan(h.dim(), 0.1, 5));
  const auto samples = collect_samples(states, 2000, 5);
  const auto rule = SectorRule::per_spin(2, 2);
  EXPECT_DOUBLE_EQ(postselect(samples, rule).discarded_fraction, 0.0);
  const auto bad = corrupt(samples, 0.01, 5);
  EXPECT_EQ(bad.total(), samples.total());
  EXPECT_GT(postselect(bad, rule).discarded_fraction, 0.0);
  EXPECT_EQ(corrupt(samples, 0.0, 5).counts, samples.counts);
  EXPECT_THROW(corrupt(samples, 1.5, 5), Error);
}

TEST(SubspaceBasis, CapKeepsMostSampled) {
  SampleSet s;
  s.add("011", 5);
  s.add("100", 5);
  s.add("001", 9);
  s.add("111", 1);
  const BasisTag b = SpinBasis{3};
  EXPECT_EQ(subspace_basis(s, b), (std::vector<ConfigKey>{0b001, 0b011, 0b100, 0b111}));
  EXPECT_EQ(subspace_basis(s, b, 2), (std::vector<ConfigKey>{0b001, 0b011}));
  EXPECT_EQ(subspace_basis(s, b, 3), (std::vector<ConfigKey>{0b001, 0b011, 0b100}));
  EXPECT_EQ(subspace_basis(s, b, 10).size(), 4u);
}

TEST(Project, TwoQubitExample) {
  const SpinHamiltonian h(build_tfim_open(2, 0.1, 0.0));
  const std::vector<ConfigKey> basis{0b00, 0b11};
  const auto m = project_hamiltonian(h, basis).to_dense();
  EXPECT_LT((m - CMatrix(Eigen::Vector2cd(-1.0, -1.0).asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
  const std::vector<ConfigKey> unsorted{0b11, 0b00};
  EXPECT_THROW(project_hamiltonian(h, unsorted), Error);
}

TEST(Project, FullBasisReproducesGroundEnergy) {
  const SpinHamiltonian h(build_tfim_open(6, 0.3, 0.2));
  const auto e0 = spectrum_summary(h.pauli_sum()).e0;
  const auto p = solve_on_basis(h, all_keys(h.basis()));
  EXPECT_NEAR(p.energy, e0, 1e-9);
  EXPECT_NEAR(p.coeffs.norm(), 1.0, 1e-9);
  EXPECT_NEAR(p.embed().norm(), 1.0, 1e-9);
  EXPECT_LT(p.h_proj.hermiticity_error(), 1e-14);

  const auto sector = half_filling_sector(6);
  const SectorHamiltonian hs(build_siam_position(SiamParameters::particle_hole_symmetric(5, 4.0)), sector);
  EXPECT_NEAR(solve_on_basis(hs, all_keys(hs.basis())).energy, ground_state(hs).energy, 1e-9);
}

TEST(Project, SiamSubmatrixAndOutOfSector) {
  const auto sector = half_filling_sector(6);
  const SectorHamiltonian h(build_siam_position(SiamParameters::particle_hole_symmetric(5, 2.0)), sector);
  const CMatrix dense = dense_matrix(h);
  std::mt19937_64 rng(5);
  std::vector<std::size_t> idx(sector->dim());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(50);
  std::vector<std::pair<ConfigKey, std::size_t>> chosen;
  for (auto i : idx) chosen.emplace_back(sector->key(i), i);
  std::sort(chosen.begin(), chosen.end());
  std::vector<ConfigKey> keys;
  for (const auto& c : chosen) keys.push_back(c.first);
  const CMatrix sub = project_hamiltonian(h, keys).to_dense();
  for (std::size_t a = 0; a < 50; ++a)
    for (std::size_t b = 0; b < 50; ++b) {
      const Complex ref = dense(static_cast<Eigen::Index>(chosen[a].second), static_cast<Eigen::Index>(chosen[b].second));
      EXPECT_LT(std::abs(sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - ref), 1e-13);
    }
  std::vector<ConfigKey> bad{sector->compose(0b1111, 0b000111)};
  try {
    project_hamiltonian(h, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidBasis);
  }
}

TEST(SolveSubspace, SmallCases) {
  linalg::CsrMatrix one;
  one.rows = 1;
  one.row_ptr = {0, 1};
  one.cols = {0};
  one.values = {Complex(-4.5, 0)};
  EXPECT_DOUBLE_EQ(solve_subspace(one).energy, -4.5);
  linalg::CsrMatrix diag;
  diag.rows = 3;
  diag.row_ptr = {0, 1, 2, 3};
  diag.cols = {0, 1, 2};
  diag.values = {3.0, -2.0, 5.0};
  const auto sol = solve_subspace(diag);
  EXPECT_DOUBLE_EQ(sol.energy, -2.0);
  EXPECT_NEAR(std::abs(sol.coeffs[1]), 1.0, 1e-15);
}

TEST(SolveSubspace, LargeSparseMatchesDense) {
  const Eigen::Index n = 5000;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<Eigen::Index> col(0, n - 1);
  std::vector<std::map<Eigen::Index, double>> rows(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    rows[static_cast<std::size_t>(i)][i] += 2.0 * g(rng);
    for (int e = 0; e < 4; ++e) {
      const Eigen::Index j = col(rng);
      const double v = g(rng);
      rows[static_cast<std::size_t>(i)][j] += v;
      rows[static_cast<std::size_t>(j)][i] += v;
    }
  }
  linalg::CsrMatrix m;
  m.rows = n;
  m.row_ptr = {0};
  RMatrix dense = RMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& [j, v] : rows[static_cast<std::size_t>(i)]) {
      m.cols.push_back(j);
      m.values.emplace_back(v, 0.0);
      dense(i, j) = v;
    }
    m.row_ptr.push_back(static_cast<std::int64_t>(m.cols.size()));
  }
  ASSERT_LT(m.hermiticity_error(), 1e-15);
  const auto sol = solve_subspace(m);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(dense, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(sol.energy, es.eigenvalues()[0], 1e-8);
  EXPECT_NEAR(sol.coeffs.norm(), 1.0, 1e-9);
  CVector hv(n);
  kernels::csr_matvec(m, sol.coeffs, hv);
  EXPECT_LE((hv - sol.energy * sol.coeffs).norm(), 1e-8 * std::max(1.0, std::abs(sol.energy)));
}

TEST(Skqd, AllStringsSampledGivesExactEnergy) {
  const int n = 4;
  const SpinHamiltonian h(build_tfim_open(n, 0.5, 0.3));
  const auto s = spectrum_summary(h.pauli_sum());
  const auto r = skqd_estimate(h, plus_state(n), 3, choose_dt(s), 20000, 1);
  ASSERT_EQ(r.problem.dim(), 16u);
  EXPECT_NEAR(r.problem.energy, s.e0, 1e-9);
}

TEST(Skqd, VariationalMonotoneExchangeable) {
  const int n = 8;
  const SpinHamiltonian h(build_tfim_open(n, 0.1, 0.1));
  const auto s = spectrum_summary(h.pauli_sum());
  const auto states = krylov_states(h, plus_state(n), default_plan(h.dim(), choose_dt(s), 15));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto small = skqd_from_states(h, states, 10, seed);
    const auto large = skqd_from_states(h, states, 100, seed);  // same prefix, superset
    EXPECT_GE(small.problem.energy, s.e0 - 1e-9);
    EXPECT_GE(large.problem.energy, s.e0 - 1e-9);
    const auto& kb = large.problem.basis;
    for (auto k : small.problem.basis) EXPECT_TRUE(std::binary_search(kb.begin(), kb.end(), k));
    EXPECT_LE(large.problem.energy, small.problem.energy + 1e-10);
  }
  // Reordering the basis list leaves the spectrum unchanged.
  const auto r = skqd_from_states(h, states, 30, 7);
  std::vector<ConfigKey> shuffled = r.problem.basis;
  std::reverse(shuffled.begin(), shuffled.end());
  CMatrix perm_dense = CMatrix::Zero(static_cast<Eigen::Index>(shuffled.size()), static_cast<Eigen::Index>(shuffled.size()));
  std::vector<Connection> conns;
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    conns.clear();
    h.connections(shuffled[i], conns);
    for (const auto& c : conns) {
      const auto it = std::find(shuffled.begin(), shuffled.end(), c.target);
      if (it != shuffled.end()) perm_dense(static_cast<Eigen::Index>(it - shuffled.begin()), static_cast<Eigen::Index>(i)) += c.amplitude;
    }
  }
  EXPECT_NEAR(linalg::hermitian_eigen(perm_dense).values[0], r.problem.energy, 1e-10);
}

TEST(Skqd, BestOfPicksMinimum) {
  const int n = 6;
  const SpinHamiltonian h(build_tfim_open(n, 0.1, 0.1));
  const auto s = spectrum_summary(h.pauli_sum());
  const auto states = krylov_states(h, plus_state(n), default_plan(h.dim(), choose_dt(s), 10));
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6};
  const auto best = skqd_best_of(h, states, 10, seeds);
  for (auto seed : seeds) EXPECT_LE(best.problem.energy, skqd_from_states(h, states, 10, seed).problem.energy);
  EXPECT_THROW(skqd_best_of(h, states, 10, std::span<const std::uint64_t>{}), Error);
}

TEST(Skqd, CoverageImpliesTruncationBound) {
  const int n = 8;
  const SpinHamiltonian h(build_tfim_open(n, 0.1, 0.1));
  const auto s = spectrum_summary(h.pauli_sum());
  const auto states = krylov_states(h, plus_state(n), default_plan(h.dim(), choose_dt(s), 15));
  const auto profile = sparsity_profile(s.ground);
  const std::size_t l = profile.smallest_l(0.99);
  int covered_runs = 0;
  for (std::uint64_t m : {10, 100, 1000}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto r = skqd_from_states(h, states, m, seed);
      const auto cov = coverage_check(r.samples, s.ground, l);
      if (!cov.covered) continue;
      ++covered_runs;
      EXPECT_LE(r.problem.energy - s.e0, subspace_energy_bound(s.norm(), profile.alpha[l - 1]) + 1e-9);
    }
  }
  EXPECT_GT(covered_runs, 0);
}

TEST(Sparsity, Examples) {
  StateVector two{CVector::Zero(4), SpinBasis{2}};
  two.amplitudes[0] = std::sqrt(0.7);
  two.amplitudes[3] = std::sqrt(0.3);
  const auto p = sparsity_profile(two);
  EXPECT_NEAR(p.alpha[0], 0.7, 1e-15);
  EXPECT_NEAR(p.beta[0], 0.7, 1e-15);
  EXPECT_NEAR(p.alpha[1], 1.0, 1e-15);
  EXPECT_NEAR(p.beta[1], 0.3, 1e-15);
  EXPECT_EQ(p.support(), 2u);
  EXPECT_EQ(p.keys[0], 0u);
  EXPECT_EQ(p.smallest_l(0.9), 2u);

  const auto u = sparsity_profile(plus_state(5));
  for (std::size_t l = 1; l <= 32; ++l) {
    EXPECT_NEAR(u.alpha[l - 1], static_cast<double>(l) / 32.0, 1e-14);
    EXPECT_NEAR(u.beta[l - 1], 1.0 / 32.0, 1e-15);
  }
  auto bad = plus_state(3);
  bad.amplitudes *= 2.0;
  EXPECT_THROW(sparsity_profile(bad), Error);
}

TEST(Sparsity, ProfileInvariantsOnGroundState) {
  const auto s = spectrum_summary(build_tfim_open(10, 0.1, 0.1));
  const auto p = sparsity_profile(s.ground);
  EXPECT_NEAR(p.alpha.back(), 1.0, 1e-9);
  for (std::size_t l = 1; l < p.alpha.size(); ++l) {
    EXPECT_GE(p.alpha[l], p.alpha[l - 1]);
    EXPECT_LE(p.beta[l], p.beta[l - 1]);
  }
  for (std::size_t l = 0; l < p.alpha.size(); ++l) EXPECT_GE(p.alpha[l] + 1e-12, static_cast<double>(l + 1) * p.beta[l]);
  EXPECT_GT(p.alpha[0], 0.9);
}

TEST(Coverage, Cases) {
  StateVector v{CVector::Zero(4), SpinBasis{2}};
  v.amplitudes[1] = std::sqrt(0.6);
  v.amplitudes[2] = std::sqrt(0.4);
  SampleSet full;
  full.add("01", 1);
  full.add("10", 1);
  EXPECT_TRUE(coverage_check(full, v, 2).covered);
  EXPECT_TRUE(coverage_check(full, v, 2).missing.empty());
  SampleSet empty;
  empty.n_bits = 2;
  const auto c = coverage_check(empty, v, 2);
  EXPECT_FALSE(c.covered);
  EXPECT_EQ(c.missing, (std::vector<std::string>{"01", "10"}));
  EXPECT_THROW(coverage_check(full, v, 3), Error);
  EXPECT_THROW(coverage_check(full, v, 0), Error);
}

}  // namespace
}  // namespace skqd
