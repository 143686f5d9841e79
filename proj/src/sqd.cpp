// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/sqd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "skqd/fermion.hpp"
#include "skqd/kernels.hpp"
#include "skqd/random.hpp"

namespace skqd {

std::uint64_t SampleSet::total() const {
  std::uint64_t t = 0;
  for (const auto& [bits, c] : counts) t += c;
  return t;
}

void SampleSet::add(std::string bits, std::uint64_t count) {
  if (count == 0) return;
  if (n_bits == 0 && counts.empty()) n_bits = static_cast<int>(bits.size());
  require(static_cast<int>(bits.size()) == n_bits, ErrorKind::kShape,
          "bitstring '" + bits + "' has the wrong length for this sample set");
  counts[std::move(bits)] += count;
}

void SampleSet::merge(const SampleSet& other) {
  for (const auto& [bits, c] : other.counts) add(bits, c);
  provenance.insert(provenance.end(), other.provenance.begin(), other.provenance.end());
}

std::string SampleSet::serialize() const {
  std::string out;
  for (const auto& [bits, c] : counts) {
    out += bits;
    out += '\t';
    out += std::to_string(c);
    out += '\n';
  }
  return out;
}

SampleSet SampleSet::parse(std::string_view text) {
  SampleSet out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const auto fail = [&](const char* why) {
      throw Error(ErrorKind::kConfig, "sample line " + std::to_string(line_no) + ": " + why);
    };
    if (tab == std::string_view::npos) fail("missing tab");
    const auto bits = line.substr(0, tab);
    const auto count_text = line.substr(tab + 1);
    if (bits.empty() || bits.find_first_not_of("01") != std::string_view::npos) fail("bitstring must be 0/1");
    std::uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc{} || ptr != count_text.data() + count_text.size() || count == 0) {
      fail("count must be a positive integer");
    }
    if (out.counts.count(std::string(bits)) != 0) fail("duplicate bitstring");
    out.add(std::string(bits), count);
  }
  return out;
}

void SampleSet::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::kConfig, "cannot write " + path.string());
  f << serialize();
}

SampleSet SampleSet::read(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::kConfig, "cannot read " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse(buf.str());
}

SampleSet collect_samples(std::span<const StateVector> states, std::uint64_t shots, std::uint64_t seed) {
  require(shots >= 1, ErrorKind::kInvalidParameter, "need at least one shot per state");
  SampleSet out;
  if (!states.empty()) out.n_bits = bitstring_length(states[0].basis);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto counts = born_sample(states[k], shots, seed, k);
    for (const auto& [key, c] : counts) out.add(to_bitstring(states[k].basis, key), c);
    out.provenance.push_back({static_cast<int>(k), shots, seed});
  }
  return out;
}

bool SectorRule::accepts(std::string_view bits) const {
  if (total_weight >= 0) {
    return std::count(bits.begin(), bits.end(), '1') == total_weight;
  }
  if (bits.size() % 2 != 0) return false;
  const auto half = bits.size() / 2;
  const auto up = std::count(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(half), '1');
  const auto down = std::count(bits.begin() + static_cast<std::ptrdiff_t>(half), bits.end(), '1');
  return up == n_up && down == n_down;
}

namespace {

// Uniform subset of `weight` positions among `count` (partial Fisher-Yates).
void random_subset(Rng& rng, std::string& bits, std::size_t offset, int count, int weight) {
  std::vector<int> pool(static_cast<std::size_t>(count));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < weight; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(count - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    bits[offset + static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])] = '1';
  }
}

}  // namespace

SampleSet uniform_baseline(int n_bits, std::uint64_t total, std::uint64_t seed,
                           const std::optional<SectorRule>& rule) {
  require(total >= 1, ErrorKind::kInvalidParameter, "uniform baseline needs at least one sample");
  require(n_bits >= 1 && n_bits <= 62, ErrorKind::kInvalidSize, "uniform baseline supports 1..62 bits");
  if (rule) {
    if (rule->total_weight >= 0) {
      require(rule->total_weight <= n_bits, ErrorKind::kInvalidSector, "no bitstring has the requested weight");
    } else {
      require(n_bits % 2 == 0 && rule->n_up >= 0 && rule->n_down >= 0 && rule->n_up <= n_bits / 2 &&
                  rule->n_down <= n_bits / 2,
              ErrorKind::kInvalidSector, "no bitstring satisfies the per-spin weights");
    }
  }
  SampleSet out;
  out.n_bits = n_bits;
  Rng rng(seed, 0x756e69);
  for (std::uint64_t m = 0; m < total; ++m) {
    std::string bits(static_cast<std::size_t>(n_bits), '0');
    if (!rule) {
      for (auto& c : bits) c = (rng.below(2) != 0) ? '1' : '0';
    } else if (rule->total_weight >= 0) {
      random_subset(rng, bits, 0, n_bits, rule->total_weight);
    } else {
      random_subset(rng, bits, 0, n_bits / 2, rule->n_up);
      random_subset(rng, bits, static_cast<std::size_t>(n_bits / 2), n_bits / 2, rule->n_down);
    }
    out.add(std::move(bits), 1);
  }
  out.provenance.push_back({-1, total, seed});
  return out;
}

PostselectResult postselect(const SampleSet& samples, const SectorRule& rule) {
  PostselectResult out;
  out.kept.n_bits = samples.n_bits;
  out.kept.provenance = samples.provenance;
  std::uint64_t dropped = 0;
  for (const auto& [bits, c] : samples.counts) {
    if (rule.accepts(bits)) {
      out.kept.add(bits, c);
    } else {
      dropped += c;
    }
  }
  const auto total = samples.total();
  out.discarded_fraction = total > 0 ? static_cast<double>(dropped) / static_cast<double>(total) : 0.0;
  out.empty = out.kept.counts.empty();
  return out;
}

SampleSet corrupt(const SampleSet& samples, double flip_probability, std::uint64_t seed) {
  require(flip_probability >= 0.0 && flip_probability <= 1.0, ErrorKind::kInvalidParameter,
          "flip probability must lie in [0, 1]");
  if (flip_probability == 0.0) return samples;
  SampleSet out;
  out.n_bits = samples.n_bits;
  out.provenance = samples.provenance;
  Rng rng(seed, 0x666c6970);
  for (const auto& [bits, c] : samples.counts) {
    for (std::uint64_t m = 0; m < c; ++m) {
      std::string shot = bits;
      for (auto& b : shot) {
        if (rng.uniform() < flip_probability) b = b == '1' ? '0' : '1';
      }
      out.add(std::move(shot), 1);
    }
  }
  return out;
}

std::vector<ConfigKey> subspace_basis(const SampleSet& samples, const BasisTag& basis,
                                      std::optional<std::size_t> d_max) {
  std::vector<std::pair<const std::string*, std::uint64_t>> entries;
  entries.reserve(samples.counts.size());
  for (const auto& [bits, c] : samples.counts) entries.emplace_back(&bits, c);
  if (d_max && entries.size() > *d_max) {
    // Map order is already lexicographic, so a stable sort keeps ties lexicographic.
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    entries.resize(*d_max);
  }
  std::vector<ConfigKey> keys;
  keys.reserve(entries.size());
  for (const auto& e : entries) keys.push_back(parse_bitstring(basis, *e.first));
  std::sort(keys.begin(), keys.end());
  return keys;
}

linalg::CsrMatrix project_hamiltonian(const Hamiltonian& h, std::span<const ConfigKey> basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    require(i == 0 || basis[i - 1] < basis[i], ErrorKind::kShape, "subspace basis must be strictly increasing");
    if (!index_of(h.basis(), basis[i]).has_value()) {
      throw Error(ErrorKind::kInvalidBasis,
                  "bitstring " + to_bitstring(h.basis(), basis[i]) + " lies outside the Hamiltonian's space");
    }
  }
  return kernels::project([&h](ConfigKey key, std::vector<Connection>& out) { h.connections(key, out); }, basis);
}

SubspaceSolution solve_subspace(const linalg::CsrMatrix& h_proj, double tolerance) {
  require(h_proj.rows >= 1, ErrorKind::kEmptySubspace, "subspace is empty");
  SubspaceSolution out;
  const linalg::MatVec op = [&h_proj](const CVector& in, CVector& o) { kernels::csr_matvec(h_proj, in, o); };
  if (h_proj.rows <= kDenseSubspaceLimit) {
    CMatrix dense = h_proj.to_dense();
    dense = (0.5 * (dense + dense.adjoint())).eval();
    const auto spectrum = linalg::hermitian_eigen(dense);
    out.energy = spectrum.values[0];
    out.coeffs = spectrum.vectors.col(0).normalized();
  } else {
    linalg::LanczosOptions opts;
    opts.tolerance = tolerance;
    auto pair = linalg::lanczos_lowest(op, h_proj.rows, opts);
    out.energy = pair.value;
    out.coeffs = std::move(pair.vector);
  }
  CVector hc(h_proj.rows);
  op(out.coeffs, hc);
  out.residual = (hc - out.energy * out.coeffs).norm();
  return out;
}

StateVector SubspaceProblem::embed() const {
  StateVector v{CVector::Zero(static_cast<Eigen::Index>(basis_dimension(basis_tag))), basis_tag};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    v.amplitudes[static_cast<Eigen::Index>(*index_of(basis_tag, basis[i]))] = coeffs[static_cast<Eigen::Index>(i)];
  }
  return v;
}

SubspaceProblem solve_on_basis(const Hamiltonian& h, std::vector<ConfigKey> basis) {
  SubspaceProblem p;
  p.basis_tag = h.basis();
  p.basis = std::move(basis);
  p.h_proj = project_hamiltonian(h, p.basis);
  auto sol = solve_subspace(p.h_proj);
  p.energy = sol.energy;
  p.coeffs = std::move(sol.coeffs);
  p.residual = sol.residual;
  return p;
}

SkqdResult skqd_from_states(const Hamiltonian& h, std::span<const StateVector> states, std::uint64_t shots,
                            std::uint64_t seed, const SkqdOptions& options) {
  SkqdResult out;
  out.seed = seed;
  out.samples = collect_samples(states, shots, seed);
  if (options.corruption > 0.0) out.samples = corrupt(out.samples, options.corruption, seed);
  if (options.postselect) {
    auto selected = postselect(out.samples, *options.postselect);
    require(!selected.empty, ErrorKind::kEmptySubspace, "post-selection discarded every sample");
    out.discarded_fraction = selected.discarded_fraction;
    out.samples = std::move(selected.kept);
  }
  out.problem = solve_on_basis(h, subspace_basis(out.samples, h.basis(), options.d_max));
  return out;
}

SkqdResult skqd_estimate(const Hamiltonian& h, const StateVector& psi0, int d, double dt, std::uint64_t shots,
                         std::uint64_t seed, const SkqdOptions& options) {
  const auto states = krylov_states(h, psi0, default_plan(h.dim(), dt, d));
  return skqd_from_states(h, states, shots, seed, options);
}

SkqdResult skqd_best_of(const Hamiltonian& h, std::span<const StateVector> states, std::uint64_t shots,
                        std::span<const std::uint64_t> seeds, const SkqdOptions& options) {
  require(!seeds.empty(), ErrorKind::kInvalidParameter, "best-of needs at least one seed");
  std::optional<SkqdResult> best;
  for (auto seed : seeds) {
    auto r = skqd_from_states(h, states, shots, seed, options);
    if (!best || r.problem.energy < best->problem.energy) best = std::move(r);
  }
  return std::move(*best);
}

std::size_t SparsityProfile::smallest_l(double target) const {
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    if (alpha[l] >= target) return l + 1;
  }
  return alpha.size();
}

std::size_t SparsityProfile::support() const {
  return static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
}

SparsityProfile sparsity_profile(const StateVector& v) {
  require_unit_norm(v, 1e-9, "sparsity_profile");
  const auto dim = v.dim();
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> w(dim);
  for (std::size_t i = 0; i < dim; ++i) w[i] = std::norm(v.amplitudes[static_cast<Eigen::Index>(i)]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  SparsityProfile p;
  p.keys.reserve(dim);
  double acc = 0.0;
  for (auto i : order) {
    p.keys.push_back(key_at(v.basis, i));
    p.weights.push_back(w[i]);
    acc += w[i];
    p.alpha.push_back(acc);
    p.beta.push_back(w[i]);
  }
  return p;
}

CoverageResult coverage_check(const SampleSet& samples, const StateVector& reference, std::size_t l) {
  require(l >= 1, ErrorKind::kInvalidParameter, "L must be at least 1");
  const auto profile = sparsity_profile(reference);
  if (l > profile.support()) {
    std::ostringstream msg;
    msg << "L = " << l << " exceeds the reference support " << profile.support();
    throw Error(ErrorKind::kInvalidParameter, msg.str());
  }
  CoverageResult out;
  for (std::size_t i = 0; i < l; ++i) {
    auto bits = to_bitstring(reference.basis, profile.keys[i]);
    if (samples.counts.count(bits) == 0) out.missing.push_back(std::move(bits));
  }
  out.covered = out.missing.empty();
  return out;
}

}  // namespace skqd
