// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "skqd/fermion.hpp"
#include "skqd/pauli.hpp"

namespace skqd::kernels {

namespace {

std::optional<std::size_t> find_key(std::span<const ConfigKey> basis, ConfigKey key) {
  const auto it = std::lower_bound(basis.begin(), basis.end(), key);
  if (it == basis.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - basis.begin());
}

// Sorts by column and merges duplicate entries of one row.
void merge_row(std::vector<std::pair<std::int64_t, Complex>>& row) {
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t w = 0;
  for (std::size_t r = 0; r < row.size(); ++r) {
    if (w > 0 && row[w - 1].first == row[r].first) {
      row[w - 1].second += row[r].second;
    } else {
      row[w++] = row[r];
    }
  }
  row.resize(w);
}

linalg::CsrMatrix assemble_rows(std::vector<std::vector<std::pair<std::int64_t, Complex>>>& rows) {
  linalg::CsrMatrix m;
  m.rows = static_cast<Eigen::Index>(rows.size());
  m.row_ptr.assign(rows.size() + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<std::int64_t>(rows[i].size());
  }
  m.cols.reserve(static_cast<std::size_t>(m.row_ptr.back()));
  m.values.reserve(static_cast<std::size_t>(m.row_ptr.back()));
  for (auto& row : rows) {
    for (const auto& [c, v] : row) {
      m.cols.push_back(c);
      m.values.push_back(v);
    }
  }
  return m;
}

}  // namespace

void pauli_apply(const PauliSum& h, const CVector& in, CVector& out) {
  const auto dim = static_cast<std::int64_t>(h.dim());
  out.resize(dim);
  const auto& terms = h.terms();
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < dim; ++j) {
    Complex acc{};
    const auto row = static_cast<ConfigKey>(j);
    for (const auto& term : terms) {
      const ConfigKey src = row ^ term.string.x_mask();
      acc += term.coefficient * term.string.phase(src) * in[static_cast<Eigen::Index>(src)];
    }
    out[j] = acc;
  }
}

void pauli_apply_serial(const PauliSum& h, const CVector& in, CVector& out) {
  const auto dim = static_cast<Eigen::Index>(h.dim());
  out = CVector::Zero(dim);
  for (const auto& term : h.terms()) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto key = static_cast<ConfigKey>(b);
      out[static_cast<Eigen::Index>(key ^ term.string.x_mask())] +=
          term.coefficient * term.string.phase(key) * in[b];
    }
  }
}

void sector_apply(const FermionHamiltonian& h, const DeterminantSector& sector, const CVector& in,
                  CVector& out) {
  const auto dim = static_cast<std::int64_t>(sector.dim());
  out.resize(dim);
#pragma omp parallel
  {
    std::vector<Connection> buffer;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < dim; ++i) {
      buffer.clear();
      h.connections(sector.key(static_cast<std::size_t>(i)), buffer);
      Complex acc{};
      // H_ij = conj(H_ji); connections of |i> list the H_ji.
      for (const auto& c : buffer) {
        acc += std::conj(c.amplitude) * in[static_cast<Eigen::Index>(*sector.index(c.target))];
      }
      out[i] = acc;
    }
  }
}

void sector_apply_serial(const FermionHamiltonian& h, const DeterminantSector& sector,
                         const CVector& in, CVector& out) {
  const auto dim = static_cast<Eigen::Index>(sector.dim());
  out = CVector::Zero(dim);
  std::vector<Connection> buffer;
  for (Eigen::Index j = 0; j < dim; ++j) {
    buffer.clear();
    h.connections(sector.key(static_cast<std::size_t>(j)), buffer);
    for (const auto& c : buffer) {
      out[static_cast<Eigen::Index>(*sector.index(c.target))] += c.amplitude * in[j];
    }
  }
}

linalg::CsrMatrix project(const ConnectionFn& connections, std::span<const ConfigKey> basis) {
  const auto dim = static_cast<std::int64_t>(basis.size());
  std::vector<std::vector<std::pair<std::int64_t, Complex>>> rows(basis.size());
#pragma omp parallel
  {
    std::vector<Connection> buffer;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < dim; ++i) {
      buffer.clear();
      connections(basis[static_cast<std::size_t>(i)], buffer);
      auto& row = rows[static_cast<std::size_t>(i)];
      for (const auto& c : buffer) {
        if (auto j = find_key(basis, c.target)) {
          row.emplace_back(static_cast<std::int64_t>(*j), std::conj(c.amplitude));
        }
      }
      merge_row(row);
    }
  }
  return assemble_rows(rows);
}

linalg::CsrMatrix project_serial(const ConnectionFn& connections, std::span<const ConfigKey> basis) {
  std::vector<std::vector<std::pair<std::int64_t, Complex>>> rows(basis.size());
  std::vector<Connection> buffer;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    buffer.clear();
    connections(basis[j], buffer);
    for (const auto& c : buffer) {
      if (auto i = find_key(basis, c.target)) {
        rows[*i].emplace_back(static_cast<std::int64_t>(j), c.amplitude);
      }
    }
  }
  for (auto& row : rows) merge_row(row);
  return assemble_rows(rows);
}

void csr_matvec(const linalg::CsrMatrix& m, const CVector& in, CVector& out) {
  out.resize(m.rows);
  const auto rows = static_cast<std::int64_t>(m.rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    Complex acc{};
    for (auto p = m.row_ptr[static_cast<std::size_t>(i)]; p < m.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      acc += m.values[static_cast<std::size_t>(p)] * in[m.cols[static_cast<std::size_t>(p)]];
    }
    out[i] = acc;
  }
}

void csr_matvec_serial(const linalg::CsrMatrix& m, const CVector& in, CVector& out) {
  out = CVector::Zero(m.rows);
  for (Eigen::Index i = 0; i < m.rows; ++i) {
    for (auto p = m.row_ptr[static_cast<std::size_t>(i)]; p < m.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      out[i] += m.values[static_cast<std::size_t>(p)] * in[m.cols[static_cast<std::size_t>(p)]];
    }
  }
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace skqd::kernels
