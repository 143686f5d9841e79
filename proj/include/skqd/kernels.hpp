// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel inner loops. Each OpenMP kernel has a serial twin that follows
// the textbook (scatter) formulation; the tests check them against each other
// and bench/ compares their throughput.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "skqd/core.hpp"
#include "skqd/linalg.hpp"

namespace skqd {
class PauliSum;
class FermionHamiltonian;
class DeterminantSector;
}  // namespace skqd

namespace skqd::kernels {

using ConnectionFn = std::function<void(ConfigKey, std::vector<Connection>&)>;

void pauli_apply(const PauliSum& h, const CVector& in, CVector& out);
void pauli_apply_serial(const PauliSum& h, const CVector& in, CVector& out);

void sector_apply(const FermionHamiltonian& h, const DeterminantSector& sector, const CVector& in,
                  CVector& out);
void sector_apply_serial(const FermionHamiltonian& h, const DeterminantSector& sector,
                         const CVector& in, CVector& out);

/// <b_i|H|b_j> over a strictly increasing key list; duplicates merged.
linalg::CsrMatrix project(const ConnectionFn& connections, std::span<const ConfigKey> basis);
linalg::CsrMatrix project_serial(const ConnectionFn& connections, std::span<const ConfigKey> basis);

void csr_matvec(const linalg::CsrMatrix& m, const CVector& in, CVector& out);
void csr_matvec_serial(const linalg::CsrMatrix& m, const CVector& in, CVector& out);

/// Number of OpenMP threads a parallel region would use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace skqd::kernels
