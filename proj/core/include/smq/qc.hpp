// Copyright 2026 The smq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <random>
#include <tuple>

#include "smq/process.hpp"

namespace smq {

/// Coherently order-controlled circuit, given by its internal isometry
/// components. The component V^{->next}_{K,k} maps A{k}O (x) alpha{t} to
/// A{next}I (x) alpha{t+1}; it is stored under key (mask of K, k, next),
/// with the conventions
///   - first step (nothing applied yet): key (0, 0, k1), maps P to A{k1}I alpha1;
///   - final step: key (mask of K, kT, 0), maps A{kT}O alphaT to F alphaF.
/// Subset masks use bit k-1 for slot k. Validity requires the coherently
/// controlled operation between consecutive steps to be an isometry: for each
/// done-set after step t, the components departing the histories that end in
/// that set, stacked over the allowed `next` values, must form jointly
/// orthonormal column blocks (so components of distinct merging histories
/// have orthogonal ranges).
struct QcImplementation {
    ProcessScenario scenario;
    std::vector<int64_t> d_alpha;  // alpha1..alphaT
    int64_t d_alpha_F = 1;
    std::map<std::tuple<uint32_t, int, int>, Matrix> components;

    const Matrix &component(uint32_t k_mask, int k, int next) const;
    void check(double tol = 1e-10) const;
};

/// Process vector for one fixed application order, on P A^{IO} F alphaF.
ChoiObject qc_order_vector(const QcImplementation &impl, const std::vector<int> &order);

/// W = Tr_alphaF |sum over orders><...|, on the scenario's full spaces.
ChoiObject build_qc_process(const QcImplementation &impl);

/// Sequential image: relabels slot spaces of each order's process vector to
/// the fixed order 1..T before summing; agrees with build_qc_process on T
/// copies of one unitary.
ChoiObject qc_to_fo(const QcImplementation &impl);

/// Order-controlled validity as a feasibility program over auxiliary
/// positive semidefinite matrices, one per (applied-set, active-slot) pair.
ValidityReport is_valid_qc_process(const ChoiObject &w, const ProcessScenario &sc, double tol = 1e-6);

/// Haar-style random implementation with uniform ancilla dimension.
QcImplementation random_qc_implementation(const ProcessScenario &sc, int64_t d_alpha, std::mt19937_64 &rng);

/// Order-coherent two-slot routing fixture: a qubit target, control prepared
/// in the balanced superposition of the two orders, final space
/// target (x) control (d_F = 4).
QcImplementation switch_implementation();

Matrix random_unitary(int64_t dim, std::mt19937_64 &rng);

/// Action of a supermap on T given single-slot unitaries: the resulting
/// channel Choi matrix on P (in) and F (out).
ChoiObject supermap_action(const ChoiObject &w, const std::vector<Matrix> &unitaries,
                           const ProcessScenario &sc);

}  // namespace smq
