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

#include "smq/boolean.hpp"
#include "smq/linalg.hpp"

namespace smq {

enum class SupermapClass { FO, QC, Gen };

std::string to_string(SupermapClass c);
SupermapClass supermap_class_from_string(const std::string &s);

/// Dimensions of a T-slot supermap scenario. Spaces are named
/// "P", "A1I", "A1O", ..., "ATI", "ATO", "F".
struct ProcessScenario {
    int T = 1;
    int64_t d_P = 1;
    int64_t d_F = 2;
    std::vector<int64_t> d_I;
    std::vector<int64_t> d_O;

    /// Oracle-query scenario: every slot has dim n+1, final space a qubit.
    static ProcessScenario query(int n, int T);
    static ProcessScenario uniform(int T, int64_t slot_dim, int64_t d_F = 2, int64_t d_P = 1);

    std::string ai(int k) const;  // 1-based slot index
    std::string ao(int k) const;
    SpaceList full_spaces() const;  // P A1I A1O ... F
    SpaceList slot_spaces() const;  // P A1I A1O ... (F contracted away)
    int64_t d_out() const;          // d_P * prod d_O
    int64_t d_in() const;           // d_F * prod d_I
    int64_t d_in_slots() const;     // prod d_I
};

/// One homogeneous validity condition: full trace-and-replace over `replace`,
/// then (id - trace-and-replace) over each factor in `remove`; membership
/// requires the result to vanish. The conditions of a class are commuting
/// orthogonal projectors, mutually orthogonal across conditions.
struct SubspaceCondition {
    std::set<std::string> replace;
    std::vector<std::string> remove;
    std::string name;
};

/// Conditions cutting out the validity subspace of the class; with_f=false
/// gives the F-contracted (superinstrument-sum) variant.
std::vector<SubspaceCondition> subspace_conditions(SupermapClass cls, const ProcessScenario &sc, bool with_f);

ChoiObject apply_subspace_condition(const ChoiObject &w, const SubspaceCondition &c);

/// Orthogonal projection onto the validity subspace of the class, under the
/// Hilbert-Schmidt inner product. If W carries no "F" space it is treated as
/// an F-contracted (superinstrument-sum) operator and projected onto the
/// contracted image of the subspace.
ChoiObject project_subspace(const ChoiObject &w, SupermapClass cls, const ProcessScenario &sc);

struct ValidityReport {
    bool valid = false;
    double min_eigenvalue = 0;
    double trace_error = 0;
    double subspace_residual = 0;
    std::string violated;  // first failed check, empty when valid

    std::string describe() const;
};

/// PSD + trace + subspace membership for FO/Gen. The QC class is checked by
/// a feasibility SDP (see qc.hpp).
ValidityReport is_valid_process(const ChoiObject &w, SupermapClass cls, const ProcessScenario &sc,
                                double tol = 1e-8);

/// Sequential comb from T+1 channel Choi matrices:
/// V1: P -> A1I alpha1, Vt: A(t-1)O alpha(t-1) -> AtI alphat, V(T+1): ATO alphaT -> F.
/// Each must be trace-preserving on its declared spaces.
ChoiObject build_fo_comb(const std::vector<ChoiObject> &channels, const ProcessScenario &sc);

/// Born-rule success probability Tr[(O_x^{(x)T} (x) |i><i|^F) W] for i = f(x).
double evaluate(const ChoiObject &w, const BooleanFunction &f, uint64_t x, const ProcessScenario &sc);

/// Probability of outcome i on input x (general form of `evaluate`).
double outcome_probability(const ChoiObject &w, uint64_t x, int outcome, const ProcessScenario &sc);

}  // namespace smq
