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

#include <gmpxx.h>

#include "smq/process.hpp"

namespace smq {

using Rational = mpq_class;

/// Best rational approximation of v with denominator <= max_denominator,
/// by continued fractions. Exact values with small denominators round-trip.
Rational rationalize(double v, int64_t max_denominator = 1000000);

/// Dense square matrix of exact rationals (real and imaginary parts) over
/// named tensor factors, row-major with the first space varying slowest.
/// All arithmetic after construction is exact.
struct RationalChoi {
    SpaceList spaces;
    int64_t dim = 0;
    std::vector<Rational> re, im;

    RationalChoi() = default;
    explicit RationalChoi(SpaceList sp);

    Rational &real_at(int64_t r, int64_t c) { return re[r * dim + c]; }
    Rational &imag_at(int64_t r, int64_t c) { return im[r * dim + c]; }
    const Rational &real_at(int64_t r, int64_t c) const { return re[r * dim + c]; }
    const Rational &imag_at(int64_t r, int64_t c) const { return im[r * dim + c]; }

    Rational trace() const;
    bool is_hermitian() const;
    bool is_zero() const;
    bool operator==(const RationalChoi &other) const;

    RationalChoi &operator+=(const RationalChoi &other);
    RationalChoi &operator-=(const RationalChoi &other);
    /// Scales every entry by s.
    RationalChoi &operator*=(const Rational &s);

    /// (M + M^dagger) / 2, exact.
    RationalChoi hermitized() const;
    /// Double-precision image (for eigenvalue guesses only).
    Matrix to_matrix() const;
};

RationalChoi rational_identity(SpaceList sp);

/// Entrywise rationalization of a Choi matrix.
RationalChoi rationalize_choi(const ChoiObject &w, int64_t max_denominator = 1000000);

/// Exact (1^x / d_x) (x) Tr_x, mirroring the floating-point map.
RationalChoi rational_trace_and_replace(const RationalChoi &m, const std::string &name);

/// Exact counterpart of apply_subspace_condition.
RationalChoi rational_apply_condition(const RationalChoi &m, const SubspaceCondition &c);

/// Exact Tr[A B]; imaginary parts must cancel (Hermitian inputs), the real
/// part is returned.
Rational rational_trace_product(const RationalChoi &a, const RationalChoi &b);

/// Exact orthogonal projection onto the validity subspace of the class
/// (F-contracted variant when the matrix carries no "F" space), same map as
/// process.project_subspace but over rationals.
RationalChoi exact_project_subspace(const RationalChoi &m, SupermapClass cls,
                                    const ProcessScenario &sc);

/// Exact projection onto the cone dual to the class's process-matrix set:
/// Pi(X) = X - Pi_L(X) + Tr(X) / (total dim) * 1.
RationalChoi exact_project_dual_cone(const RationalChoi &m, SupermapClass cls,
                                     const ProcessScenario &sc);

struct PsdVerdict {
    bool psd = false;
    /// On failure, an exact vector v (real embedding coordinates) with
    /// v^T M v < 0; empty when psd.
    std::vector<Rational> witness;
};

/// Exact positive-semidefiniteness via symmetric rational LDL^T elimination
/// in natural pivot order: every pivot must be >= 0 and any zero pivot must
/// have an all-zero residual row. Complex matrices use the 2D real symmetric
/// embedding [[Re, -Im], [Im, Re]]. Requires a Hermitian input.
PsdVerdict exact_psd_check(const RationalChoi &m);

}  // namespace smq
