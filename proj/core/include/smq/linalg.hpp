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

#include <set>

#include "smq/choi.hpp"

namespace smq {

/// Choi vector |U>> = sum_i |i> (x) U|i> of an isometry U, on spaces
/// [in_space, out_spaces...].
ChoiObject choi_of_isometry(const Matrix &iso, const SpaceLabel &in_space, const SpaceList &out_spaces,
                            double tol = 1e-10);
ChoiObject choi_of_isometry(const Matrix &iso, const SpaceList &in_spaces, const SpaceList &out_spaces,
                            double tol = 1e-10);

/// Choi matrix of the channel rho -> U rho U^dag, on [in_space, out_spaces...].
ChoiObject choi_of_isometry_channel(const Matrix &iso, const SpaceLabel &in_space, const SpaceList &out_spaces,
                                    double tol = 1e-10);

/// Link product: contracts the spaces shared by name, tensors the rest.
/// Works for matrix*matrix and vector*vector. Output space order is
/// [a-only spaces, b-only spaces].
ChoiObject link_product(const ChoiObject &a, const ChoiObject &b);

ChoiObject partial_trace(const ChoiObject &a, const std::set<std::string> &over);

/// (1^x / d_x) (x) Tr_x a, re-embedded in the original space order.
ChoiObject trace_and_replace(const ChoiObject &a, const std::string &x);
ChoiObject trace_and_replace(const ChoiObject &a, const std::set<std::string> &xs);

/// a - trace_and_replace(a, x).
ChoiObject one_minus(const ChoiObject &a, const std::string &x);

/// Action of a channel Choi matrix on a state: Tr_X[(rho^T (x) 1) M].
Matrix apply_channel(const ChoiObject &choi, const Matrix &state);

/// Outer product |v><v| of a Choi vector, same spaces.
ChoiObject outer(const ChoiObject &v);

/// Kronecker-style product on disjoint spaces (link product with no overlap).
ChoiObject tensor(const ChoiObject &a, const ChoiObject &b);

ChoiObject identity_matrix_on(const SpaceList &spaces);

ChoiObject from_json(const std::string &json_text);

}  // namespace smq
