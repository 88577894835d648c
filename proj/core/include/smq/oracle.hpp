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

#include "smq/linalg.hpp"

namespace smq {

/// The (n+1)-dim phase oracle: |0> is fixed, |i> picks up (-1)^{x_i} for
/// i = 1..n. Bit x_1 is the most significant bit of x.
Matrix phase_oracle_unitary(int n, uint64_t x);

/// Choi vector |O_x>> on spaces [A{slot}I, A{slot}O].
ChoiObject phase_oracle_vector(int n, uint64_t x, int slot = 1);

/// T-fold oracle Choi matrix |O_x^T>><<O_x^T| on A1I A1O ... ATI ATO.
ChoiObject phase_oracle_choi(int n, uint64_t x, int copies);

}  // namespace smq
