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

#include "smq/sdp.hpp"

namespace smq {

/// The T-fold query-oracle Choi matrix with entries left symbolic in the
/// input bits: each nonzero entry is a product of (1 - 2 x_i) factors,
/// multilinearly reduced, so every entry has degree at most 2T.
struct OraclePolynomialChoi {
    int n = 0;
    int T = 0;
    int64_t dim = 0;  // matrix side, (n+1)^(2T)
    std::map<std::pair<int64_t, int64_t>, MultilinearPoly> entries;

    const MultilinearPoly *entry(int64_t r, int64_t c) const;
    /// Numeric matrix at a concrete input, on [A1I A1O ... ATI ATO].
    Matrix specialize(uint64_t x) const;
};

OraclePolynomialChoi symbolic_oracle_choi(int n, int T);

/// Output polynomial of a superinstrument: g(x) = p(outcome 1 | x), with
/// deg g <= 2T by construction.
MultilinearPoly extract_polynomial(const Superinstrument &si);

/// Same for a full process matrix (F present), measuring outcome 1 on F.
MultilinearPoly extract_polynomial(const ChoiObject &w, const ProcessScenario &sc);

/// Query lower bounds from polynomial degree: (ceil(deg f / 2),
/// ceil(approx-deg f / 2)); both apply to every supermap class.
std::pair<int, int> polynomial_lower_bound(const BooleanFunction &f);

}  // namespace smq
