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

#include "smq/oracle.hpp"

namespace smq {

Matrix phase_oracle_unitary(int n, uint64_t x) {
    if (n < 1 || (n < 64 && x >> n != 0)) {
        throw DimensionMismatch("bit string does not fit n bits");
    }
    Matrix u = Matrix::Zero(n + 1, n + 1);
    u(0, 0) = 1;
    for (int i = 1; i <= n; i++) {
        u(i, i) = ((x >> (n - i)) & 1) ? -1.0 : 1.0;
    }
    return u;
}

ChoiObject phase_oracle_vector(int n, uint64_t x, int slot) {
    std::string k = std::to_string(slot);
    return choi_of_isometry(phase_oracle_unitary(n, x), {"A" + k + "I", int64_t{n + 1}},
                            {{"A" + k + "O", int64_t{n + 1}}});
}

ChoiObject phase_oracle_choi(int n, uint64_t x, int copies) {
    if (copies < 1) {
        throw DimensionMismatch("need at least one oracle copy");
    }
    ChoiObject v = phase_oracle_vector(n, x, 1);
    for (int t = 2; t <= copies; t++) {
        v = tensor(v, phase_oracle_vector(n, x, t));
    }
    return outer(v);
}

}  // namespace smq
