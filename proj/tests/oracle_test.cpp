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

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "smq/oracle.hpp"

using namespace smq;

TEST_CASE("phase oracle unitary") {
    // Diagonal, |0> fixed, |i> picks up (-1)^{x_i} with x_1 the MSB.
    int n = 3;
    for (uint64_t x = 0; x < 8; x++) {
        Matrix u = phase_oracle_unitary(n, x);
        CHECK(u.rows() == n + 1);
        CHECK((u - u.diagonal().asDiagonal().toDenseMatrix()).norm() == 0.0);
        CHECK(u(0, 0) == Complex(1, 0));
        for (int i = 1; i <= n; i++) {
            int xi = (x >> (n - i)) & 1;
            CHECK(u(i, i) == Complex(xi ? -1 : 1, 0));
        }
        CHECK((u * u - Matrix::Identity(n + 1, n + 1)).norm() == 0.0);
    }
}

TEST_CASE("oracle choi vector entries") {
    int n = 2;
    uint64_t x = 0b10;  // x_1 = 1, x_2 = 0
    auto v = phase_oracle_vector(n, x, 1);
    CHECK(v.kind() == ChoiKind::vector);
    CHECK(v.dim() == 9);
    REQUIRE(v.spaces().size() == 2);
    CHECK(v.spaces()[0].name == "A1I");
    CHECK(v.spaces()[1].name == "A1O");
    // |O_x>> = sum_i (+-1) |ii>: support only on equal index pairs.
    Matrix u = phase_oracle_unitary(n, x);
    for (int64_t i = 0; i <= n; i++) {
        for (int64_t o = 0; o <= n; o++) {
            Complex want = (i == o) ? u(i, i) : Complex(0, 0);
            CHECK(v.data()(i * (n + 1) + o, 0) == want);
        }
    }
}

TEST_CASE("T-fold oracle choi is rank one with +-1 support") {
    int n = 2, T = 2;
    for (uint64_t x = 0; x < 4; x++) {
        auto w = phase_oracle_choi(n, x, T);
        int64_t d = 1;
        for (int t = 0; t < 2 * T; t++) {
            d *= n + 1;
        }
        CHECK(w.dim() == d);
        CHECK(w.spaces().size() == static_cast<size_t>(2 * T));
        CHECK(w.is_hermitian(1e-14));
        CHECK(w.data().imag().norm() == 0.0);

        // Rank one with trace (n+1)^T.
        Eigen::SelfAdjointEigenSolver<Matrix> es(w.data());
        int rank = 0;
        for (int64_t i = 0; i < w.dim(); i++) {
            if (std::abs(es.eigenvalues()(i)) > 1e-9) {
                rank++;
            }
        }
        CHECK(rank == 1);
        CHECK(std::abs(w.data().trace() - Complex(9, 0)) < 1e-12);

        // Independent construction from the tensor square of the vector.
        auto v1 = phase_oracle_vector(n, x, 1);
        auto v2 = phase_oracle_vector(n, x, 2);
        auto vv = tensor(v1, v2);
        auto direct = outer(vv).permuted(w.spaces());
        CHECK((w.data() - direct.data()).norm() < 1e-13);

        // Entries are 0 or +-1, nonzero only on diagonal index tuples.
        for (int64_t r = 0; r < w.dim(); r++) {
            for (int64_t c = 0; c < w.dim(); c++) {
                double e = w.data()(r, c).real();
                CHECK((e == 0.0 || e == 1.0 || e == -1.0));
            }
        }
    }
}

TEST_CASE("distinct inputs give distinct oracles") {
    int n = 3;
    for (uint64_t x = 0; x < 8; x++) {
        for (uint64_t y = x + 1; y < 8; y++) {
            CHECK((phase_oracle_unitary(n, x) - phase_oracle_unitary(n, y)).norm() > 1.0);
        }
    }
}
