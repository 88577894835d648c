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

#include <cmath>

#include "smq/conic/problem.hpp"

namespace smq::conic {

void Problem::validate() const {
    int64_t m = num_rows();
    if (static_cast<int64_t>(b.size()) != m) {
        throw DimensionMismatch("b has " + std::to_string(b.size()) + " entries, cones give " +
                                std::to_string(m) + " rows");
    }
    if (static_cast<int64_t>(c.size()) != num_vars) {
        throw DimensionMismatch("c length does not match num_vars");
    }
    for (const auto &k : cones) {
        if (k.dim < 1) {
            throw DimensionMismatch("cone block with dim < 1");
        }
    }
    for (const auto &e : entries) {
        if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= num_vars) {
            throw DimensionMismatch("A entry out of range: (" + std::to_string(e.row) + ", " +
                                    std::to_string(e.col) + ")");
        }
    }
    for (const auto &v : var_blocks) {
        if (v.offset < 0 || v.size < 0 || v.offset + v.size > num_vars) {
            throw DimensionMismatch("variable block '" + v.name + "' out of range");
        }
        if (v.matrix_dim > 0 && v.matrix_dim * (v.matrix_dim + 1) / 2 != v.size) {
            throw DimensionMismatch("variable block '" + v.name + "' has inconsistent matrix_dim");
        }
    }
}

Eigen::VectorXd svec(const Eigen::MatrixXd &m) {
    int64_t k = m.rows();
    if (m.cols() != k) {
        throw DimensionMismatch("svec needs a square matrix");
    }
    const double r2 = std::sqrt(2.0);
    Eigen::VectorXd v(k * (k + 1) / 2);
    for (int64_t q = 0; q < k; q++) {
        for (int64_t p = 0; p <= q; p++) {
            v[svec_index(p, q)] = p == q ? m(p, p) : r2 * 0.5 * (m(p, q) + m(q, p));
        }
    }
    return v;
}

Eigen::MatrixXd unsvec(const Eigen::VectorXd &v, int64_t dim) {
    if (static_cast<int64_t>(v.size()) != dim * (dim + 1) / 2) {
        throw DimensionMismatch("unsvec length does not match dim");
    }
    const double inv_r2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd m(dim, dim);
    for (int64_t q = 0; q < dim; q++) {
        for (int64_t p = 0; p <= q; p++) {
            double x = v[svec_index(p, q)];
            if (p == q) {
                m(p, p) = x;
            } else {
                m(p, q) = m(q, p) = x * inv_r2;
            }
        }
    }
    return m;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::inaccurate:
            return "inaccurate";
        case SolveStatus::primal_infeasible:
            return "primal_infeasible";
        case SolveStatus::dual_infeasible:
            return "dual_infeasible";
        case SolveStatus::max_iterations:
            return "max_iterations";
    }
    return "unknown";
}

}  // namespace smq::conic
