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

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "smq/errors.hpp"

namespace smq::conic {

enum class ConeType { zero, nonneg, psd };

/// One cone block. For psd, `dim` is the matrix side; it occupies
/// dim*(dim+1)/2 consecutive rows in scaled-lower-triangle (svec) form.
struct ConeBlock {
    ConeType type;
    int64_t dim;

    int64_t rows() const {
        return type == ConeType::psd ? dim * (dim + 1) / 2 : dim;
    }
};

struct Entry {
    int64_t row;
    int64_t col;
    double value;
};

/// Named slice of the variable vector, for tooling and round-trip dumps.
/// matrix_dim > 0 marks an svec-packed symmetric matrix variable.
struct VariableBlock {
    std::string name;
    int64_t offset;
    int64_t size;
    int64_t matrix_dim;
};

/// min c'x  s.t.  Ax + s = b,  s in K,  with K a product of the blocks in
/// `cones` (rows of A ordered accordingly).
struct Problem {
    int64_t num_vars = 0;
    std::vector<Entry> entries;
    std::vector<double> b;
    std::vector<double> c;
    std::vector<ConeBlock> cones;
    std::vector<VariableBlock> var_blocks;

    int64_t num_rows() const {
        int64_t m = 0;
        for (const auto &k : cones) {
            m += k.rows();
        }
        return m;
    }

    void validate() const;
};

/// svec packing: a k x k symmetric matrix maps to k(k+1)/2 entries, ordered
/// (0,0),(0,1),(1,1),(0,2),... with off-diagonal entries scaled by sqrt(2)
/// so that inner products are preserved.
inline int64_t svec_index(int64_t p, int64_t q) {
    return q * (q + 1) / 2 + p;  // requires p <= q
}

Eigen::VectorXd svec(const Eigen::MatrixXd &m);
Eigen::MatrixXd unsvec(const Eigen::VectorXd &v, int64_t dim);

enum class SolveStatus { optimal, inaccurate, primal_infeasible, dual_infeasible, max_iterations };

std::string to_string(SolveStatus s);

struct Solution {
    SolveStatus status = SolveStatus::max_iterations;
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd s;
    double primal_objective = 0;
    double dual_objective = 0;
    double primal_residual = 0;
    double dual_residual = 0;
    double gap = 0;
    int64_t iterations = 0;
    double seconds = 0;
};

}  // namespace smq::conic
