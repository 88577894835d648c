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

#include <functional>
#include <optional>

#include "smq/conic/problem.hpp"

namespace smq::conic {

struct SolverConfig {
    double tol = 1e-6;
    double infeas_tol = 1e-9;
    int64_t max_iters = 200000;
    double alpha = 1.5;  // over-relaxation
    int64_t check_interval = 50;
    double cg_tol_factor = 0.2;  // CG tolerance shrinks with iteration count
    /// Extra primal/dual balance factor: multiplies the scaled b and divides
    /// the scaled c. A pure reparameterization (recovered solutions are
    /// unchanged) that shifts effort between primal and dual residuals.
    double scale = 1.0;
    int64_t ruiz_iters = 10;
    bool verbose = false;
    /// Warm start for (x, y, s) in original (unscaled) coordinates.
    std::optional<Solution> warm_start;
    /// Called at every residual check; return false to abort the solve.
    std::function<bool(int64_t iter, double pres, double dres, double gap)> progress;
};

/// Splitting-method solver for cone programs over zero/nonneg/psd blocks,
/// via the homogeneous self-dual embedding.
Solution solve(const Problem &problem, const SolverConfig &config = {});

}  // namespace smq::conic
