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

#include "smq/conic/solver.hpp"
#include "smq/process.hpp"

namespace smq {

/// Outcome-resolved process pair on the contracted slot spaces (the final
/// space is already summed out against the two measurement outcomes).
struct Superinstrument {
    ProcessScenario scenario;
    SupermapClass cls = SupermapClass::Gen;
    ChoiObject w0, w1;

    /// PSD of each part, plus validity of the sum as a contracted process.
    ValidityReport validate(double tol = 1e-6) const;
};

/// Multipliers and dual operator certifying a lower bound on the error:
/// eps >= sum(lambda) - Tr(wbar) / d_in_slots whenever lambda >= 0,
/// sum(lambda) <= 1, sum_{x: f(x)=i} lambda_x O_x^{(x)T} <= wbar for both i,
/// and wbar lies in the dual cone of the class.
struct DualSolution {
    ProcessScenario scenario;
    SupermapClass cls = SupermapClass::Gen;
    Eigen::VectorXd lambdas;  // indexed by input x
    ChoiObject wbar;          // on the contracted slot spaces

    double bound() const;
};

/// A built cone program plus the layout needed to interpret its solutions.
struct QueryProblem {
    conic::Problem conic;
    BooleanFunction f{1, uint64_t{0}};
    int T = 1;
    SupermapClass cls = SupermapClass::Gen;
    ProcessScenario scenario;
    // Primal layout: x = [eps, svec W0, svec W1].
    // Dual layout:   x = [lambda_0..lambda_{2^n-1}, svec wbar].
    int64_t block_dim = 0;
    int64_t ineq_row_start = 0;  // primal: first per-input inequality row
    int64_t zero_rows = 0;
};

/// min eps over superinstruments of the class with
/// Tr[W^[f(x)] O_x^{(x)T}] >= 1 - eps for every input x.
QueryProblem build_primal(const BooleanFunction &f, int T, SupermapClass cls);

/// Explicit dual: min Tr(wbar)/d_in_slots - sum(lambda) subject to the
/// DualSolution constraints; the optimum is -eps.
QueryProblem build_dual(const BooleanFunction &f, int T, SupermapClass cls);

struct MinErrorResult {
    uint64_t id = 0;
    int n = 0;
    int T = 0;
    SupermapClass cls = SupermapClass::Gen;
    double eps_primal = 0;
    double eps_dual = 0;
    double gap = 0;
    Superinstrument primal;
    DualSolution dual;
    conic::SolveStatus status = conic::SolveStatus::max_iterations;
    int64_t iterations = 0;
    double seconds = 0;

    /// {id, n, T, class, eps_primal, eps_dual, gap, iters, wall_time}
    std::string to_json() const;
};

/// Solves the primal and reads the dual certificate off the same solve.
MinErrorResult min_error(const BooleanFunction &f, int T, SupermapClass cls,
                         const conic::SolverConfig &cfg = {});

/// Superinstrument recovered from a primal solution vector.
Superinstrument superinstrument_from_solution(const QueryProblem &qp, const Eigen::VectorXd &x);

/// Dual certificate recovered from the primal solve's dual vector y.
DualSolution dual_from_primal_solution(const QueryProblem &qp, const Eigen::VectorXd &y);

}  // namespace smq
