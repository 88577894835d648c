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

#include <random>
#include <sstream>

#include "smq/conic/io.hpp"
#include "smq/conic/solver.hpp"

using namespace smq::conic;

namespace {

std::mt19937_64 rng(777);

double gauss() {
    static std::normal_distribution<double> g;
    return g(rng);
}

/// Random instance with a known optimum, built from a complementary
/// primal-dual pair: pick y* in K*, set c = -A'y*, pick s* in K with
/// <s*, y*> = 0, set b = Ax* + s*. Then c'x* = -b'y* is optimal.
struct KnownInstance {
    Problem p;
    double opt;
};

KnownInstance random_known_instance() {
    std::vector<ConeBlock> cones;
    int blocks = 2 + static_cast<int>(rng() % 3);
    bool has_zero = false;
    for (int i = 0; i < blocks; i++) {
        switch (rng() % 3) {
            case 0:
                cones.push_back({ConeType::zero, 1 + static_cast<int64_t>(rng() % 3)});
                has_zero = true;
                break;
            case 1:
                cones.push_back({ConeType::nonneg, 1 + static_cast<int64_t>(rng() % 4)});
                break;
            default:
                cones.push_back({ConeType::psd, 2 + static_cast<int64_t>(rng() % 3)});
                break;
        }
    }
    (void)has_zero;
    int64_t m = 0;
    for (const auto &k : cones) {
        m += k.rows();
    }
    int64_t n = 2 + static_cast<int64_t>(rng() % 4);

    Eigen::MatrixXd a(m, n);
    for (int64_t i = 0; i < m; i++) {
        for (int64_t j = 0; j < n; j++) {
            a(i, j) = gauss();
        }
    }

    Eigen::VectorXd ystar(m), sstar(m);
    int64_t off = 0;
    for (const auto &k : cones) {
        if (k.type == ConeType::zero) {
            for (int64_t i = 0; i < k.dim; i++) {
                ystar(off + i) = gauss();  // free dual
                sstar(off + i) = 0;
            }
        } else if (k.type == ConeType::nonneg) {
            for (int64_t i = 0; i < k.dim; i++) {
                // Complementary supports.
                if (rng() % 2) {
                    ystar(off + i) = std::abs(gauss());
                    sstar(off + i) = 0;
                } else {
                    ystar(off + i) = 0;
                    sstar(off + i) = std::abs(gauss());
                }
            }
        } else {
            // Split a random eigenbasis between the two sides.
            int64_t d = k.dim;
            Eigen::MatrixXd g(d, d);
            for (int64_t i = 0; i < d; i++) {
                for (int64_t j = 0; j < d; j++) {
                    g(i, j) = gauss();
                }
            }
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
            Eigen::MatrixXd q = qr.householderQ();
            Eigen::VectorXd ly = Eigen::VectorXd::Zero(d), ls = Eigen::VectorXd::Zero(d);
            for (int64_t i = 0; i < d; i++) {
                if (rng() % 2) {
                    ly(i) = 0.2 + std::abs(gauss());
                } else {
                    ls(i) = 0.2 + std::abs(gauss());
                }
            }
            Eigen::MatrixXd ym = q * ly.asDiagonal() * q.transpose();
            Eigen::MatrixXd sm = q * ls.asDiagonal() * q.transpose();
            ystar.segment(off, k.rows()) = svec(ym);
            sstar.segment(off, k.rows()) = svec(sm);
        }
        off += k.rows();
    }

    Eigen::VectorXd xstar(n);
    for (int64_t j = 0; j < n; j++) {
        xstar(j) = gauss();
    }
    Eigen::VectorXd c = -a.transpose() * ystar;
    Eigen::VectorXd b = a * xstar + sstar;

    Problem p;
    p.num_vars = n;
    p.cones = cones;
    p.b.assign(b.data(), b.data() + m);
    p.c.assign(c.data(), c.data() + n);
    for (int64_t i = 0; i < m; i++) {
        for (int64_t j = 0; j < n; j++) {
            p.entries.push_back({i, j, a(i, j)});
        }
    }
    p.validate();
    return {std::move(p), c.dot(xstar)};
}

}  // namespace

TEST_CASE("svec round trip preserves inner products") {
    for (int rep = 0; rep < 10; rep++) {
        int64_t d = 2 + static_cast<int64_t>(rng() % 4);
        Eigen::MatrixXd g(d, d);
        for (int64_t i = 0; i < d; i++) {
            for (int64_t j = 0; j < d; j++) {
                g(i, j) = gauss();
            }
        }
        Eigen::MatrixXd s = (g + g.transpose()) / 2;
        Eigen::VectorXd v = svec(s);
        CHECK((unsvec(v, d) - s).norm() < 1e-13);
        Eigen::MatrixXd t = g * g.transpose();
        CHECK(svec(t).dot(v) == doctest::Approx((t * s).trace()).epsilon(1e-10));
    }
    CHECK(svec_index(0, 1) == 1);
    CHECK(svec_index(1, 1) == 2);
    CHECK(svec_index(0, 2) == 3);
}

TEST_CASE("fifty random instances with known optima") {
    int solved = 0;
    for (int rep = 0; rep < 50; rep++) {
        auto inst = random_known_instance();
        SolverConfig cfg;
        cfg.tol = 1e-9;
        cfg.max_iters = 100000;
        Solution sol = solve(inst.p, cfg);
        CHECK(sol.status == SolveStatus::optimal);
        CHECK(std::abs(sol.primal_objective - inst.opt) <= 1e-6);
        // Weak duality: the reported dual value never exceeds the primal
        // beyond the residual tolerance.
        CHECK(sol.dual_objective <= sol.primal_objective + 1e-6);
        if (sol.status == SolveStatus::optimal) {
            solved++;
        }
    }
    CHECK(solved == 50);
}

TEST_CASE("analytic psd instance") {
    // min x subject to [[x, 1], [1, x]] psd: optimum x = 1.
    Problem p;
    p.num_vars = 1;
    p.cones = {{ConeType::psd, 2}};
    // s = svec([[x,1],[1,x]]) = b - Ax with A = -svec(E00+E11), b = svec(offdiag).
    p.entries = {{0, 0, -1.0}, {2, 0, -1.0}};
    p.b = {0.0, std::sqrt(2.0), 0.0};
    p.c = {1.0};
    SolverConfig cfg;
    cfg.tol = 1e-10;
    Solution sol = solve(p, cfg);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("infeasible and unbounded detection") {
    // x = 1 and x = 2 simultaneously: primal infeasible.
    Problem p;
    p.num_vars = 1;
    p.cones = {{ConeType::zero, 2}};
    p.entries = {{0, 0, 1.0}, {1, 0, 1.0}};
    p.b = {1.0, 2.0};
    p.c = {1.0};
    Solution sol = solve(p);
    CHECK(sol.status == SolveStatus::primal_infeasible);

    // min -x with x only bounded below: dual infeasible (unbounded primal).
    Problem q;
    q.num_vars = 1;
    q.cones = {{ConeType::nonneg, 1}};
    q.entries = {{0, 0, -1.0}};
    q.b = {0.0};
    q.c = {-1.0};
    Solution sol2 = solve(q);
    CHECK(sol2.status == SolveStatus::dual_infeasible);
}

TEST_CASE("problem validation rejects malformed input") {
    Problem p;
    p.num_vars = 2;
    p.cones = {{ConeType::nonneg, 1}};
    p.b = {0.0};
    p.c = {1.0};  // wrong length
    CHECK_THROWS(p.validate());
    p.c = {1.0, 2.0};
    CHECK_NOTHROW(p.validate());
    p.entries.push_back({5, 0, 1.0});  // row out of range
    CHECK_THROWS(p.validate());
}

TEST_CASE("problem io round trip") {
    auto inst = random_known_instance();
    inst.p.var_blocks.push_back({"eps", 0, 1, 0});
    std::stringstream ss;
    write_problem(ss, inst.p);
    Problem back = read_problem(ss);
    CHECK(back.num_vars == inst.p.num_vars);
    CHECK(back.b == inst.p.b);
    CHECK(back.c == inst.p.c);
    CHECK(back.entries.size() == inst.p.entries.size());
    for (size_t i = 0; i < back.entries.size(); i++) {
        CHECK(back.entries[i].row == inst.p.entries[i].row);
        CHECK(back.entries[i].col == inst.p.entries[i].col);
        CHECK(back.entries[i].value == inst.p.entries[i].value);  // lossless
    }
    REQUIRE(back.cones.size() == inst.p.cones.size());
    for (size_t i = 0; i < back.cones.size(); i++) {
        CHECK(back.cones[i].type == inst.p.cones[i].type);
        CHECK(back.cones[i].dim == inst.p.cones[i].dim);
    }
    REQUIRE(back.var_blocks.size() == 1);
    CHECK(back.var_blocks[0].name == "eps");
}

TEST_CASE("warm start reaches the optimum quickly") {
    auto inst = random_known_instance();
    SolverConfig cfg;
    cfg.tol = 1e-9;
    Solution first = solve(inst.p, cfg);
    REQUIRE(first.status == SolveStatus::optimal);
    cfg.warm_start = first;
    Solution second = solve(inst.p, cfg);
    CHECK(second.status == SolveStatus::optimal);
    CHECK(second.iterations <= first.iterations);
    CHECK(std::abs(second.primal_objective - inst.opt) <= 1e-6);
}
