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

#include "smq/sdp.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>

#include "smq/oracle.hpp"

namespace smq {

namespace {

constexpr int64_t kDimCap = 700;
const double kSqrt2 = std::sqrt(2.0);

// Precomputed layout of one validity condition over the contracted spaces.
struct CondPre {
    SpaceList reduced;
    std::vector<int64_t> red_stride;  // full-space stride per reduced space
    std::vector<int> rem_idx;         // reduced-list index of each removed space
    std::vector<int64_t> rem_stride;
    std::vector<int64_t> rem_dim;
    std::vector<int64_t> rep_offsets;  // flat offsets over replaced digits
    std::vector<int> rep_pos;          // full-space position of replaced spaces
    double inv_d_repl = 1;
};

CondPre precompute(const SpaceList &spaces, const SubspaceCondition &c) {
    CondPre pre;
    auto st = strides_of(spaces);
    for (size_t i = 0; i < spaces.size(); i++) {
        if (c.replace.count(spaces[i].name)) {
            pre.rep_pos.push_back(static_cast<int>(i));
            pre.inv_d_repl /= static_cast<double>(spaces[i].dim);
        } else {
            pre.reduced.push_back(spaces[i]);
            pre.red_stride.push_back(st[i]);
        }
    }
    for (const auto &name : c.remove) {
        size_t ri = space_index(pre.reduced, name);
        pre.rem_idx.push_back(static_cast<int>(ri));
        pre.rem_stride.push_back(pre.red_stride[ri]);
        pre.rem_dim.push_back(pre.reduced[ri].dim);
    }
    pre.rep_offsets.push_back(0);
    for (int pos : pre.rep_pos) {
        std::vector<int64_t> next;
        for (int64_t off : pre.rep_offsets) {
            for (int64_t e = 0; e < spaces[pos].dim; e++) {
                next.push_back(off + e * st[pos]);
            }
        }
        pre.rep_offsets = std::move(next);
    }
    return pre;
}

// Coefficients of [prod(id - R_remove)](Tr_replace W) at reduced entry
// (digits_r, digits_c), as full-space entries of W: sink(p, q, coef).
// `factor` premultiplies everything (1 for homogeneous rows, inv_d_repl when
// the full trace-and-replace operator is wanted).
template <typename Sink>
void reduced_entry_coeffs(const CondPre &pre, const std::vector<int64_t> &digits_r,
                          const std::vector<int64_t> &digits_c, double factor, Sink &&sink) {
    int64_t p0 = 0, q0 = 0;
    for (size_t i = 0; i < pre.reduced.size(); i++) {
        p0 += digits_r[i] * pre.red_stride[i];
        q0 += digits_c[i] * pre.red_stride[i];
    }
    size_t nrem = pre.rem_idx.size();
    for (uint32_t j_mask = 0; j_mask < (uint32_t{1} << nrem); j_mask++) {
        bool ok = true;
        double coef = factor;
        int64_t pb = p0, qb = q0;
        for (size_t j = 0; j < nrem; j++) {
            if (!((j_mask >> j) & 1)) {
                continue;
            }
            if (digits_r[pre.rem_idx[j]] != digits_c[pre.rem_idx[j]]) {
                ok = false;
                break;
            }
            coef /= static_cast<double>(pre.rem_dim[j]);
            pb -= digits_r[pre.rem_idx[j]] * pre.rem_stride[j];
            qb -= digits_c[pre.rem_idx[j]] * pre.rem_stride[j];
        }
        if (!ok) {
            continue;
        }
        if (std::popcount(j_mask) % 2 == 1) {
            coef = -coef;
        }
        // Enumerate the traced digits of the removed factors in J.
        std::vector<int64_t> a_offsets{0};
        for (size_t j = 0; j < nrem; j++) {
            if (!((j_mask >> j) & 1)) {
                continue;
            }
            std::vector<int64_t> next;
            for (int64_t off : a_offsets) {
                for (int64_t a = 0; a < pre.rem_dim[j]; a++) {
                    next.push_back(off + a * pre.rem_stride[j]);
                }
            }
            a_offsets = std::move(next);
        }
        for (int64_t off_a : a_offsets) {
            for (int64_t off_e : pre.rep_offsets) {
                sink(pb + off_a + off_e, qb + off_a + off_e, coef);
            }
        }
    }
}

// Folds a full-space entry functional onto svec coordinates of a symmetric
// matrix variable.
struct SvecRow {
    std::vector<std::pair<int64_t, double>> terms;  // (local svec index, coef)

    void add(int64_t p, int64_t q, double coef) {
        int64_t lo = std::min(p, q), hi = std::max(p, q);
        double v = lo == hi ? coef : coef / kSqrt2;
        int64_t idx = conic::svec_index(lo, hi);
        for (auto &t : terms) {
            if (t.first == idx) {
                t.second += v;
                return;
            }
        }
        terms.emplace_back(idx, v);
    }

    void clear() {
        terms.clear();
    }
};

Eigen::VectorXd oracle_svec(int n, uint64_t x, int T, const ProcessScenario &sc) {
    ChoiObject o = phase_oracle_choi(n, x, T);
    SpaceList target;
    for (const auto &s : sc.slot_spaces()) {
        if (s.name != "P") {
            target.push_back(s);
        }
    }
    return conic::svec(o.permuted(target).data().real());
}

void check_size(const ProcessScenario &sc) {
    if (total_dim(sc.slot_spaces()) > kDimCap) {
        throw SizeCap("contracted process dimension " + std::to_string(total_dim(sc.slot_spaces())) +
                      " exceeds the cap of " + std::to_string(kDimCap));
    }
}

}  // namespace

ValidityReport Superinstrument::validate(double tol) const {
    for (const ChoiObject *part : {&w0, &w1}) {
        Eigen::SelfAdjointEigenSolver<Matrix> es((part->data() + part->data().adjoint()) / 2.0,
                                                 Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol) {
            ValidityReport r;
            r.min_eigenvalue = es.eigenvalues().minCoeff();
            r.violated = part == &w0 ? "positivity of the 0-outcome part" : "positivity of the 1-outcome part";
            return r;
        }
    }
    ChoiObject sum(ChoiKind::matrix, w0.spaces(), w0.data() + w1.permuted(w0.spaces()).data());
    return is_valid_process(sum, cls, scenario, tol);
}

double DualSolution::bound() const {
    return lambdas.sum() - wbar.data().trace().real() / static_cast<double>(scenario.d_in_slots());
}

QueryProblem build_primal(const BooleanFunction &f, int T, SupermapClass cls) {
    QueryProblem qp;
    qp.f = f;
    qp.T = T;
    qp.cls = cls;
    qp.scenario = ProcessScenario::query(f.n(), T);
    const ProcessScenario &sc = qp.scenario;
    check_size(sc);
    SpaceList spaces = sc.slot_spaces();
    int64_t D = total_dim(spaces);
    qp.block_dim = D;
    int64_t sv = D * (D + 1) / 2;
    int64_t w0_off = 1, w1_off = 1 + sv;

    conic::Problem &p = qp.conic;
    p.num_vars = 1 + 2 * sv;
    p.c.assign(p.num_vars, 0.0);
    p.c[0] = 1.0;
    p.var_blocks = {{"eps", 0, 1, 0}, {"W0", w0_off, sv, D}, {"W1", w1_off, sv, D}};

    int64_t row = 0;
    // Normalization: Tr(W0 + W1) = prod d_O.
    for (int64_t d = 0; d < D; d++) {
        p.entries.push_back({row, w0_off + conic::svec_index(d, d), 1.0});
        p.entries.push_back({row, w1_off + conic::svec_index(d, d), 1.0});
    }
    p.b.push_back(static_cast<double>(sc.d_out()));
    row++;

    // Validity subspace, one homogeneous row per condition and reduced entry,
    // applied to W0 + W1.
    std::vector<int64_t> digits_r, digits_c;
    SvecRow acc;
    for (const auto &cond : subspace_conditions(cls, sc, false)) {
        CondPre pre = precompute(spaces, cond);
        int64_t dr = total_dim(pre.reduced);
        for (int64_t r = 0; r < dr; r++) {
            decompose_index(r, pre.reduced, digits_r);
            for (int64_t c = r; c < dr; c++) {
                decompose_index(c, pre.reduced, digits_c);
                acc.clear();
                reduced_entry_coeffs(pre, digits_r, digits_c, 1.0,
                                     [&](int64_t pp, int64_t qq, double v) { acc.add(pp, qq, v); });
                for (const auto &[idx, v] : acc.terms) {
                    if (v != 0) {
                        p.entries.push_back({row, w0_off + idx, v});
                        p.entries.push_back({row, w1_off + idx, v});
                    }
                }
                p.b.push_back(0.0);
                row++;
            }
        }
    }
    qp.zero_rows = row;
    p.cones.push_back({conic::ConeType::zero, row});

    // Per-input success constraints Tr[W^[f(x)] O_x] >= 1 - eps, then eps >= 0.
    qp.ineq_row_start = row;
    uint64_t inputs = uint64_t{1} << f.n();
    for (uint64_t x = 0; x < inputs; x++) {
        Eigen::VectorXd o = oracle_svec(f.n(), x, T, sc);
        int64_t off = f.value(x) == 0 ? w0_off : w1_off;
        p.entries.push_back({row, 0, -1.0});
        for (int64_t i = 0; i < o.size(); i++) {
            if (o(i) != 0) {
                p.entries.push_back({row, off + i, -o(i)});
            }
        }
        p.b.push_back(-1.0);
        row++;
    }
    p.entries.push_back({row, 0, -1.0});
    p.b.push_back(0.0);
    row++;
    p.cones.push_back({conic::ConeType::nonneg, static_cast<int64_t>(inputs) + 1});

    for (int64_t off : {w0_off, w1_off}) {
        p.cones.push_back({conic::ConeType::psd, D});
        for (int64_t i = 0; i < sv; i++) {
            p.entries.push_back({row, off + i, -1.0});
            p.b.push_back(0.0);
            row++;
        }
    }
    p.validate();
    return qp;
}

QueryProblem build_dual(const BooleanFunction &f, int T, SupermapClass cls) {
    QueryProblem qp;
    qp.f = f;
    qp.T = T;
    qp.cls = cls;
    qp.scenario = ProcessScenario::query(f.n(), T);
    const ProcessScenario &sc = qp.scenario;
    check_size(sc);
    SpaceList spaces = sc.slot_spaces();
    int64_t D = total_dim(spaces);
    qp.block_dim = D;
    int64_t sv = D * (D + 1) / 2;
    int64_t inputs = int64_t{1} << f.n();
    int64_t s_off = inputs;

    conic::Problem &p = qp.conic;
    p.num_vars = inputs + sv;
    p.c.assign(p.num_vars, 0.0);
    for (int64_t x = 0; x < inputs; x++) {
        p.c[x] = -1.0;
    }
    for (int64_t d = 0; d < D; d++) {
        p.c[s_off + conic::svec_index(d, d)] = 1.0 / static_cast<double>(sc.d_in_slots());
    }
    p.var_blocks = {{"lambda", 0, inputs, 0}, {"Wbar", s_off, sv, D}};

    // Dual cone membership: the projection of wbar onto the validity subspace
    // must equal Tr(wbar)/D times the identity.
    std::vector<CondPre> pres;
    for (const auto &cond : subspace_conditions(cls, sc, false)) {
        pres.push_back(precompute(spaces, cond));
    }
    int64_t row = 0;
    std::vector<int64_t> full_r, full_c, digits_r, digits_c;
    SvecRow acc;
    for (int64_t r = 0; r < D; r++) {
        decompose_index(r, spaces, full_r);
        for (int64_t c = r; c < D; c++) {
            decompose_index(c, spaces, full_c);
            acc.clear();
            acc.add(r, c, 1.0);
            for (const auto &pre : pres) {
                bool match = true;
                for (int pos : pre.rep_pos) {
                    if (full_r[pos] != full_c[pos]) {
                        match = false;
                        break;
                    }
                }
                if (!match) {
                    continue;
                }
                digits_r.clear();
                digits_c.clear();
                size_t ri = 0;
                for (size_t i = 0; i < spaces.size(); i++) {
                    bool replaced = false;
                    for (int pos : pre.rep_pos) {
                        if (static_cast<size_t>(pos) == i) {
                            replaced = true;
                            break;
                        }
                    }
                    if (!replaced) {
                        digits_r.push_back(full_r[i]);
                        digits_c.push_back(full_c[i]);
                        ri++;
                    }
                }
                reduced_entry_coeffs(pre, digits_r, digits_c, -pre.inv_d_repl,
                                     [&](int64_t pp, int64_t qq, double v) { acc.add(pp, qq, v); });
            }
            if (r == c) {
                for (int64_t d = 0; d < D; d++) {
                    acc.add(d, d, -1.0 / static_cast<double>(D));
                }
            }
            for (const auto &[idx, v] : acc.terms) {
                if (v != 0) {
                    p.entries.push_back({row, s_off + idx, v});
                }
            }
            p.b.push_back(0.0);
            row++;
        }
    }
    qp.zero_rows = row;
    p.cones.push_back({conic::ConeType::zero, row});

    // sum(lambda) <= 1, lambda >= 0.
    qp.ineq_row_start = row;
    for (int64_t x = 0; x < inputs; x++) {
        p.entries.push_back({row, x, 1.0});
    }
    p.b.push_back(1.0);
    row++;
    for (int64_t x = 0; x < inputs; x++) {
        p.entries.push_back({row, x, -1.0});
        p.b.push_back(0.0);
        row++;
    }
    p.cones.push_back({conic::ConeType::nonneg, inputs + 1});

    // wbar - sum_{x: f(x)=i} lambda_x O_x >= 0 for both outcomes.
    for (int outcome = 0; outcome < 2; outcome++) {
        p.cones.push_back({conic::ConeType::psd, D});
        int64_t base = row;
        for (int64_t i = 0; i < sv; i++) {
            p.entries.push_back({row, s_off + i, -1.0});
            p.b.push_back(0.0);
            row++;
        }
        for (int64_t x = 0; x < inputs; x++) {
            if (f.value(static_cast<uint64_t>(x)) != outcome) {
                continue;
            }
            Eigen::VectorXd o = oracle_svec(f.n(), static_cast<uint64_t>(x), T, sc);
            for (int64_t i = 0; i < o.size(); i++) {
                if (o(i) != 0) {
                    p.entries.push_back({base + i, x, o(i)});
                }
            }
        }
    }
    p.validate();
    return qp;
}

Superinstrument superinstrument_from_solution(const QueryProblem &qp, const Eigen::VectorXd &x) {
    int64_t D = qp.block_dim;
    int64_t sv = D * (D + 1) / 2;
    Superinstrument si;
    si.scenario = qp.scenario;
    si.cls = qp.cls;
    SpaceList spaces = qp.scenario.slot_spaces();
    Eigen::MatrixXd w0 = conic::unsvec(x.segment(1, sv), D);
    Eigen::MatrixXd w1 = conic::unsvec(x.segment(1 + sv, sv), D);
    si.w0 = ChoiObject(ChoiKind::matrix, spaces, w0.cast<Complex>());
    si.w1 = ChoiObject(ChoiKind::matrix, spaces, w1.cast<Complex>());
    return si;
}

DualSolution dual_from_primal_solution(const QueryProblem &qp, const Eigen::VectorXd &y) {
    int64_t D = qp.block_dim;
    int64_t sv = D * (D + 1) / 2;
    int64_t w0_off = 1;
    DualSolution d;
    d.scenario = qp.scenario;
    d.cls = qp.cls;
    int64_t inputs = int64_t{1} << qp.f.n();
    d.lambdas.resize(inputs);
    for (int64_t x = 0; x < inputs; x++) {
        d.lambdas(x) = y(qp.ineq_row_start + x);
    }
    // wbar is the zero-cone part of A^T y read through the W0 columns; the
    // same operator appears in both psd blocks' dual feasibility.
    Eigen::VectorXd s = Eigen::VectorXd::Zero(sv);
    for (const auto &e : qp.conic.entries) {
        if (e.row < qp.zero_rows && e.col >= w0_off && e.col < w0_off + sv) {
            s(e.col - w0_off) += e.value * y(e.row);
        }
    }
    d.wbar = ChoiObject(ChoiKind::matrix, qp.scenario.slot_spaces(), conic::unsvec(s, D).cast<Complex>());
    return d;
}

MinErrorResult min_error(const BooleanFunction &f, int T, SupermapClass cls,
                         const conic::SolverConfig &cfg) {
    QueryProblem qp = build_primal(f, T, cls);
    conic::Solution sol = conic::solve(qp.conic, cfg);
    if (sol.status == conic::SolveStatus::primal_infeasible ||
        sol.status == conic::SolveStatus::dual_infeasible) {
        throw SolverFailure("query program reported " + conic::to_string(sol.status));
    }
    MinErrorResult r;
    r.id = f.id();
    r.n = f.n();
    r.T = T;
    r.cls = cls;
    r.status = sol.status;
    r.iterations = sol.iterations;
    r.seconds = sol.seconds;
    r.eps_primal = sol.x(0);
    r.primal = superinstrument_from_solution(qp, sol.x);
    r.dual = dual_from_primal_solution(qp, sol.y);
    r.eps_dual = r.dual.bound();
    r.gap = std::abs(r.eps_primal - r.eps_dual);
    return r;
}

std::string MinErrorResult::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["n"] = n;
    j["T"] = T;
    j["class"] = to_string(cls);
    j["eps_primal"] = eps_primal;
    j["eps_dual"] = eps_dual;
    j["gap"] = gap;
    j["iters"] = iterations;
    j["wall_time"] = seconds;
    j["status"] = conic::to_string(status);
    return j.dump();
}

}  // namespace smq
