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

#include "smq/qc.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "smq/conic/solver.hpp"

namespace smq {

namespace {

std::string alpha_name(int t) {
    return "alpha" + std::to_string(t);
}

std::string key_str(uint32_t k_mask, int k, int next) {
    std::ostringstream out;
    out << "(mask=" << k_mask << ", k=" << k << ", next=" << next << ")";
    return out.str();
}

// Choi vector of one component. Components are not individually isometric
// (only the stacked families are), so no isometry check here.
ChoiObject component_vector(const Matrix &op, const SpaceList &in_spaces, const SpaceList &out_spaces) {
    int64_t d_in = total_dim(in_spaces);
    int64_t d_out = total_dim(out_spaces);
    if (op.cols() != d_in || op.rows() != d_out) {
        throw DimensionMismatch("component shape does not match declared spaces");
    }
    SpaceList spaces = in_spaces;
    spaces.insert(spaces.end(), out_spaces.begin(), out_spaces.end());
    Matrix v(d_in * d_out, 1);
    for (int64_t i = 0; i < d_in; i++) {
        for (int64_t o = 0; o < d_out; o++) {
            v(i * d_out + o, 0) = op(o, i);
        }
    }
    return ChoiObject(ChoiKind::vector, std::move(spaces), std::move(v));
}

Matrix random_isometry(int64_t rows, int64_t cols, std::mt19937_64 &rng) {
    if (rows < cols) {
        throw DimensionMismatch("isometry needs rows >= cols");
    }
    std::normal_distribution<double> gauss;
    Matrix g(rows, cols);
    for (int64_t i = 0; i < rows; i++) {
        for (int64_t j = 0; j < cols; j++) {
            g(i, j) = Complex(gauss(rng), gauss(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    // Fix the column phases so the distribution is invariant.
    for (int64_t j = 0; j < cols; j++) {
        Complex d = r(j, j);
        q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1);
    }
    return q;
}

}  // namespace

Matrix random_unitary(int64_t dim, std::mt19937_64 &rng) {
    return random_isometry(dim, dim, rng);
}

const Matrix &QcImplementation::component(uint32_t k_mask, int k, int next) const {
    auto it = components.find({k_mask, k, next});
    if (it == components.end()) {
        throw UnknownSpace("missing order-controlled component " + key_str(k_mask, k, next));
    }
    return it->second;
}

void QcImplementation::check(double tol) const {
    const ProcessScenario &sc = scenario;
    int T = sc.T;
    if (static_cast<int>(d_alpha.size()) != T) {
        throw DimensionMismatch("need one internal ancilla dimension per step");
    }
    if (d_alpha_F < 1) {
        throw DimensionMismatch("final ancilla dimension must be positive");
    }

    // First step: route from P to one of the T slots.
    {
        Matrix gram = Matrix::Zero(sc.d_P, sc.d_P);
        for (int k = 1; k <= T; k++) {
            const Matrix &m = component(0, 0, k);
            if (m.rows() != sc.d_I[k - 1] * d_alpha[0] || m.cols() != sc.d_P) {
                throw DimensionMismatch("first-step component to slot " + std::to_string(k) +
                                        " has wrong dimensions");
            }
            gram += m.adjoint() * m;
        }
        if ((gram - Matrix::Identity(sc.d_P, sc.d_P)).cwiseAbs().maxCoeff() > tol) {
            throw NonIsometry("first-step components do not stack to an isometry");
        }
    }

    // The controlled operation between steps t and t+1 is an isometry exactly
    // when, for each set of slots done after step t, the family of components
    // departing the histories ending in that set has orthonormal column
    // blocks jointly across the possible continuations. In particular
    // components from distinct histories must have orthogonal ranges.
    uint32_t full = (uint32_t{1} << T) - 1;
    for (int t = 1; t <= T; t++) {
        for (uint32_t done = 0; done <= full; done++) {
            if (std::popcount(done) != t) {
                continue;
            }
            // Departing pairs (prior set, last slot) merging into `done`.
            std::vector<std::pair<uint32_t, int>> pairs;
            for (int k = 1; k <= T; k++) {
                if ((done >> (k - 1)) & 1) {
                    pairs.emplace_back(done & ~(uint32_t{1} << (k - 1)), k);
                }
            }
            std::vector<int> nexts;
            if (done == full) {
                nexts.push_back(0);
            } else {
                for (int next = 1; next <= T; next++) {
                    if (!((done >> (next - 1)) & 1)) {
                        nexts.push_back(next);
                    }
                }
            }
            for (size_t a = 0; a < pairs.size(); a++) {
                for (size_t b = a; b < pairs.size(); b++) {
                    int64_t ca = sc.d_O[pairs[a].second - 1] * d_alpha[t - 1];
                    int64_t cb = sc.d_O[pairs[b].second - 1] * d_alpha[t - 1];
                    Matrix gram = Matrix::Zero(ca, cb);
                    for (int next : nexts) {
                        const Matrix &ma = component(pairs[a].first, pairs[a].second, next);
                        const Matrix &mb = component(pairs[b].first, pairs[b].second, next);
                        int64_t want_rows =
                            next == 0 ? sc.d_F * d_alpha_F : sc.d_I[next - 1] * d_alpha[t];
                        if (ma.rows() != want_rows || ma.cols() != ca || mb.rows() != want_rows ||
                            mb.cols() != cb) {
                            throw DimensionMismatch("component " +
                                                    key_str(pairs[a].first, pairs[a].second, next) +
                                                    " has wrong dimensions");
                        }
                        gram += ma.adjoint() * mb;
                    }
                    Matrix want = Matrix::Zero(ca, cb);
                    if (a == b) {
                        want = Matrix::Identity(ca, cb);
                    }
                    if ((gram - want).cwiseAbs().maxCoeff() > tol) {
                        throw NonIsometry("components departing " + key_str(pairs[a].first, pairs[a].second, -1) +
                                          " and " + key_str(pairs[b].first, pairs[b].second, -1) +
                                          " violate the controlled isometry condition");
                    }
                }
            }
        }
    }
}

ChoiObject qc_order_vector(const QcImplementation &impl, const std::vector<int> &order) {
    const ProcessScenario &sc = impl.scenario;
    int T = sc.T;
    if (static_cast<int>(order.size()) != T) {
        throw DimensionMismatch("order must list all " + std::to_string(T) + " slots");
    }
    auto a = [&](int t) {
        return SpaceLabel{alpha_name(t), impl.d_alpha[t - 1]};
    };
    int k1 = order[0];
    ChoiObject v = component_vector(impl.component(0, 0, k1), SpaceList{{"P", sc.d_P}},
                                    {{sc.ai(k1), sc.d_I[k1 - 1]}, a(1)});
    uint32_t k_mask = 0;
    for (int t = 1; t < T; t++) {
        int k = order[t - 1];
        int next = order[t];
        ChoiObject vt = component_vector(impl.component(k_mask, k, next),
                                         SpaceList{{sc.ao(k), sc.d_O[k - 1]}, a(t)},
                                         {{sc.ai(next), sc.d_I[next - 1]}, a(t + 1)});
        v = link_product(v, vt);
        k_mask |= uint32_t{1} << (k - 1);
    }
    int kT = order[T - 1];
    ChoiObject vf = component_vector(impl.component(k_mask, kT, 0),
                                     SpaceList{{sc.ao(kT), sc.d_O[kT - 1]}, a(T)},
                                     {{"F", sc.d_F}, {"alphaF", impl.d_alpha_F}});
    v = link_product(v, vf);
    SpaceList want = sc.full_spaces();
    want.push_back({"alphaF", impl.d_alpha_F});
    return v.permuted(want);
}

namespace {

ChoiObject sum_orders_to_process(const QcImplementation &impl, bool relabel_sequential) {
    const ProcessScenario &sc = impl.scenario;
    int T = sc.T;
    if (relabel_sequential) {
        for (int k = 2; k <= T; k++) {
            if (sc.d_I[k - 1] != sc.d_I[0] || sc.d_O[k - 1] != sc.d_O[0]) {
                throw DimensionMismatch("sequential relabeling needs uniform slot dimensions");
            }
        }
    }
    SpaceList want = sc.full_spaces();
    want.push_back({"alphaF", impl.d_alpha_F});
    std::vector<int> order(T);
    std::iota(order.begin(), order.end(), 1);
    Matrix acc = Matrix::Zero(total_dim(want), 1);
    do {
        ChoiObject v = qc_order_vector(impl, order);
        if (relabel_sequential) {
            // Send slot order[t-1] to position t; go through fresh temporary
            // names so swaps cannot collide mid-rename.
            std::vector<std::pair<std::string, std::string>> phase1, phase2;
            for (int t = 1; t <= T; t++) {
                int k = order[t - 1];
                phase1.emplace_back(sc.ai(k), "#I" + std::to_string(t));
                phase1.emplace_back(sc.ao(k), "#O" + std::to_string(t));
                phase2.emplace_back("#I" + std::to_string(t), sc.ai(t));
                phase2.emplace_back("#O" + std::to_string(t), sc.ao(t));
            }
            v = v.renamed(phase1).renamed(phase2).permuted(want);
        }
        acc += v.data();
    } while (std::next_permutation(order.begin(), order.end()));
    // Tr_alphaF |acc><acc| without materializing the outer product on the
    // alphaF-extended space: alphaF is the last (fastest) factor, so the
    // reshaped D x d_alphaF slice matrix m gives the traced process as m m^dag.
    int64_t d = total_dim(sc.full_spaces());
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        acc.data(), d, impl.d_alpha_F);
    return ChoiObject(ChoiKind::matrix, sc.full_spaces(), m * m.adjoint());
}

}  // namespace

ChoiObject build_qc_process(const QcImplementation &impl) {
    return sum_orders_to_process(impl, false);
}

ChoiObject qc_to_fo(const QcImplementation &impl) {
    return sum_orders_to_process(impl, true);
}

QcImplementation random_qc_implementation(const ProcessScenario &sc, int64_t d_alpha, std::mt19937_64 &rng) {
    QcImplementation impl;
    impl.scenario = sc;
    int T = sc.T;
    uint32_t full = (uint32_t{1} << T) - 1;

    // The controlled isometry condition requires the outputs departing a
    // given done-set to be at least as large as the merged inputs, so the
    // ancilla has to grow along the circuit; d_alpha sets the first step.
    impl.d_alpha.assign(T, 1);
    impl.d_alpha[0] = d_alpha;
    for (int t = 1; t < T; t++) {
        int64_t need = 1;
        for (uint32_t done = 0; done <= full; done++) {
            if (std::popcount(done) != t) {
                continue;
            }
            int64_t in = 0, out_slots = 0;
            for (int k = 1; k <= T; k++) {
                if ((done >> (k - 1)) & 1) {
                    in += sc.d_O[k - 1] * impl.d_alpha[t - 1];
                } else {
                    out_slots += sc.d_I[k - 1];
                }
            }
            need = std::max(need, (in + out_slots - 1) / out_slots);
        }
        impl.d_alpha[t] = need;
    }
    {
        int64_t in = 0;
        for (int k = 1; k <= T; k++) {
            in += sc.d_O[k - 1] * impl.d_alpha[T - 1];
        }
        impl.d_alpha_F = (in + sc.d_F - 1) / sc.d_F;
    }

    {
        std::vector<std::pair<int, int64_t>> parts;
        int64_t rows = 0;
        for (int k = 1; k <= T; k++) {
            parts.emplace_back(k, sc.d_I[k - 1] * impl.d_alpha[0]);
            rows += parts.back().second;
        }
        Matrix iso = random_isometry(rows, sc.d_P, rng);
        int64_t off = 0;
        for (const auto &[k, r] : parts) {
            impl.components[{0, 0, k}] = iso.middleRows(off, r);
            off += r;
        }
    }

    // One joint isometry per (step, done-set), carved into blocks: columns by
    // departing history, rows by continuation.
    for (int t = 1; t <= T; t++) {
        for (uint32_t done = 0; done <= full; done++) {
            if (std::popcount(done) != t) {
                continue;
            }
            std::vector<std::pair<uint32_t, int>> pairs;
            int64_t cols = 0;
            std::vector<int64_t> col_w;
            for (int k = 1; k <= T; k++) {
                if ((done >> (k - 1)) & 1) {
                    pairs.emplace_back(done & ~(uint32_t{1} << (k - 1)), k);
                    col_w.push_back(sc.d_O[k - 1] * impl.d_alpha[t - 1]);
                    cols += col_w.back();
                }
            }
            std::vector<std::pair<int, int64_t>> row_parts;
            int64_t rows = 0;
            if (done == full) {
                row_parts.emplace_back(0, sc.d_F * impl.d_alpha_F);
                rows = row_parts.back().second;
            } else {
                for (int next = 1; next <= T; next++) {
                    if (!((done >> (next - 1)) & 1)) {
                        row_parts.emplace_back(next, sc.d_I[next - 1] * impl.d_alpha[t]);
                        rows += row_parts.back().second;
                    }
                }
            }
            Matrix iso = random_isometry(rows, cols, rng);
            int64_t coff = 0;
            for (size_t p = 0; p < pairs.size(); p++) {
                int64_t roff = 0;
                for (const auto &[next, r] : row_parts) {
                    impl.components[{pairs[p].first, pairs[p].second, next}] =
                        iso.block(roff, coff, r, col_w[p]);
                    roff += r;
                }
                coff += col_w[p];
            }
        }
    }
    impl.check();
    return impl;
}

QcImplementation switch_implementation() {
    QcImplementation impl;
    ProcessScenario sc;
    sc.T = 2;
    sc.d_P = 2;
    sc.d_F = 4;
    sc.d_I = {2, 2};
    sc.d_O = {2, 2};
    impl.scenario = sc;
    impl.d_alpha = {1, 1};
    impl.d_alpha_F = 1;
    double r = 1.0 / std::sqrt(2.0);
    impl.components[{0, 0, 1}] = r * Matrix::Identity(2, 2);
    impl.components[{0, 0, 2}] = r * Matrix::Identity(2, 2);
    impl.components[{0, 1, 2}] = Matrix::Identity(2, 2);
    impl.components[{0, 2, 1}] = Matrix::Identity(2, 2);
    // Final step tags the order on the control half of F = target (x) control.
    Matrix f0 = Matrix::Zero(4, 2), f1 = Matrix::Zero(4, 2);
    for (int64_t t = 0; t < 2; t++) {
        f0(2 * t + 0, t) = 1;  // order (1, 2)
        f1(2 * t + 1, t) = 1;  // order (2, 1)
    }
    impl.components[{1, 2, 0}] = f0;
    impl.components[{2, 1, 0}] = f1;
    impl.check();
    return impl;
}

ChoiObject supermap_action(const ChoiObject &w, const std::vector<Matrix> &unitaries,
                           const ProcessScenario &sc) {
    if (static_cast<int>(unitaries.size()) != sc.T) {
        throw DimensionMismatch("need one unitary per slot");
    }
    ChoiObject acc = w;
    for (int k = 1; k <= sc.T; k++) {
        acc = link_product(acc, choi_of_isometry_channel(unitaries[k - 1], {sc.ai(k), sc.d_I[k - 1]},
                                                         {{sc.ao(k), sc.d_O[k - 1]}}));
    }
    return acc.permuted({{"P", sc.d_P}, {"F", sc.d_F}});
}

namespace {

// Feasibility program data for the order-controlled class: one Hermitian
// matrix variable per (applied-set, active-slot) pair, encoded as real
// symmetric + real antisymmetric parts.
struct QcBlock {
    uint32_t k_mask = 0;
    int k = 0;
    SpaceList spaces;  // [P, A_j^I A_j^O for j in K ascending, A_k^I]
    int64_t m = 0;
    int64_t x_off = 0;  // m(m+1)/2 entries, upper triangle including diagonal
    int64_t y_off = 0;  // m(m-1)/2 entries, strict upper triangle
};

struct QcTerm {
    const QcBlock *blk = nullptr;
    double sign = 1;
    bool traced = false;       // sum over the trailing A_k^I factor
    int id_pos = -1;           // target position pinned to an identity factor
    std::vector<int> pos;      // target position of each (untraced) block space
};

int64_t x_var(const QcBlock &b, int64_t p, int64_t q) {
    return b.x_off + q * (q + 1) / 2 + p;  // p <= q
}

int64_t y_var(const QcBlock &b, int64_t p, int64_t q) {
    return b.y_off + q * (q - 1) / 2 + p;  // p < q
}

QcTerm make_term(const QcBlock &blk, double sign, bool traced, int id_pos, const SpaceList &target) {
    QcTerm t;
    t.blk = &blk;
    t.sign = sign;
    t.traced = traced;
    t.id_pos = id_pos;
    size_t count = blk.spaces.size() - (traced ? 1 : 0);
    for (size_t i = 0; i < count; i++) {
        t.pos.push_back(static_cast<int>(space_index(target, blk.spaces[i].name)));
    }
    return t;
}

}  // namespace

ValidityReport is_valid_qc_process(const ChoiObject &w, const ProcessScenario &sc, double tol) {
    // Order-controlled processes are valid order-indefinite processes, so the
    // cheap linear checks come first and give the standard residuals.
    ValidityReport r = is_valid_process(w, SupermapClass::Gen, sc, tol);
    if (!r.valid) {
        return r;
    }
    r.valid = false;

    int T = sc.T;
    uint32_t full = (uint32_t{1} << T) - 1;
    ChoiObject trf = has_space(w.spaces(), "F") ? partial_trace(w, {"F"}) : w;
    trf = trf.permuted(sc.slot_spaces());

    std::map<std::pair<uint32_t, int>, QcBlock> blocks;
    int64_t nvars = 0;
    for (uint32_t k_mask = 0; k_mask < full; k_mask++) {
        for (int k = 1; k <= T; k++) {
            if ((k_mask >> (k - 1)) & 1) {
                continue;
            }
            QcBlock b;
            b.k_mask = k_mask;
            b.k = k;
            b.spaces.push_back({"P", sc.d_P});
            for (int j = 1; j <= T; j++) {
                if ((k_mask >> (j - 1)) & 1) {
                    b.spaces.push_back({sc.ai(j), sc.d_I[j - 1]});
                    b.spaces.push_back({sc.ao(j), sc.d_O[j - 1]});
                }
            }
            b.spaces.push_back({sc.ai(k), sc.d_I[k - 1]});
            b.m = total_dim(b.spaces);
            b.x_off = nvars;
            nvars += b.m * (b.m + 1) / 2;
            b.y_off = nvars;
            nvars += b.m * (b.m - 1) / 2;
            blocks[{k_mask, k}] = std::move(b);
        }
    }
    int64_t t_var = nvars;
    nvars += 1;
    if (nvars > 200000) {
        throw SizeCap("order-control feasibility program has " + std::to_string(nvars) + " variables");
    }

    conic::Problem prob;
    prob.num_vars = nvars;
    prob.c.assign(nvars, 0.0);
    prob.c[t_var] = 1.0;

    // One Hermitian equality per layer of the chain.
    struct Constraint {
        SpaceList target;
        std::vector<QcTerm> terms;
        Matrix rhs;
    };
    std::vector<Constraint> constraints;
    {
        Constraint c0;
        c0.target = {{"P", sc.d_P}};
        for (int k = 1; k <= T; k++) {
            c0.terms.push_back(make_term(blocks.at({0, k}), 1.0, true, -1, c0.target));
        }
        c0.rhs = Matrix::Identity(sc.d_P, sc.d_P);
        constraints.push_back(std::move(c0));
    }
    for (uint32_t k_mask = 1; k_mask < full; k_mask++) {
        Constraint c;
        c.target.push_back({"P", sc.d_P});
        for (int j = 1; j <= T; j++) {
            if ((k_mask >> (j - 1)) & 1) {
                c.target.push_back({sc.ai(j), sc.d_I[j - 1]});
                c.target.push_back({sc.ao(j), sc.d_O[j - 1]});
            }
        }
        for (int k = 1; k <= T; k++) {
            bool in_k = (k_mask >> (k - 1)) & 1;
            if (!in_k) {
                c.terms.push_back(make_term(blocks.at({k_mask, k}), 1.0, true, -1, c.target));
            } else {
                int id_pos = static_cast<int>(space_index(c.target, sc.ao(k)));
                c.terms.push_back(
                    make_term(blocks.at({k_mask & ~(uint32_t{1} << (k - 1)), k}), -1.0, false, id_pos, c.target));
            }
        }
        c.rhs = Matrix::Zero(total_dim(c.target), total_dim(c.target));
        constraints.push_back(std::move(c));
    }
    {
        Constraint cf;
        cf.target = sc.slot_spaces();
        for (int k = 1; k <= T; k++) {
            int id_pos = static_cast<int>(space_index(cf.target, sc.ao(k)));
            cf.terms.push_back(
                make_term(blocks.at({full & ~(uint32_t{1} << (k - 1)), k}), 1.0, false, id_pos, cf.target));
        }
        cf.rhs = trf.data();
        constraints.push_back(std::move(cf));
    }

    int64_t row = 0;
    std::vector<int64_t> digits_r, digits_c;
    std::map<int64_t, double> xrow, yrow;
    for (const auto &c : constraints) {
        int64_t d = total_dim(c.target);
        std::vector<std::vector<int64_t>> strides;
        std::vector<int> id_dims;
        for (const auto &term : c.terms) {
            strides.push_back(strides_of(term.blk->spaces));
            (void)term;
            id_dims.push_back(0);
        }
        for (int64_t rr = 0; rr < d; rr++) {
            decompose_index(rr, c.target, digits_r);
            for (int64_t cc = rr; cc < d; cc++) {
                decompose_index(cc, c.target, digits_c);
                xrow.clear();
                yrow.clear();
                auto add_entry = [&](const QcBlock &blk, int64_t p, int64_t q, double coef) {
                    if (p <= q) {
                        xrow[x_var(blk, p, q)] += coef;
                    } else {
                        xrow[x_var(blk, q, p)] += coef;
                    }
                    if (rr != cc) {
                        if (p < q) {
                            yrow[y_var(blk, p, q)] += coef;
                        } else if (p > q) {
                            yrow[y_var(blk, q, p)] -= coef;
                        }
                    }
                };
                for (size_t ti = 0; ti < c.terms.size(); ti++) {
                    const QcTerm &term = c.terms[ti];
                    if (term.id_pos >= 0 && digits_r[term.id_pos] != digits_c[term.id_pos]) {
                        continue;
                    }
                    const auto &st = strides[ti];
                    int64_t p = 0, q = 0;
                    for (size_t i = 0; i < term.pos.size(); i++) {
                        p += digits_r[term.pos[i]] * st[i];
                        q += digits_c[term.pos[i]] * st[i];
                    }
                    if (term.traced) {
                        size_t last = term.blk->spaces.size() - 1;
                        int64_t dt = term.blk->spaces[last].dim;
                        for (int64_t a = 0; a < dt; a++) {
                            add_entry(*term.blk, p + a * st[last], q + a * st[last], term.sign);
                        }
                    } else {
                        add_entry(*term.blk, p, q, term.sign);
                    }
                }
                Complex rhs = c.rhs(rr, cc);
                for (const auto &[var, coef] : xrow) {
                    if (coef != 0) {
                        prob.entries.push_back({row, var, coef});
                    }
                }
                prob.b.push_back(rhs.real());
                row++;
                if (rr != cc) {
                    for (const auto &[var, coef] : yrow) {
                        if (coef != 0) {
                            prob.entries.push_back({row, var, coef});
                        }
                    }
                    prob.b.push_back(rhs.imag());
                    row++;
                }
            }
        }
    }
    prob.cones.push_back({conic::ConeType::zero, row});

    // Positivity with a uniform shift: each block, embedded as the real
    // symmetric [[X, -Y], [Y, X]], plus t on the diagonal, must be psd.
    for (const auto &[key, blk] : blocks) {
        (void)key;
        int64_t m = blk.m;
        prob.cones.push_back({conic::ConeType::psd, 2 * m});
        for (int64_t q = 0; q < 2 * m; q++) {
            for (int64_t p = 0; p <= q; p++) {
                double scale = p == q ? 1.0 : std::sqrt(2.0);
                if (q < m) {
                    prob.entries.push_back({row, x_var(blk, p, q), -scale});
                } else if (p >= m) {
                    prob.entries.push_back({row, x_var(blk, p - m, q - m), -scale});
                } else {
                    int64_t j = q - m;
                    if (p < j) {
                        prob.entries.push_back({row, y_var(blk, p, j), scale});
                    } else if (p > j) {
                        prob.entries.push_back({row, y_var(blk, j, p), -scale});
                    }
                }
                if (p == q) {
                    prob.entries.push_back({row, t_var, -1.0});
                }
                prob.b.push_back(0.0);
                row++;
            }
        }
    }
    prob.validate();

    conic::SolverConfig cfg;
    cfg.tol = std::max(tol * 1e-2, 1e-8);
    cfg.max_iters = 100000;
    conic::Solution sol = conic::solve(prob, cfg);
    double t_star = sol.x(t_var);
    r.min_eigenvalue = -t_star;
    if (sol.status == conic::SolveStatus::primal_infeasible ||
        sol.status == conic::SolveStatus::dual_infeasible) {
        r.violated = "order-control decomposition (program infeasible)";
    } else if (sol.status == conic::SolveStatus::max_iterations) {
        r.violated = "order-control decomposition (solver did not converge)";
    } else if (t_star > tol) {
        r.violated = "order-control decomposition";
    } else {
        r.valid = true;
    }
    return r;
}

}  // namespace smq
