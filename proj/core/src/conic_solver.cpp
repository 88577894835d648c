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

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <lapacke.h>

#include "smq/conic/solver.hpp"

namespace smq::conic {

namespace {

struct Csr {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<int64_t> ptr;
    std::vector<int64_t> idx;
    std::vector<double> val;

    // y = A x
    void multiply(const Eigen::VectorXd &x, Eigen::VectorXd &y) const {
        for (int64_t r = 0; r < rows; r++) {
            double acc = 0;
            for (int64_t k = ptr[r]; k < ptr[r + 1]; k++) {
                acc += val[k] * x[idx[k]];
            }
            y[r] = acc;
        }
    }
};

Csr build_csr(int64_t rows, int64_t cols, const std::vector<Entry> &entries, bool transpose) {
    Csr a;
    a.rows = transpose ? cols : rows;
    a.cols = transpose ? rows : cols;
    a.ptr.assign(a.rows + 1, 0);
    for (const auto &e : entries) {
        a.ptr[(transpose ? e.col : e.row) + 1]++;
    }
    for (int64_t r = 0; r < a.rows; r++) {
        a.ptr[r + 1] += a.ptr[r];
    }
    a.idx.resize(entries.size());
    a.val.resize(entries.size());
    std::vector<int64_t> cursor(a.ptr.begin(), a.ptr.end() - 1);
    for (const auto &e : entries) {
        int64_t r = transpose ? e.col : e.row;
        int64_t k = cursor[r]++;
        a.idx[k] = transpose ? e.row : e.col;
        a.val[k] = e.value;
    }
    return a;
}

// Symmetric eigendecomposition, ascending eigenvalues. `m` is overwritten
// with the eigenvectors (columns).
void eigh(Eigen::MatrixXd &m, Eigen::VectorXd &evals) {
    int n = static_cast<int>(m.rows());
    evals.resize(n);
    Eigen::MatrixXd saved = m;
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, m.data(), n, evals.data());
    if (info != 0) {
        // Divide-and-conquer occasionally fails to converge; the QR driver
        // is slower but does not share the failure mode.
        m = saved;
        info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'U', n, m.data(), n, evals.data());
        if (info != 0) {
            throw NumericalBreakdown("symmetric eigensolve failed with info " +
                                     std::to_string(info));
        }
    }
}

void project_psd_block(Eigen::Ref<Eigen::VectorXd> block, int64_t dim, Eigen::MatrixXd &scratch,
                       Eigen::MatrixXd &scratch2, Eigen::VectorXd &evals) {
    scratch = unsvec(block, dim);
    eigh(scratch, evals);
    int64_t first_pos = 0;
    while (first_pos < dim && evals[first_pos] <= 0) {
        first_pos++;
    }
    if (first_pos == dim) {
        block.setZero();
        return;
    }
    if (first_pos == 0) {
        return;  // already PSD
    }
    int64_t npos = dim - first_pos;
    scratch2.noalias() = scratch.rightCols(npos) * evals.tail(npos).asDiagonal() *
                         scratch.rightCols(npos).transpose();
    const double r2 = std::sqrt(2.0);
    for (int64_t q = 0; q < dim; q++) {
        for (int64_t p = 0; p <= q; p++) {
            block[svec_index(p, q)] = p == q ? scratch2(p, p) : r2 * scratch2(p, q);
        }
    }
}

struct ConeLayout {
    std::vector<int64_t> offsets;  // per block, plus total at the end
};

ConeLayout layout_of(const std::vector<ConeBlock> &cones) {
    ConeLayout l;
    int64_t off = 0;
    for (const auto &k : cones) {
        l.offsets.push_back(off);
        off += k.rows();
    }
    l.offsets.push_back(off);
    return l;
}

// Projects y onto the dual cone K* (zero -> free, nonneg and psd self-dual).
void project_dual_cone(Eigen::VectorXd &y, const std::vector<ConeBlock> &cones, const ConeLayout &layout,
                       Eigen::MatrixXd &scratch, Eigen::MatrixXd &scratch2, Eigen::VectorXd &evals) {
    for (size_t i = 0; i < cones.size(); i++) {
        int64_t off = layout.offsets[i];
        const auto &k = cones[i];
        switch (k.type) {
            case ConeType::zero:
                break;
            case ConeType::nonneg:
                y.segment(off, k.dim) = y.segment(off, k.dim).cwiseMax(0.0);
                break;
            case ConeType::psd:
                project_psd_block(y.segment(off, k.rows()), k.dim, scratch, scratch2, evals);
                break;
        }
    }
}

// Projects s onto the primal cone K (zero -> 0, others self-dual).
void project_primal_cone(Eigen::VectorXd &s, const std::vector<ConeBlock> &cones, const ConeLayout &layout,
                         Eigen::MatrixXd &scratch, Eigen::MatrixXd &scratch2, Eigen::VectorXd &evals) {
    for (size_t i = 0; i < cones.size(); i++) {
        int64_t off = layout.offsets[i];
        const auto &k = cones[i];
        if (k.type == ConeType::zero) {
            s.segment(off, k.dim).setZero();
        }
    }
    project_dual_cone(s, cones, layout, scratch, scratch2, evals);
}

struct Scaling {
    Eigen::VectorXd row;  // D
    Eigen::VectorXd col;  // E
    double sc_b = 1;
    double sc_c = 1;
};

// Ruiz equilibration. Rows inside one PSD block share a single scale so the
// cone is preserved.
Scaling equilibrate(std::vector<Entry> &entries, std::vector<double> &b, std::vector<double> &c, int64_t m,
                    int64_t n, const std::vector<ConeBlock> &cones, const ConeLayout &layout,
                    int64_t ruiz_iters, double balance) {
    Scaling sc;
    sc.row = Eigen::VectorXd::Ones(m);
    sc.col = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd rmax(m), cmax(n);
    for (int64_t it = 0; it < ruiz_iters; it++) {
        rmax.setZero();
        cmax.setZero();
        for (const auto &e : entries) {
            double a = std::abs(e.value);
            rmax[e.row] = std::max(rmax[e.row], a);
            cmax[e.col] = std::max(cmax[e.col], a);
        }
        for (size_t i = 0; i < cones.size(); i++) {
            if (cones[i].type != ConeType::psd) {
                continue;
            }
            int64_t off = layout.offsets[i];
            int64_t len = layout.offsets[i + 1] - off;
            double blockmax = rmax.segment(off, len).maxCoeff();
            rmax.segment(off, len).setConstant(blockmax);
        }
        bool flat = true;
        for (int64_t r = 0; r < m; r++) {
            rmax[r] = rmax[r] > 0 ? 1.0 / std::sqrt(rmax[r]) : 1.0;
            flat &= std::abs(rmax[r] - 1.0) < 1e-4;
        }
        for (int64_t col = 0; col < n; col++) {
            cmax[col] = cmax[col] > 0 ? 1.0 / std::sqrt(cmax[col]) : 1.0;
            flat &= std::abs(cmax[col] - 1.0) < 1e-4;
        }
        for (auto &e : entries) {
            e.value *= rmax[e.row] * cmax[e.col];
        }
        sc.row.array() *= rmax.array();
        sc.col.array() *= cmax.array();
        if (flat) {
            break;
        }
    }
    double bnorm = 0, cnorm = 0;
    for (int64_t r = 0; r < m; r++) {
        b[r] *= sc.row[r];
        bnorm += b[r] * b[r];
    }
    for (int64_t col = 0; col < n; col++) {
        c[col] *= sc.col[col];
        cnorm += c[col] * c[col];
    }
    sc.sc_b = balance / std::max(std::sqrt(bnorm), 1e-6);
    sc.sc_c = 1.0 / (balance * std::max(std::sqrt(cnorm), 1e-6));
    for (auto &x : b) {
        x *= sc.sc_b;
    }
    for (auto &x : c) {
        x *= sc.sc_c;
    }
    return sc;
}

// Preconditioned CG on (I + A A^T) p = rhs, warm-started from p.
struct NormalSolver {
    const Csr *a;
    const Csr *at;
    Eigen::VectorXd precond;  // 1 / diag(I + A A^T)
    Eigen::VectorXd tmp_n, r, z, d, q;
    int64_t total_cg_iters = 0;

    void init(const Csr &a_in, const Csr &at_in) {
        a = &a_in;
        at = &at_in;
        precond = Eigen::VectorXd::Ones(a->rows);
        for (int64_t row = 0; row < a->rows; row++) {
            for (int64_t k = a->ptr[row]; k < a->ptr[row + 1]; k++) {
                precond[row] += a->val[k] * a->val[k];
            }
        }
        precond = precond.cwiseInverse();
        tmp_n.resize(a->cols);
        r.resize(a->rows);
        z.resize(a->rows);
        d.resize(a->rows);
        q.resize(a->rows);
    }

    void apply(const Eigen::VectorXd &x, Eigen::VectorXd &y) {
        at->multiply(x, tmp_n);
        a->multiply(tmp_n, y);
        y += x;
    }

    void solve(const Eigen::VectorXd &rhs, Eigen::VectorXd &p, double tol, int64_t max_iters) {
        apply(p, q);
        r = rhs - q;
        double rhs_norm = rhs.norm();
        double stop = std::max(tol * rhs_norm, 1e-14);
        z = precond.cwiseProduct(r);
        d = z;
        double rz = r.dot(z);
        for (int64_t it = 0; it < max_iters; it++) {
            if (r.norm() <= stop) {
                break;
            }
            apply(d, q);
            double alpha = rz / d.dot(q);
            p += alpha * d;
            r -= alpha * q;
            z = precond.cwiseProduct(r);
            double rz_new = r.dot(z);
            d = z + (rz_new / rz) * d;
            rz = rz_new;
            total_cg_iters++;
        }
    }
};

// Set when a run stalls with lopsided residuals; `factor` is the suggested
// balance-scale multiplier for a rebalanced restart.
struct StallInfo {
    bool stalled = false;
    double factor = 1.0;
};

Solution solve_once(const Problem &problem, const SolverConfig &config, int64_t iter_base,
                    StallInfo *stall) {
    const int64_t n = problem.num_vars;
    const int64_t m = problem.num_rows();
    ConeLayout layout = layout_of(problem.cones);

    std::vector<Entry> entries = problem.entries;
    std::vector<double> b = problem.b;
    std::vector<double> c = problem.c;
    Scaling sc = equilibrate(entries, b, c, m, n, problem.cones, layout, config.ruiz_iters,
                             config.scale);

    Csr a = build_csr(m, n, entries, false);
    Csr at = build_csr(m, n, entries, true);
    entries.clear();
    entries.shrink_to_fit();

    Eigen::VectorXd bh = Eigen::Map<Eigen::VectorXd>(b.data(), m);
    Eigen::VectorXd ch = Eigen::Map<Eigen::VectorXd>(c.data(), n);
    double bh_norm = bh.norm();
    double ch_norm = ch.norm();

    NormalSolver normal;
    normal.init(a, at);

    int64_t max_psd = 1;
    for (const auto &k : problem.cones) {
        if (k.type == ConeType::psd) {
            max_psd = std::max(max_psd, k.dim);
        }
    }
    Eigen::MatrixXd scratch(max_psd, max_psd), scratch2(max_psd, max_psd);
    Eigen::VectorXd evals(max_psd);

    // h = M^{-1} [c; b] for the repeated (I + Q) solves.
    Eigen::VectorXd h_y = Eigen::VectorXd::Zero(m);
    {
        Eigen::VectorXd rhs(m);
        a.multiply(ch, rhs);
        rhs += bh;
        normal.solve(rhs, h_y, 1e-12, 10 * static_cast<int64_t>(std::sqrt(double(m))) + 200);
    }
    Eigen::VectorXd h_x(n);
    at.multiply(h_y, h_x);
    h_x = ch - h_x;
    double gth = ch.dot(h_x) + bh.dot(h_y);

    // u = (x, y, tau), v = (0, s, kappa).
    Eigen::VectorXd ux = Eigen::VectorXd::Zero(n), uy = Eigen::VectorXd::Zero(m);
    double utau = 1;
    Eigen::VectorXd vy = Eigen::VectorXd::Zero(m);
    double vkappa = 1;
    if (config.warm_start) {
        const auto &ws = *config.warm_start;
        if (ws.x.size() == n && ws.y.size() == m && ws.s.size() == m) {
            ux = sc.sc_b * ws.x.cwiseQuotient(sc.col);
            uy = sc.sc_c * ws.y.cwiseQuotient(sc.row);
            vy = sc.sc_b * ws.s.cwiseProduct(sc.row);
            vkappa = 0;
        }
    }

    Eigen::VectorXd wx(n), wy(m), qx(n), qy(m), px(n), py(m), tx(n), ty(m);
    Eigen::VectorXd cg_p = Eigen::VectorXd::Zero(m);

    Solution best;
    double best_err = std::numeric_limits<double>::infinity();
    Solution out;
    out.status = SolveStatus::max_iterations;

    int64_t window_start = 0;
    double window_err = std::numeric_limits<double>::infinity();

    int64_t iter = 0;
    for (; iter < config.max_iters; iter++) {
        // w = u + v
        wx = ux;
        wy = uy + vy;
        double wtau = utau + vkappa;

        // q = M^{-1} [wx; wy]
        {
            Eigen::VectorXd rhs(m);
            a.multiply(wx, rhs);
            rhs += wy;
            double cg_tol = std::max(config.cg_tol_factor / std::pow(double(iter + 1), 2.0), 1e-12);
            normal.solve(rhs, cg_p, cg_tol, 2000);
            qy = cg_p;
        }
        at.multiply(qy, qx);
        qx = wx - qx;

        double ztau = (wtau + ch.dot(qx) + bh.dot(qy)) / (1.0 + gth);
        px = qx - ztau * h_x;
        py = qy - ztau * h_y;

        // over-relaxed reflection target
        double alpha = config.alpha;
        tx = alpha * px + (1 - alpha) * ux;
        ty = alpha * py + (1 - alpha) * uy;
        double ttau = alpha * ztau + (1 - alpha) * utau;

        // u = Pi_C(t - v); C = R^n x K* x R_+
        ux = tx;
        uy = ty - vy;
        project_dual_cone(uy, problem.cones, layout, scratch, scratch2, evals);
        double new_utau = std::max(ttau - vkappa, 0.0);

        // v = v + u - t
        vy += uy - ty;
        vkappa += new_utau - ttau;
        utau = new_utau;

        if ((iter + 1) % config.check_interval != 0 && iter + 1 != config.max_iters) {
            continue;
        }

        double pres = std::numeric_limits<double>::infinity();
        double dres = pres, gap = pres;
        double pobj = 0, dobj = 0;
        if (utau > 1e-10) {
            // residuals in original coordinates
            Eigen::VectorXd rp(m);
            a.multiply(ux, rp);
            rp += vy;
            rp -= utau * bh;
            rp = rp.cwiseQuotient(sc.row) / (sc.sc_b * utau);
            double bnorm_un = (bh.cwiseQuotient(sc.row)).norm() / sc.sc_b;
            pres = rp.norm() / (1.0 + bnorm_un);

            Eigen::VectorXd rd(n);
            at.multiply(uy, rd);
            rd += utau * ch;
            rd = rd.cwiseQuotient(sc.col) / (sc.sc_c * utau);
            double cnorm_un = (ch.cwiseQuotient(sc.col)).norm() / sc.sc_c;
            dres = rd.norm() / (1.0 + cnorm_un);

            pobj = ch.dot(ux) / (sc.sc_b * sc.sc_c * utau);
            dobj = -bh.dot(uy) / (sc.sc_b * sc.sc_c * utau);
            gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        }

        double err = std::max({pres, dres, gap});
        if (err < best_err) {
            best_err = err;
            best.x = ux.cwiseProduct(sc.col) / (sc.sc_b * utau);
            best.y = uy.cwiseProduct(sc.row) / (sc.sc_c * utau);
            best.s = vy.cwiseQuotient(sc.row) / (sc.sc_b * utau);
            best.primal_objective = pobj;
            best.dual_objective = dobj;
            best.primal_residual = pres;
            best.dual_residual = dres;
            best.gap = gap;
            best.iterations = iter + 1;
        }

        if (config.verbose) {
            std::fprintf(stderr,
                         "it %7lld pres %.3e dres %.3e gap %.3e pobj %+.8f dobj %+.8f tau %.3e "
                         "kappa %.3e cg %lld scale %.2f\n",
                         static_cast<long long>(iter_base + iter + 1), pres, dres, gap, pobj, dobj,
                         utau, vkappa, static_cast<long long>(normal.total_cg_iters), config.scale);
        }
        if (config.progress && !config.progress(iter_base + iter + 1, pres, dres, gap)) {
            break;
        }

        if (err <= config.tol) {
            best.status = SolveStatus::optimal;
            out = best;
            break;
        }

        // Stalled with lopsided residuals: ask for a rebalanced restart.
        if (stall && iter + 1 - window_start >= 500) {
            double ratio = pres / std::max(dres, 1e-300);
            if (best_err > 0.9 * window_err && std::isfinite(ratio) &&
                (ratio > 25.0 || ratio < 0.04)) {
                stall->stalled = true;
                stall->factor = std::clamp(std::sqrt(ratio), 1.0 / 30.0, 30.0);
                break;
            }
            window_start = iter + 1;
            window_err = best_err;
        }

        // infeasibility certificates
        double bty = bh.dot(uy);
        if (bty < 0) {
            Eigen::VectorXd aty(n);
            at.multiply(uy, aty);
            if (aty.norm() * std::max(bh_norm, 1e-12) <= -config.infeas_tol * bty) {
                out.status = SolveStatus::primal_infeasible;
                out.y = uy.cwiseProduct(sc.row) / (sc.sc_c * -bty);
                out.iterations = iter + 1;
                break;
            }
        }
        double ctx = ch.dot(ux);
        if (ctx < 0) {
            Eigen::VectorXd ax(m);
            a.multiply(ux, ax);
            Eigen::VectorXd s_cert = -ax;
            project_primal_cone(s_cert, problem.cones, layout, scratch, scratch2, evals);
            if ((ax + s_cert).norm() * std::max(ch_norm, 1e-12) <= -config.infeas_tol * ctx) {
                out.status = SolveStatus::dual_infeasible;
                out.x = ux.cwiseProduct(sc.col) / (sc.sc_b * -ctx);
                out.iterations = iter + 1;
                break;
            }
        }
    }

    if (out.status == SolveStatus::max_iterations) {
        out = best;
        out.status = best_err <= config.tol ? SolveStatus::optimal
                     : best_err <= 1e-4     ? SolveStatus::inaccurate
                                            : SolveStatus::max_iterations;
    }
    if (out.x.size() == 0) {
        out.x = Eigen::VectorXd::Zero(n);
    }
    if (out.y.size() == 0) {
        out.y = Eigen::VectorXd::Zero(m);
    }
    if (out.s.size() == 0) {
        out.s = Eigen::VectorXd::Zero(m);
    }
    return out;
}

}  // namespace

Solution solve(const Problem &problem, const SolverConfig &config) {
    problem.validate();
    auto t0 = std::chrono::steady_clock::now();

    const int kMaxRestarts = 6;
    SolverConfig run = config;
    int64_t used_iters = 0;
    Solution out;
    for (int attempt = 0;; attempt++) {
        StallInfo stall;
        run.max_iters = config.max_iters - used_iters;
        out = solve_once(problem, run, used_iters, attempt < kMaxRestarts ? &stall : nullptr);
        used_iters += out.iterations;
        out.iterations = used_iters;
        if (!stall.stalled || out.status == SolveStatus::optimal) {
            break;
        }
        run.scale *= stall.factor;
        run.warm_start = out;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace smq::conic
