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

#include "smq/rational.hpp"

#include <cmath>

namespace smq {

Rational rationalize(double v, int64_t max_denominator) {
    if (!std::isfinite(v)) {
        throw NumericalBreakdown("cannot rationalize a non-finite value");
    }
    if (max_denominator < 1) {
        throw DimensionMismatch("max_denominator must be positive");
    }
    Rational exact(v);
    exact.canonicalize();
    mpz_class bound(static_cast<long>(max_denominator));
    if (exact.get_den() <= bound) {
        return exact;
    }
    bool neg = exact < 0;
    mpz_class n = abs(exact.get_num());
    mpz_class d = exact.get_den();
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    while (d != 0) {
        mpz_class a = n / d;
        mpz_class p2 = a * p1 + p0;
        mpz_class q2 = a * q1 + q0;
        if (q2 > bound) {
            // Best approximation is the last convergent or a semiconvergent.
            Rational target = abs(exact);
            Rational conv(p1, q1);
            conv.canonicalize();
            mpz_class k = (bound - q0) / q1;
            Rational best = conv;
            if (k > 0) {
                Rational semi(k * p1 + p0, k * q1 + q0);
                semi.canonicalize();
                if (abs(target - semi) < abs(target - conv)) {
                    best = semi;
                }
            }
            return neg ? Rational(-best) : best;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        mpz_class r = n % d;
        n = d;
        d = r;
    }
    Rational out(p1, q1);
    out.canonicalize();
    return neg ? Rational(-out) : out;
}

RationalChoi::RationalChoi(SpaceList sp) : spaces(std::move(sp)), dim(total_dim(spaces)) {
    re.assign(static_cast<size_t>(dim) * dim, Rational(0));
    im.assign(static_cast<size_t>(dim) * dim, Rational(0));
}

Rational RationalChoi::trace() const {
    Rational t(0);
    for (int64_t i = 0; i < dim; i++) {
        t += real_at(i, i);
    }
    return t;
}

bool RationalChoi::is_hermitian() const {
    for (int64_t r = 0; r < dim; r++) {
        for (int64_t c = r; c < dim; c++) {
            if (real_at(r, c) != real_at(c, r) || imag_at(r, c) != -imag_at(c, r)) {
                return false;
            }
        }
    }
    return true;
}

bool RationalChoi::is_zero() const {
    for (const auto &v : re) {
        if (v != 0) {
            return false;
        }
    }
    for (const auto &v : im) {
        if (v != 0) {
            return false;
        }
    }
    return true;
}

bool RationalChoi::operator==(const RationalChoi &other) const {
    return spaces == other.spaces && re == other.re && im == other.im;
}

RationalChoi &RationalChoi::operator+=(const RationalChoi &other) {
    if (other.dim != dim) {
        throw DimensionMismatch("rational matrix dimensions differ");
    }
    for (size_t i = 0; i < re.size(); i++) {
        re[i] += other.re[i];
        im[i] += other.im[i];
    }
    return *this;
}

RationalChoi &RationalChoi::operator-=(const RationalChoi &other) {
    if (other.dim != dim) {
        throw DimensionMismatch("rational matrix dimensions differ");
    }
    for (size_t i = 0; i < re.size(); i++) {
        re[i] -= other.re[i];
        im[i] -= other.im[i];
    }
    return *this;
}

RationalChoi &RationalChoi::operator*=(const Rational &s) {
    for (size_t i = 0; i < re.size(); i++) {
        re[i] *= s;
        im[i] *= s;
    }
    return *this;
}

RationalChoi RationalChoi::hermitized() const {
    RationalChoi out(spaces);
    for (int64_t r = 0; r < dim; r++) {
        for (int64_t c = 0; c < dim; c++) {
            out.real_at(r, c) = (real_at(r, c) + real_at(c, r)) / 2;
            out.imag_at(r, c) = (imag_at(r, c) - imag_at(c, r)) / 2;
        }
    }
    return out;
}

Matrix RationalChoi::to_matrix() const {
    Matrix m(dim, dim);
    for (int64_t r = 0; r < dim; r++) {
        for (int64_t c = 0; c < dim; c++) {
            m(r, c) = Complex(real_at(r, c).get_d(), imag_at(r, c).get_d());
        }
    }
    return m;
}

RationalChoi rational_identity(SpaceList sp) {
    RationalChoi out(std::move(sp));
    for (int64_t i = 0; i < out.dim; i++) {
        out.real_at(i, i) = 1;
    }
    return out;
}

RationalChoi rationalize_choi(const ChoiObject &w, int64_t max_denominator) {
    if (w.kind() != ChoiKind::matrix) {
        throw DimensionMismatch("expected a Choi matrix");
    }
    RationalChoi out(w.spaces());
    const Matrix &m = w.data();
    for (int64_t r = 0; r < out.dim; r++) {
        for (int64_t c = 0; c < out.dim; c++) {
            out.real_at(r, c) = rationalize(m(r, c).real(), max_denominator);
            out.imag_at(r, c) = rationalize(m(r, c).imag(), max_denominator);
        }
    }
    return out;
}

RationalChoi rational_trace_and_replace(const RationalChoi &m, const std::string &name) {
    size_t pos = space_index(m.spaces, name);
    int64_t d = m.spaces[pos].dim;
    int64_t s = strides_of(m.spaces)[pos];
    int64_t outer = m.dim / (d * s);
    RationalChoi out(m.spaces);
    Rational sr(0), si(0);
    for (int64_t hr = 0; hr < outer; hr++) {
        for (int64_t lr = 0; lr < s; lr++) {
            for (int64_t hc = 0; hc < outer; hc++) {
                for (int64_t lc = 0; lc < s; lc++) {
                    sr = 0;
                    si = 0;
                    for (int64_t k = 0; k < d; k++) {
                        int64_t r = (hr * d + k) * s + lr;
                        int64_t c = (hc * d + k) * s + lc;
                        sr += m.real_at(r, c);
                        si += m.imag_at(r, c);
                    }
                    sr /= d;
                    si /= d;
                    if (sr == 0 && si == 0) {
                        continue;
                    }
                    for (int64_t j = 0; j < d; j++) {
                        int64_t r = (hr * d + j) * s + lr;
                        int64_t c = (hc * d + j) * s + lc;
                        out.real_at(r, c) = sr;
                        out.imag_at(r, c) = si;
                    }
                }
            }
        }
    }
    return out;
}

RationalChoi rational_apply_condition(const RationalChoi &m, const SubspaceCondition &c) {
    RationalChoi acc = m;
    for (const auto &name : c.replace) {
        acc = rational_trace_and_replace(acc, name);
    }
    for (const auto &name : c.remove) {
        RationalChoi repl = rational_trace_and_replace(acc, name);
        acc -= repl;
    }
    return acc;
}

Rational rational_trace_product(const RationalChoi &a, const RationalChoi &b) {
    if (a.dim != b.dim) {
        throw DimensionMismatch("rational matrix dimensions differ");
    }
    Rational t(0);
    for (int64_t r = 0; r < a.dim; r++) {
        for (int64_t c = 0; c < a.dim; c++) {
            if (b.real_at(c, r) != 0) {
                t += a.real_at(r, c) * b.real_at(c, r);
            }
            if (b.imag_at(c, r) != 0) {
                t -= a.imag_at(r, c) * b.imag_at(c, r);
            }
        }
    }
    return t;
}

RationalChoi exact_project_subspace(const RationalChoi &m, SupermapClass cls,
                                    const ProcessScenario &sc) {
    bool with_f = has_space(m.spaces, "F");
    RationalChoi out = m;
    for (const auto &c : subspace_conditions(cls, sc, with_f)) {
        RationalChoi part = rational_apply_condition(m, c);
        out -= part;
    }
    return out;
}

RationalChoi exact_project_dual_cone(const RationalChoi &m, SupermapClass cls,
                                     const ProcessScenario &sc) {
    bool with_f = has_space(m.spaces, "F");
    RationalChoi out(m.spaces);
    for (const auto &c : subspace_conditions(cls, sc, with_f)) {
        RationalChoi part = rational_apply_condition(m, c);
        out += part;
    }
    Rational w = m.trace() / m.dim;
    for (int64_t i = 0; i < m.dim; i++) {
        out.real_at(i, i) += w;
    }
    return out;
}

namespace {

// v^T M v < 0 witness from the partial unit-lower factor: solves
// L^T v = u where only the first `eliminated` columns of w hold L entries
// (L is the identity beyond them) and u is supported on indices <= last.
std::vector<Rational> lift_witness(const std::vector<std::vector<Rational>> &w, int64_t n,
                                   const std::vector<std::pair<int64_t, Rational>> &u,
                                   int64_t last, int64_t eliminated) {
    std::vector<Rational> v(n, Rational(0));
    for (const auto &[i, val] : u) {
        v[i] = val;
    }
    for (int64_t j = std::min(last, eliminated - 1); j >= 0; j--) {
        Rational acc = v[j];
        for (int64_t i = j + 1; i <= last; i++) {
            if (v[i] != 0 && w[i][j] != 0) {
                acc -= w[i][j] * v[i];
            }
        }
        v[j] = acc;
    }
    return v;
}

// Fraction-free symmetric Bareiss elimination on the scalar-scaled integer
// matrix z = lcm * M (positive scaling preserves semidefiniteness). Entries
// stay single determinants of bordered minors, so each update is two
// multiplies and one exact division with no gcd work, which is far cheaper
// than canonicalized rational arithmetic at large dimensions.
PsdVerdict psd_check_bareiss(std::vector<std::vector<mpz_class>> &z, int64_t n) {
    // Columns already eliminated keep their pre-division values, so the unit
    // lower factor entry is the exact ratio z[i][j] / z[j][j]; skipped zero
    // pivots contribute identity columns.
    auto lower_factor = [&](int64_t upto) {
        std::vector<std::vector<Rational>> lw(n);
        for (int64_t r = 0; r < n; r++) {
            lw[r].assign(r + 1, Rational(0));
        }
        for (int64_t j = 0; j < upto; j++) {
            if (sgn(z[j][j]) <= 0) {
                continue;
            }
            for (int64_t i = j + 1; i < n; i++) {
                if (z[i][j] != 0) {
                    lw[i][j] = Rational(z[i][j], z[j][j]);
                    lw[i][j].canonicalize();
                }
            }
        }
        return lw;
    };

    PsdVerdict out;
    mpz_class prev(1), t1, t2;
    for (int64_t k = 0; k < n; k++) {
        const mpz_class &piv = z[k][k];
        if (sgn(piv) < 0) {
            auto lw = lower_factor(k);
            out.witness = lift_witness(lw, n, {{k, Rational(1)}}, k, k);
            return out;
        }
        if (piv == 0) {
            for (int64_t i = k + 1; i < n; i++) {
                if (z[i][k] != 0) {
                    Rational a(z[i][k], prev), b(z[i][i], prev);
                    a.canonicalize();
                    b.canonicalize();
                    Rational alpha = -(b + 1) / (2 * a);
                    auto lw = lower_factor(k);
                    out.witness = lift_witness(lw, n, {{k, alpha}, {i, Rational(1)}}, i, k);
                    return out;
                }
            }
            // Zero row of the Schur complement: drop it; the division factor
            // stays the last retained pivot (Sylvester's identity holds for
            // any eliminated index set).
            continue;
        }
        for (int64_t i = k + 1; i < n; i++) {
            for (int64_t j = k + 1; j <= i; j++) {
                mpz_mul(t1.get_mpz_t(), piv.get_mpz_t(), z[i][j].get_mpz_t());
                mpz_mul(t2.get_mpz_t(), z[i][k].get_mpz_t(), z[j][k].get_mpz_t());
                mpz_sub(t1.get_mpz_t(), t1.get_mpz_t(), t2.get_mpz_t());
                mpz_divexact(z[i][j].get_mpz_t(), t1.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = piv;
    }
    out.psd = true;
    return out;
}

}  // namespace

PsdVerdict exact_psd_check(const RationalChoi &m) {
    if (!m.is_hermitian()) {
        throw DimensionMismatch("exact PSD check requires a Hermitian matrix");
    }
    bool complex_part = false;
    for (const auto &v : m.im) {
        if (v != 0) {
            complex_part = true;
            break;
        }
    }
    int64_t n = complex_part ? 2 * m.dim : m.dim;
    // Lower triangle of the real symmetric (embedded) matrix.
    std::vector<std::vector<Rational>> w(n);
    for (int64_t r = 0; r < n; r++) {
        w[r].resize(r + 1);
        for (int64_t c = 0; c <= r; c++) {
            if (!complex_part) {
                w[r][c] = m.real_at(r, c);
            } else {
                int64_t rr = r % m.dim, cc = c % m.dim;
                if ((r < m.dim) == (c < m.dim)) {
                    w[r][c] = m.real_at(rr, cc);
                } else {
                    w[r][c] = m.imag_at(rr, cc);  // lower-left block is +Im
                }
            }
        }
    }
    // Scalar-scale to integers when the common denominator stays small (it
    // does for dyadic-grid certificates); the fraction-free path is much
    // faster than canonicalized rational elimination.
    mpz_class common(1);
    bool small_common = true;
    for (int64_t r = 0; r < n && small_common; r++) {
        for (int64_t c = 0; c <= r; c++) {
            mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), w[r][c].get_den().get_mpz_t());
            // Entry bits after scaling grow with the lcm, and elimination
            // cost quadratically with entry bits; a few hundred bits is
            // still far cheaper than canonicalized rational elimination.
            if (mpz_sizeinbase(common.get_mpz_t(), 2) > 384) {
                small_common = false;
                break;
            }
        }
    }
    if (small_common) {
        std::vector<std::vector<mpz_class>> z(n);
        mpz_class scale;
        for (int64_t r = 0; r < n; r++) {
            z[r].resize(r + 1);
            for (int64_t c = 0; c <= r; c++) {
                mpz_divexact(scale.get_mpz_t(), common.get_mpz_t(),
                             w[r][c].get_den().get_mpz_t());
                z[r][c] = w[r][c].get_num() * scale;
            }
        }
        return psd_check_bareiss(z, n);
    }

    PsdVerdict out;
    for (int64_t k = 0; k < n; k++) {
        Rational &piv = w[k][k];
        if (piv < 0) {
            out.witness = lift_witness(w, n, {{k, Rational(1)}}, k, k);
            return out;
        }
        if (piv == 0) {
            for (int64_t i = k + 1; i < n; i++) {
                if (w[i][k] != 0) {
                    // 2x2 principal submatrix [[0, a], [a, b]] is indefinite.
                    Rational a = w[i][k];
                    Rational b = w[i][i];
                    Rational alpha = -(b + 1) / (2 * a);
                    out.witness = lift_witness(w, n, {{k, alpha}, {i, Rational(1)}}, i, k);
                    return out;
                }
            }
            continue;
        }
        for (int64_t i = k + 1; i < n; i++) {
            if (w[i][k] == 0) {
                continue;
            }
            Rational t = w[i][k] / piv;
            for (int64_t j = k + 1; j <= i; j++) {
                if (w[j][k] != 0) {
                    w[i][j] -= t * w[j][k];
                }
            }
        }
        for (int64_t i = k + 1; i < n; i++) {
            if (w[i][k] != 0) {
                w[i][k] /= piv;
            }
        }
    }
    out.psd = true;
    return out;
}

}  // namespace smq
