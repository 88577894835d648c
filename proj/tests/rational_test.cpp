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

#include "smq/rational.hpp"

using namespace smq;

namespace {

std::mt19937_64 rng(321);

RationalChoi from_entries(SpaceList sp, const std::vector<std::vector<double>> &re,
                          const std::vector<std::vector<double>> &im = {}) {
    RationalChoi m(std::move(sp));
    for (int64_t r = 0; r < m.dim; r++) {
        for (int64_t c = 0; c < m.dim; c++) {
            m.real_at(r, c) = rationalize(re[r][c]);
            if (!im.empty()) {
                m.imag_at(r, c) = rationalize(im[r][c]);
            }
        }
    }
    return m;
}

/// v^T M v over the real embedding, exactly.
Rational witness_value(const RationalChoi &m, const std::vector<Rational> &v) {
    int64_t d = m.dim;
    bool complex_embed = v.size() == static_cast<size_t>(2 * d);
    Rational acc = 0;
    if (!complex_embed) {
        for (int64_t i = 0; i < d; i++) {
            for (int64_t j = 0; j < d; j++) {
                acc += v[i] * m.real_at(i, j) * v[j];
            }
        }
        return acc;
    }
    // Embedding [[Re, -Im], [Im, Re]].
    for (int64_t i = 0; i < 2 * d; i++) {
        for (int64_t j = 0; j < 2 * d; j++) {
            Rational e = (i < d) == (j < d) ? m.real_at(i % d, j % d) : m.imag_at(i % d, j % d);
            if (i < d && j >= d) {
                e = -e;
            }
            acc += v[i] * e * v[j];
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("rationalize recovers simple fractions and respects the bound") {
    CHECK(rationalize(0.5) == Rational(1, 2));
    CHECK(rationalize(-0.25) == Rational(-1, 4));
    CHECK(rationalize(3.0) == Rational(3));
    CHECK(rationalize(0.0) == Rational(0));
    CHECK(rationalize(1.0 / 3.0) == Rational(1, 3));
    CHECK(rationalize(0.1) == Rational(1, 10));

    // Denominator bound: best approximation of pi with q <= 1000 is 355/113.
    CHECK(rationalize(3.14159265358979, 1000) == Rational(355, 113));
    // Brute-force optimality for random values and small bounds.
    std::uniform_real_distribution<double> u(-2, 2);
    for (int rep = 0; rep < 50; rep++) {
        double v = u(rng);
        int64_t bound = 1 + static_cast<int64_t>(rng() % 40);
        Rational got = rationalize(v, bound);
        CHECK(got.get_den() <= bound);
        double best = 1e300;
        for (int64_t q = 1; q <= bound; q++) {
            double p = std::round(v * static_cast<double>(q));
            best = std::min(best, std::abs(v - p / static_cast<double>(q)));
        }
        CHECK(std::abs(v - got.get_d()) <= best + 1e-15);
    }
}

TEST_CASE("rational choi arithmetic") {
    SpaceList sp{{"a", 2}};
    auto m = from_entries(sp, {{1, 0.5}, {0.25, -1}});
    CHECK(m.trace() == Rational(0));
    CHECK(!m.is_hermitian());
    auto h = m.hermitized();
    CHECK(h.is_hermitian());
    CHECK(h.real_at(0, 1) == Rational(3, 8));
    auto sum = h;
    sum += h;
    sum *= Rational(1, 2);
    CHECK(sum == h);
    sum -= h;
    CHECK(sum.is_zero());

    auto id = rational_identity(sp);
    CHECK(id.trace() == Rational(2));
    CHECK(rational_trace_product(id, h) == h.trace());
}

TEST_CASE("exact psd check on definite and indefinite inputs") {
    SpaceList sp{{"a", 2}};

    // A tiny negative eigenvalue far below double noise still fails.
    RationalChoi m(sp);
    m.real_at(0, 0) = 1;
    m.real_at(1, 1) = -Rational(mpz_class(1), mpz_class("10000000000000000000000000000000000000000"));
    auto verdict = exact_psd_check(m);
    CHECK(!verdict.psd);
    REQUIRE(!verdict.witness.empty());
    CHECK(witness_value(m, verdict.witness) < 0);

    // Gram matrices are PSD.
    for (int rep = 0; rep < 10; rep++) {
        SpaceList sp3{{"a", 3}};
        RationalChoi g(sp3);
        std::vector<std::vector<Rational>> a(3, std::vector<Rational>(3));
        for (auto &row : a) {
            for (auto &e : row) {
                e = Rational(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 7));
            }
        }
        for (int64_t i = 0; i < 3; i++) {
            for (int64_t j = 0; j < 3; j++) {
                Rational acc = 0;
                for (int64_t k = 0; k < 3; k++) {
                    acc += a[k][i] * a[k][j];
                }
                g.real_at(i, j) = acc;
            }
        }
        CHECK(exact_psd_check(g).psd);
    }

    // Zero pivots: diag(0, 1) is PSD, the off-diagonal flip is not.
    RationalChoi z(sp);
    z.real_at(1, 1) = 1;
    CHECK(exact_psd_check(z).psd);
    RationalChoi flip(sp);
    flip.real_at(0, 1) = 1;
    flip.real_at(1, 0) = 1;
    auto fv = exact_psd_check(flip);
    CHECK(!fv.psd);
    REQUIRE(!fv.witness.empty());
    CHECK(witness_value(flip, fv.witness) < 0);
}

TEST_CASE("exact psd check with complex entries") {
    SpaceList sp{{"a", 2}};
    // [[1, i/2], [-i/2, 1]] has eigenvalues 1/2 and 3/2.
    RationalChoi ok(sp);
    ok.real_at(0, 0) = 1;
    ok.real_at(1, 1) = 1;
    ok.imag_at(0, 1) = Rational(1, 2);
    ok.imag_at(1, 0) = -Rational(1, 2);
    CHECK(exact_psd_check(ok).psd);

    // [[1, 2i], [-2i, 1]] has a negative eigenvalue.
    RationalChoi bad = ok;
    bad.imag_at(0, 1) = 2;
    bad.imag_at(1, 0) = -2;
    auto v = exact_psd_check(bad);
    CHECK(!v.psd);
    REQUIRE(v.witness.size() == 4);
    CHECK(witness_value(bad, v.witness) < 0);
}

TEST_CASE("random float psd matrices verify after rationalization") {
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 5; rep++) {
        int64_t d = 4;
        Matrix a(d, d);
        for (int64_t i = 0; i < d; i++) {
            for (int64_t j = 0; j < d; j++) {
                a(i, j) = Complex(g(rng), g(rng));
            }
        }
        Matrix p = a * a.adjoint() + 0.1 * Matrix::Identity(d, d);
        auto m = rationalize_choi(ChoiObject(ChoiKind::matrix, {{"a", d}}, p), 1 << 20);
        auto v = exact_psd_check(m.hermitized());
        CHECK(v.psd);
    }
}

TEST_CASE("exact trace-and-replace mirrors the float map") {
    std::normal_distribution<double> g;
    SpaceList sp{{"a", 2}, {"b", 3}, {"c", 2}};
    int64_t d = total_dim(sp);
    Matrix raw(d, d);
    for (int64_t i = 0; i < d; i++) {
        for (int64_t j = 0; j < d; j++) {
            raw(i, j) = Complex(g(rng), g(rng));
        }
    }
    ChoiObject w(ChoiKind::matrix, sp, (raw + raw.adjoint()).eval());
    auto rw = rationalize_choi(w, 1 << 24);
    auto exact = rational_trace_and_replace(rw, "b");
    auto approx = trace_and_replace(w, "b");
    CHECK((exact.to_matrix() - approx.data()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(exact.trace() == rw.trace());
    // Exact projector property.
    CHECK(rational_trace_and_replace(exact, "b") == exact);
}

TEST_CASE("exact subspace and dual-cone projections") {
    auto sc = ProcessScenario::query(2, 1);
    SpaceList sp = sc.slot_spaces();
    std::normal_distribution<double> g;
    int64_t d = total_dim(sp);
    Matrix raw(d, d);
    for (int64_t i = 0; i < d; i++) {
        for (int64_t j = 0; j < d; j++) {
            raw(i, j) = Complex(g(rng), 0);
        }
    }
    ChoiObject w(ChoiKind::matrix, sp, (raw + raw.adjoint()).eval());
    auto rw = rationalize_choi(w, 1 << 24);

    for (auto cls : {SupermapClass::FO, SupermapClass::Gen}) {
        auto p = exact_project_subspace(rw, cls, sc);
        CHECK(exact_project_subspace(p, cls, sc) == p);
        auto approx = project_subspace(w, cls, sc);
        CHECK((p.to_matrix() - approx.data()).cwiseAbs().maxCoeff() < 1e-6);

        auto q = exact_project_dual_cone(rw, cls, sc);
        CHECK(exact_project_dual_cone(q, cls, sc) == q);
        // The identity is in the dual cone.
        auto id = rational_identity(sp);
        CHECK(exact_project_dual_cone(id, cls, sc) == id);
        // Projection preserves nothing outside the cone's span: applying the
        // conditions to the projection must vanish... i.e. membership:
        // q - sum_i C_i(q) - Tr(q)/D = 0 is re-checked by idempotence above.
    }
}
