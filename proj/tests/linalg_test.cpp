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

#include "smq/linalg.hpp"
#include "smq/qc.hpp"

using namespace smq;

namespace {

std::mt19937_64 rng(12345);

Matrix random_hermitian(int64_t d) {
    std::normal_distribution<double> g;
    Matrix m(d, d);
    for (int64_t i = 0; i < d; i++) {
        for (int64_t j = 0; j < d; j++) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return (m + m.adjoint()).eval();
}

ChoiObject random_choi(const SpaceList &sp) {
    return ChoiObject(ChoiKind::matrix, sp, random_hermitian(total_dim(sp)));
}

double diff(const ChoiObject &a, const ChoiObject &b) {
    return (a.data() - b.permuted(a.spaces()).data()).norm();
}

}  // namespace

TEST_CASE("permutation round trip and independent kron oracle") {
    SpaceList ab{{"a", 2}, {"b", 3}};
    SpaceList ba{{"b", 3}, {"a", 2}};
    Matrix ma = random_hermitian(2);
    Matrix mb = random_hermitian(3);
    // Independent construction: row-major, first space slowest, so the matrix
    // on [a,b] is kron(ma, mb).
    Matrix mab = Matrix::Zero(6, 6);
    Matrix mba = Matrix::Zero(6, 6);
    for (int ia = 0; ia < 2; ia++)
        for (int ja = 0; ja < 2; ja++)
            for (int ib = 0; ib < 3; ib++)
                for (int jb = 0; jb < 3; jb++) {
                    mab(ia * 3 + ib, ja * 3 + jb) = ma(ia, ja) * mb(ib, jb);
                    mba(ib * 2 + ia, jb * 2 + ja) = ma(ia, ja) * mb(ib, jb);
                }
    ChoiObject w(ChoiKind::matrix, ab, mab);
    CHECK((w.permuted(ba).data() - mba).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((w.permuted(ba).permuted(ab).data() - mab).norm() == doctest::Approx(0.0).epsilon(1e-14));

    auto t = tensor(ChoiObject(ChoiKind::matrix, {{"a", 2}}, ma),
                    ChoiObject(ChoiKind::matrix, {{"b", 3}}, mb));
    CHECK(diff(t, w) < 1e-13);
}

TEST_CASE("link product: full contraction is a trace") {
    SpaceList sp{{"x", 3}};
    auto a = random_choi(sp);
    auto b = random_choi(sp);
    auto c = link_product(a, b);
    CHECK(c.dim() == 1);
    // Tr[A^{T_x} B] with all of x contracted reduces to Tr[A^T B].
    Complex want = (a.data().transpose() * b.data()).trace();
    CHECK(std::abs(c.data()(0, 0) - want) < 1e-12);
}

TEST_CASE("link product commutes and associates") {
    SpaceList sa{{"u", 2}, {"v", 2}};
    SpaceList sb{{"v", 2}, {"w", 3}};
    SpaceList sc{{"w", 3}, {"z", 2}};
    for (int rep = 0; rep < 10; rep++) {
        auto a = random_choi(sa);
        auto b = random_choi(sb);
        auto c = random_choi(sc);
        CHECK(diff(link_product(a, b), link_product(b, a)) < 1e-12);
        auto ab_c = link_product(link_product(a, b), c);
        auto a_bc = link_product(a, link_product(b, c));
        CHECK(diff(ab_c, a_bc) < 1e-12);
    }
}

TEST_CASE("channel composition through the link product") {
    for (int rep = 0; rep < 5; rep++) {
        Matrix u1 = random_unitary(3, rng);
        Matrix u2 = random_unitary(3, rng);
        auto c1 = choi_of_isometry_channel(u1, SpaceLabel{"in", 3}, {{"mid", 3}});
        auto c2 = choi_of_isometry_channel(u2, SpaceLabel{"mid", 3}, {{"out", 3}});
        auto chain = link_product(c1, c2);
        auto direct = choi_of_isometry_channel((u2 * u1).eval(), SpaceLabel{"in", 3}, {{"out", 3}});
        CHECK(diff(chain, direct) < 1e-12);
    }
}

TEST_CASE("apply_channel matches conjugation") {
    Matrix u = random_unitary(4, rng);
    auto choi = choi_of_isometry_channel(u, SpaceLabel{"in", 4}, {{"out", 4}});
    Matrix rho = random_hermitian(4);
    Matrix got = apply_channel(choi, rho);
    CHECK((got - u * rho * u.adjoint()).norm() < 1e-12);
}

TEST_CASE("partial trace against manual sum") {
    SpaceList sp{{"a", 2}, {"b", 3}};
    auto w = random_choi(sp);
    auto pt = partial_trace(w, {"b"});
    Matrix manual = Matrix::Zero(2, 2);
    for (int ia = 0; ia < 2; ia++)
        for (int ja = 0; ja < 2; ja++)
            for (int ib = 0; ib < 3; ib++) {
                manual(ia, ja) += w.data()(ia * 3 + ib, ja * 3 + ib);
            }
    CHECK((pt.data() - manual).norm() < 1e-13);
    CHECK(std::abs(pt.data().trace() - w.data().trace()) < 1e-12);
}

TEST_CASE("trace_and_replace properties") {
    SpaceList sp{{"a", 2}, {"b", 3}, {"c", 2}};
    auto w = random_choi(sp);
    auto r = trace_and_replace(w, "b");
    CHECK(std::abs(r.data().trace() - w.data().trace()) < 1e-12);
    // Projector: applying twice changes nothing.
    CHECK(diff(trace_and_replace(r, "b"), r) < 1e-12);
    // Maps over distinct factors commute.
    auto rc = trace_and_replace(trace_and_replace(w, "b"), "c");
    auto cr = trace_and_replace(trace_and_replace(w, "c"), "b");
    CHECK(diff(rc, cr) < 1e-12);
    CHECK(diff(rc, trace_and_replace(w, std::set<std::string>{"b", "c"})) < 1e-12);
    // The replaced factor really is maximally mixed: tracing the rest leaves
    // a multiple of the identity.
    auto only_b = partial_trace(r, {"a", "c"});
    Matrix id3 = Matrix::Identity(3, 3);
    Complex scale = only_b.data().trace() / 3.0;
    CHECK((only_b.data() - scale * id3).norm() < 1e-12);
}

TEST_CASE("one_minus kills trace_and_replace fixed points") {
    SpaceList sp{{"a", 2}, {"b", 2}};
    auto w = random_choi(sp);
    auto fixed = trace_and_replace(w, "b");
    CHECK(one_minus(fixed, "b").data().norm() < 1e-12);
    auto om = one_minus(w, "b");
    CHECK(std::abs(om.data().trace()) < 1e-12);
}

TEST_CASE("outer and vector link product") {
    SpaceList sp{{"a", 2}, {"b", 2}};
    Matrix v(4, 1);
    v << Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0.5, 0.5);
    ChoiObject vec(ChoiKind::vector, sp, v);
    auto o = outer(vec);
    CHECK(o.kind() == ChoiKind::matrix);
    CHECK((o.data() - v * v.adjoint()).norm() < 1e-14);
}

TEST_CASE("identity and rename") {
    auto id = identity_matrix_on({{"a", 2}, {"b", 3}});
    CHECK((id.data() - Matrix::Identity(6, 6)).norm() == 0.0);
    auto renamed = id.renamed("a", "q");
    CHECK(has_space(renamed.spaces(), "q"));
    CHECK(!has_space(renamed.spaces(), "a"));
}

TEST_CASE("choi vector of an isometry") {
    Matrix u = random_unitary(2, rng);
    auto v = choi_of_isometry(u, SpaceLabel{"in", 2}, {{"out", 2}});
    CHECK(v.kind() == ChoiKind::vector);
    // |U>> = sum_i |i>|U i>, on [in, out] with in slowest.
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            CHECK(std::abs(v.data()(i * 2 + j, 0) - u(j, i)) < 1e-14);
        }
    // Isometry check rejects a non-isometry.
    Matrix bad = Matrix::Ones(2, 2);
    CHECK_THROWS(choi_of_isometry(bad, SpaceLabel{"in", 2}, {{"out", 2}}));
}

TEST_CASE("random unitaries are unitary") {
    for (int64_t d : {2, 3, 5}) {
        Matrix u = random_unitary(d, rng);
        CHECK((u.adjoint() * u - Matrix::Identity(d, d)).norm() < 1e-12);
    }
}
