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

#include "smq/oracle.hpp"
#include "smq/process.hpp"
#include "smq/qc.hpp"

using namespace smq;

namespace {

std::mt19937_64 rng(2024);

ChoiObject random_hermitian_on(const SpaceList &sp) {
    std::normal_distribution<double> g;
    int64_t d = total_dim(sp);
    Matrix m(d, d);
    for (int64_t i = 0; i < d; i++) {
        for (int64_t j = 0; j < d; j++) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return ChoiObject(ChoiKind::matrix, sp, (m + m.adjoint()).eval());
}

Complex hs_inner(const ChoiObject &a, const ChoiObject &b) {
    return (a.data().adjoint() * b.permuted(a.spaces()).data()).trace();
}

ChoiObject random_fo_comb(const ProcessScenario &sc, int64_t d_alpha) {
    std::vector<ChoiObject> channels;
    SpaceList in{{"P", sc.d_P}};
    for (int t = 1; t <= sc.T + 1; t++) {
        SpaceList out;
        if (t <= sc.T) {
            out = {{sc.ai(t), sc.d_I[t - 1]}, {"alpha" + std::to_string(t), d_alpha}};
        } else {
            out = {{"F", sc.d_F}, {"env", d_alpha}};
        }
        int64_t d_in = total_dim(in);
        int64_t d_out = total_dim(out);
        Matrix iso = random_unitary(std::max(d_in, d_out), rng).block(0, 0, d_out, d_in);
        if (d_out < d_in) {
            // Need an isometry, so pad the output with an environment.
            out.push_back({"pad", (d_in + d_out - 1) / d_out + 1});
            d_out = total_dim(out);
            iso = random_unitary(d_out, rng).block(0, 0, d_out, d_in);
        }
        auto c = outer(choi_of_isometry(iso, in, out));
        std::set<std::string> junk;
        if (t == sc.T + 1) {
            junk.insert("env");
        }
        if (has_space(c.spaces(), "pad")) {
            junk.insert("pad");
        }
        if (!junk.empty()) {
            c = partial_trace(c, junk);
        }
        channels.push_back(c);
        in = (t <= sc.T) ? SpaceList{{sc.ao(t), sc.d_O[t - 1]}, {"alpha" + std::to_string(t), d_alpha}}
                         : SpaceList{};
    }
    return build_fo_comb(channels, sc);
}

}  // namespace

TEST_CASE("scenario bookkeeping") {
    auto sc = ProcessScenario::query(3, 2);
    CHECK(sc.T == 2);
    CHECK(sc.d_P == 1);
    CHECK(sc.d_F == 2);
    CHECK(sc.d_I == std::vector<int64_t>{4, 4});
    CHECK(sc.d_in_slots() == 16);
    CHECK(sc.d_out() == 16);
    CHECK(sc.ai(1) == "A1I");
    CHECK(sc.ao(2) == "A2O");
    CHECK(total_dim(sc.full_spaces()) == 512);
    CHECK(total_dim(sc.slot_spaces()) == 256);
}

TEST_CASE("class names round trip") {
    for (auto cls : {SupermapClass::FO, SupermapClass::QC, SupermapClass::Gen}) {
        CHECK(supermap_class_from_string(to_string(cls)) == cls);
    }
    CHECK_THROWS(supermap_class_from_string("bogus"));
}

TEST_CASE("subspace conditions are orthogonal projectors that kill identity") {
    auto sc = ProcessScenario::query(2, 2);
    for (auto cls : {SupermapClass::FO, SupermapClass::Gen}) {
        for (bool with_f : {true, false}) {
            auto conds = subspace_conditions(cls, sc, with_f);
            CHECK(!conds.empty());
            SpaceList sp = with_f ? sc.full_spaces() : sc.slot_spaces();
            auto id = identity_matrix_on(sp);
            for (const auto &c : conds) {
                CHECK(apply_subspace_condition(id, c).data().norm() < 1e-12);
                auto w = random_hermitian_on(sp);
                auto cw = apply_subspace_condition(w, c);
                // Projector and traceless range.
                CHECK((apply_subspace_condition(cw, c).data() - cw.data()).norm() < 1e-10);
                CHECK(std::abs(cw.data().trace()) < 1e-10);
                // Self-adjoint under the Hilbert-Schmidt inner product.
                auto v = random_hermitian_on(sp);
                CHECK(std::abs(hs_inner(apply_subspace_condition(v, c), w) - hs_inner(v, cw)) < 1e-8);
            }
            // Mutual orthogonality: C_i after C_j vanishes.
            for (size_t i = 0; i < conds.size(); i++) {
                for (size_t j = 0; j < conds.size(); j++) {
                    if (i == j) {
                        continue;
                    }
                    auto w = random_hermitian_on(sp);
                    auto x = apply_subspace_condition(apply_subspace_condition(w, conds[j]), conds[i]);
                    CHECK(x.data().norm() < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("validity projector is idempotent and self-adjoint on random inputs") {
    auto sc = ProcessScenario::query(2, 2);
    for (auto cls : {SupermapClass::FO, SupermapClass::Gen}) {
        for (int rep = 0; rep < 50; rep++) {
            auto w = random_hermitian_on(sc.full_spaces());
            auto pw = project_subspace(w, cls, sc);
            CHECK((project_subspace(pw, cls, sc).data() - pw.data()).cwiseAbs().maxCoeff() < 1e-10);
            auto v = random_hermitian_on(sc.full_spaces());
            auto pv = project_subspace(v, cls, sc);
            CHECK(std::abs(hs_inner(pv, w) - hs_inner(v, pw)) < 1e-8);
        }
        // Contracted (F-summed) variant.
        for (int rep = 0; rep < 50; rep++) {
            auto w = random_hermitian_on(sc.slot_spaces());
            auto pw = project_subspace(w, cls, sc);
            CHECK((project_subspace(pw, cls, sc).data() - pw.data()).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    // FO validity implies Gen validity: the Gen projector fixes FO points.
    auto comb = random_fo_comb(ProcessScenario::uniform(2, 2, 2, 1), 2);
    auto sc2 = ProcessScenario::uniform(2, 2, 2, 1);
    CHECK((project_subspace(comb, SupermapClass::Gen, sc2).data() - comb.data()).cwiseAbs().maxCoeff() <
          1e-10);
}

TEST_CASE("random sequential combs are valid FO processes") {
    auto sc = ProcessScenario::uniform(2, 2, 2, 1);
    for (int rep = 0; rep < 5; rep++) {
        auto w = random_fo_comb(sc, 2);
        auto rep_fo = is_valid_process(w, SupermapClass::FO, sc);
        CHECK(rep_fo.valid);
        auto rep_gen = is_valid_process(w, SupermapClass::Gen, sc);
        CHECK(rep_gen.valid);
        // The projector fixes it.
        CHECK((project_subspace(w, SupermapClass::FO, sc).data() - w.data()).cwiseAbs().maxCoeff() <
              1e-10);
    }
}

TEST_CASE("comb builder rejects non-trace-preserving channels") {
    auto sc = ProcessScenario::uniform(1, 2, 2, 1);
    auto c1 = outer(choi_of_isometry(Matrix::Identity(2, 1), SpaceList{{"P", 1}}, SpaceList{{"A1I", 2}}));
    // Halve the final channel: trace-decreasing.
    auto bad = outer(choi_of_isometry(Matrix::Identity(2, 2), SpaceList{{"A1O", 2}}, SpaceList{{"F", 2}}));
    bad = ChoiObject(ChoiKind::matrix, bad.spaces(), (0.5 * bad.data()).eval());
    std::vector<ChoiObject> channels{c1, bad};
    CHECK_THROWS(build_fo_comb(channels, sc));
}

TEST_CASE("switch process is Gen-valid but not FO-valid") {
    auto impl = switch_implementation();
    auto w = build_qc_process(impl);
    auto gen = is_valid_process(w, SupermapClass::Gen, impl.scenario);
    CHECK(gen.valid);
    auto fo = is_valid_process(w, SupermapClass::FO, impl.scenario);
    CHECK(!fo.valid);
    // And the failure really is the causal structure, not positivity.
    CHECK(fo.violated != "positivity");
}

TEST_CASE("born rule on a known process") {
    // One-slot identity comb with final measurement basis F: the outcome
    // probability equals |<i|O_x|psi>|^2 routing through the slot.
    auto sc = ProcessScenario::query(1, 1);
    auto c1 = outer(choi_of_isometry(Matrix::Identity(2, 1), SpaceList{{"P", 1}},
                                     SpaceList{{"A1I", 2}, {"alpha1", 1}}));
    auto c2 = outer(choi_of_isometry(Matrix::Identity(2, 2), SpaceList{{"A1O", 2}, {"alpha1", 1}},
                                     SpaceList{{"F", 2}}));
    std::vector<ChoiObject> channels{c1, c2};
    auto w = build_fo_comb(channels, sc);
    // c1 prepares |0>, the oracle acts diagonally, so F ends in |0> with
    // phase +-1: outcome 0 has probability 1 for every input.
    for (uint64_t x = 0; x < 2; x++) {
        CHECK(outcome_probability(w, x, 0, sc) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(outcome_probability(w, x, 1, sc) == doctest::Approx(0.0).epsilon(1e-10));
        BooleanFunction f(1, uint64_t{1});  // f(x) = x
        double p_correct = evaluate(w, f, x, sc);
        CHECK(p_correct == doctest::Approx(f.value(x) == 0 ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("outcome probabilities are normalized for valid processes") {
    auto sc = ProcessScenario::query(2, 2);
    auto w = random_fo_comb(sc, 2);
    for (uint64_t x = 0; x < 4; x++) {
        double p0 = outcome_probability(w, x, 0, sc);
        double p1 = outcome_probability(w, x, 1, sc);
        CHECK(p0 >= -1e-10);
        CHECK(p1 >= -1e-10);
        CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-9));
    }
}
