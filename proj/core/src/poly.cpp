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

#include "smq/poly.hpp"

#include <bit>
#include <cmath>

namespace smq {

namespace {

// Diagonal tuple z = (i_1..i_T) -> flat index of the basis pair (z, z) in
// [A1I A1O ... ATI ATO] (the slot spaces minus the trivial P factor).
int64_t tuple_index(const std::vector<int> &z, int n) {
    int64_t idx = 0;
    int64_t d = n + 1;
    for (int i : z) {
        idx = (idx * d + i) * d + i;
    }
    return idx;
}

// Bits of variables appearing an odd number of times in z (x_0 is constant).
uint32_t odd_mask(const std::vector<int> &z) {
    uint32_t m = 0;
    for (int i : z) {
        if (i >= 1) {
            m ^= uint32_t{1} << (i - 1);
        }
    }
    return m;
}

// prod_{i in mask} (1 - 2 x_i), expanded multilinearly, scaled by w.
void add_sign_product(MultilinearPoly &g, uint32_t mask, double w) {
    if (w == 0) {
        return;
    }
    uint32_t sub = mask;
    while (true) {
        g.coeffs[sub] += w * (std::popcount(sub) % 2 == 1 ? -1.0 : 1.0) *
                         static_cast<double>(int64_t{1} << std::popcount(sub));
        if (sub == 0) {
            break;
        }
        sub = (sub - 1) & mask;
    }
}

std::vector<std::vector<int>> all_tuples(int n, int T) {
    std::vector<std::vector<int>> out;
    std::vector<int> z(T, 0);
    while (true) {
        out.push_back(z);
        int t = T - 1;
        while (t >= 0 && z[t] == n) {
            z[t] = 0;
            t--;
        }
        if (t < 0) {
            break;
        }
        z[t]++;
    }
    return out;
}

MultilinearPoly polynomial_from_block(const Matrix &w1, int n, int T) {
    MultilinearPoly g;
    g.n = n;
    auto tuples = all_tuples(n, T);
    std::vector<int64_t> idx;
    std::vector<uint32_t> odd;
    for (const auto &z : tuples) {
        idx.push_back(tuple_index(z, n));
        odd.push_back(odd_mask(z));
    }
    for (size_t a = 0; a < tuples.size(); a++) {
        for (size_t b = 0; b < tuples.size(); b++) {
            add_sign_product(g, odd[a] ^ odd[b], w1(idx[a], idx[b]).real());
        }
    }
    return g;
}

}  // namespace

const MultilinearPoly *OraclePolynomialChoi::entry(int64_t r, int64_t c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? nullptr : &it->second;
}

Matrix OraclePolynomialChoi::specialize(uint64_t x) const {
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto &[rc, poly] : entries) {
        m(rc.first, rc.second) = poly.at_input(x);
    }
    return m;
}

OraclePolynomialChoi symbolic_oracle_choi(int n, int T) {
    OraclePolynomialChoi oc;
    oc.n = n;
    oc.T = T;
    oc.dim = 1;
    for (int t = 0; t < 2 * T; t++) {
        oc.dim *= n + 1;
        if (oc.dim > 700) {
            throw SizeCap("symbolic oracle dimension exceeds the cap");
        }
    }
    auto tuples = all_tuples(n, T);
    for (const auto &za : tuples) {
        for (const auto &zb : tuples) {
            MultilinearPoly p;
            p.n = n;
            add_sign_product(p, odd_mask(za) ^ odd_mask(zb), 1.0);
            oc.entries[{tuple_index(za, n), tuple_index(zb, n)}] = std::move(p);
        }
    }
    return oc;
}

MultilinearPoly extract_polynomial(const Superinstrument &si) {
    const ProcessScenario &sc = si.scenario;
    if (sc.d_P != 1) {
        throw DimensionMismatch("polynomial extraction expects a trivial global past");
    }
    int n = static_cast<int>(sc.d_I[0]) - 1;
    ChoiObject w1 = si.w1.permuted(sc.slot_spaces());
    return polynomial_from_block(w1.data(), n, sc.T);
}

MultilinearPoly extract_polynomial(const ChoiObject &w, const ProcessScenario &sc) {
    Matrix proj = Matrix::Zero(sc.d_F, sc.d_F);
    proj(1, 1) = 1;
    ChoiObject w1 = link_product(w, ChoiObject(ChoiKind::matrix, {{"F", sc.d_F}}, std::move(proj)));
    Superinstrument si;
    si.scenario = sc;
    si.w1 = w1.permuted(sc.slot_spaces());
    si.w0 = ChoiObject(ChoiKind::matrix, si.w1.spaces(), Matrix::Zero(si.w1.dim(), si.w1.dim()));
    return extract_polynomial(si);
}

std::pair<int, int> polynomial_lower_bound(const BooleanFunction &f) {
    int d = degree(f);
    int ad = approx_degree(f);
    return {(d + 1) / 2, (ad + 1) / 2};
}

}  // namespace smq
