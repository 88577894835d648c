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

#include "smq/linalg.hpp"

#include <nlohmann/json.hpp>

namespace smq {

ChoiObject choi_of_isometry(const Matrix &iso, const SpaceLabel &in_space, const SpaceList &out_spaces,
                            double tol) {
    return choi_of_isometry(iso, SpaceList{in_space}, out_spaces, tol);
}

ChoiObject choi_of_isometry(const Matrix &iso, const SpaceList &in_spaces, const SpaceList &out_spaces,
                            double tol) {
    int64_t d_in = total_dim(in_spaces);
    int64_t d_out = total_dim(out_spaces);
    if (iso.cols() != d_in || iso.rows() != d_out) {
        throw DimensionMismatch("isometry shape does not match declared spaces");
    }
    Matrix gram = iso.adjoint() * iso;
    if ((gram - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() > tol) {
        throw NonIsometry("iso^dag iso deviates from identity beyond tolerance");
    }
    SpaceList spaces = in_spaces;
    spaces.insert(spaces.end(), out_spaces.begin(), out_spaces.end());
    Matrix v(d_in * d_out, 1);
    for (int64_t i = 0; i < d_in; i++) {
        for (int64_t o = 0; o < d_out; o++) {
            v(i * d_out + o, 0) = iso(o, i);
        }
    }
    return ChoiObject(ChoiKind::vector, std::move(spaces), std::move(v));
}

ChoiObject outer(const ChoiObject &v) {
    if (v.kind() != ChoiKind::vector) {
        throw DimensionMismatch("outer() needs a vector");
    }
    return ChoiObject(ChoiKind::matrix, v.spaces(), v.data() * v.data().adjoint());
}

ChoiObject choi_of_isometry_channel(const Matrix &iso, const SpaceLabel &in_space, const SpaceList &out_spaces,
                                    double tol) {
    return outer(choi_of_isometry(iso, in_space, out_spaces, tol));
}

ChoiObject identity_matrix_on(const SpaceList &spaces) {
    int64_t d = total_dim(spaces);
    return ChoiObject(ChoiKind::matrix, spaces, Matrix::Identity(d, d));
}

ChoiObject link_product(const ChoiObject &a, const ChoiObject &b) {
    if (a.kind() != b.kind()) {
        throw DimensionMismatch("link product operands must have the same kind");
    }
    SpaceList a_only, shared, b_only;
    for (const auto &s : a.spaces()) {
        if (has_space(b.spaces(), s.name)) {
            if (b.spaces()[space_index(b.spaces(), s.name)].dim != s.dim) {
                throw DimensionMismatch("shared space '" + s.name + "' has mismatched dims");
            }
            shared.push_back(s);
        } else {
            a_only.push_back(s);
        }
    }
    for (const auto &s : b.spaces()) {
        if (!has_space(a.spaces(), s.name)) {
            b_only.push_back(s);
        }
    }

    SpaceList a_order = a_only;
    a_order.insert(a_order.end(), shared.begin(), shared.end());
    SpaceList b_order = shared;
    b_order.insert(b_order.end(), b_only.begin(), b_only.end());
    Matrix ad = a.permuted(a_order).data();
    Matrix bd = b.permuted(b_order).data();

    int64_t dx = total_dim(a_only);
    int64_t dy = total_dim(shared);
    int64_t dz = total_dim(b_only);

    SpaceList out_spaces = a_only;
    out_spaces.insert(out_spaces.end(), b_only.begin(), b_only.end());

    if (a.kind() == ChoiKind::vector) {
        // |U> * |V>: reshape over the shared index and multiply.
        Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> am(ad.data(), dx,
                                                                                               dy);
        Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> bm(bd.data(), dy,
                                                                                               dz);
        Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> r = am * bm;
        Matrix out = Eigen::Map<Eigen::VectorXcd>(r.data(), dx * dz);
        return ChoiObject(ChoiKind::vector, std::move(out_spaces), std::move(out));
    }

    // M * N = Tr_Y[(M (x) 1)^{T_Y} (1 (x) N)], computed as a single GEMM:
    //   R[(x,x'),(z,z')] = sum_{y,y'} M[(x,y),(x',y')] N[(y,z),(y',z')].
    Matrix mview(dx * dx, dy * dy);
    for (int64_t x = 0; x < dx; x++) {
        for (int64_t xp = 0; xp < dx; xp++) {
            for (int64_t y = 0; y < dy; y++) {
                for (int64_t yp = 0; yp < dy; yp++) {
                    mview(x * dx + xp, y * dy + yp) = ad(x * dy + y, xp * dy + yp);
                }
            }
        }
    }
    Matrix nview(dy * dy, dz * dz);
    for (int64_t y = 0; y < dy; y++) {
        for (int64_t yp = 0; yp < dy; yp++) {
            for (int64_t z = 0; z < dz; z++) {
                for (int64_t zp = 0; zp < dz; zp++) {
                    nview(y * dy + yp, z * dz + zp) = bd(y * dz + z, yp * dz + zp);
                }
            }
        }
    }
    Matrix r = mview * nview;
    Matrix out(dx * dz, dx * dz);
    for (int64_t x = 0; x < dx; x++) {
        for (int64_t xp = 0; xp < dx; xp++) {
            for (int64_t z = 0; z < dz; z++) {
                for (int64_t zp = 0; zp < dz; zp++) {
                    out(x * dz + z, xp * dz + zp) = r(x * dx + xp, z * dz + zp);
                }
            }
        }
    }
    return ChoiObject(ChoiKind::matrix, std::move(out_spaces), std::move(out));
}

ChoiObject tensor(const ChoiObject &a, const ChoiObject &b) {
    for (const auto &s : a.spaces()) {
        if (has_space(b.spaces(), s.name)) {
            throw SpaceCollision("tensor operands share space '" + s.name + "'");
        }
    }
    return link_product(a, b);
}

ChoiObject partial_trace(const ChoiObject &a, const std::set<std::string> &over) {
    if (a.kind() != ChoiKind::matrix) {
        throw DimensionMismatch("partial_trace needs a matrix");
    }
    SpaceList kept, traced;
    for (const auto &s : a.spaces()) {
        (over.count(s.name) ? traced : kept).push_back(s);
    }
    if (traced.size() != over.size()) {
        for (const auto &name : over) {
            if (!has_space(a.spaces(), name)) {
                throw UnknownSpace("no space named '" + name + "'");
            }
        }
    }
    SpaceList order = kept;
    order.insert(order.end(), traced.begin(), traced.end());
    Matrix ad = a.permuted(order).data();
    int64_t dk = total_dim(kept);
    int64_t dt = total_dim(traced);
    Matrix out = Matrix::Zero(dk, dk);
    for (int64_t i = 0; i < dk; i++) {
        for (int64_t j = 0; j < dk; j++) {
            Complex acc = 0;
            for (int64_t t = 0; t < dt; t++) {
                acc += ad(i * dt + t, j * dt + t);
            }
            out(i, j) = acc;
        }
    }
    return ChoiObject(ChoiKind::matrix, std::move(kept), std::move(out));
}

ChoiObject trace_and_replace(const ChoiObject &a, const std::string &x) {
    size_t pos = space_index(a.spaces(), x);
    int64_t dx = a.spaces()[pos].dim;
    ChoiObject tr = partial_trace(a, {x});
    SpaceList order = tr.spaces();
    order.push_back(a.spaces()[pos]);
    int64_t dk = tr.dim();
    Matrix out(dk * dx, dk * dx);
    for (int64_t i = 0; i < dk; i++) {
        for (int64_t j = 0; j < dk; j++) {
            Complex v = tr.data()(i, j) / static_cast<double>(dx);
            for (int64_t s = 0; s < dx; s++) {
                for (int64_t t = 0; t < dx; t++) {
                    out(i * dx + s, j * dx + t) = s == t ? v : Complex(0);
                }
            }
        }
    }
    return ChoiObject(ChoiKind::matrix, std::move(order), std::move(out)).permuted(a.spaces());
}

ChoiObject trace_and_replace(const ChoiObject &a, const std::set<std::string> &xs) {
    ChoiObject out = a;
    for (const auto &x : xs) {
        out = trace_and_replace(out, x);
    }
    return out;
}

ChoiObject one_minus(const ChoiObject &a, const std::string &x) {
    ChoiObject t = trace_and_replace(a, x);
    return ChoiObject(a.kind(), a.spaces(), a.data() - t.data());
}

Matrix apply_channel(const ChoiObject &choi, const Matrix &state) {
    if (choi.kind() != ChoiKind::matrix || choi.spaces().empty()) {
        throw DimensionMismatch("apply_channel needs a matrix with an input space first");
    }
    int64_t d_in = choi.spaces().front().dim;
    if (state.rows() != d_in || state.cols() != d_in) {
        throw DimensionMismatch("state dimension does not match the channel input space");
    }
    int64_t d_out = choi.dim() / d_in;
    Matrix out = Matrix::Zero(d_out, d_out);
    for (int64_t o = 0; o < d_out; o++) {
        for (int64_t op = 0; op < d_out; op++) {
            Complex acc = 0;
            for (int64_t i = 0; i < d_in; i++) {
                for (int64_t k = 0; k < d_in; k++) {
                    acc += state(k, i) * choi.data()(k * d_out + o, i * d_out + op);
                }
            }
            out(o, op) = acc;
        }
    }
    return out;
}

ChoiObject from_json(const std::string &json_text) {
    auto j = nlohmann::json::parse(json_text);
    SpaceList spaces;
    for (const auto &s : j.at("spaces")) {
        spaces.push_back({s.at("name").get<std::string>(), s.at("dim").get<int64_t>()});
    }
    ChoiKind kind = j.at("kind").get<std::string>() == "matrix" ? ChoiKind::matrix : ChoiKind::vector;
    int64_t d = total_dim(spaces);
    int64_t cols = kind == ChoiKind::matrix ? d : 1;
    Matrix data(d, cols);
    const auto &entries = j.at("data");
    if (static_cast<int64_t>(entries.size()) != d * cols) {
        throw ParseError("data length does not match the declared spaces");
    }
    for (int64_t i = 0; i < d; i++) {
        for (int64_t c = 0; c < cols; c++) {
            const auto &e = entries[i * cols + c];
            data(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return ChoiObject(kind, std::move(spaces), std::move(data));
}

}  // namespace smq
