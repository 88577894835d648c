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

#include "smq/choi.hpp"

#include <nlohmann/json.hpp>
#include <unordered_set>

namespace smq {

void check_unique_names(const SpaceList &spaces) {
    std::unordered_set<std::string> seen;
    for (const auto &s : spaces) {
        if (s.dim < 1) {
            throw DimensionMismatch("space '" + s.name + "' has dim " + std::to_string(s.dim));
        }
        if (!seen.insert(s.name).second) {
            throw SpaceCollision("space '" + s.name + "' appears twice");
        }
    }
}

std::vector<size_t> space_permutation(const SpaceList &from, const SpaceList &to) {
    if (from.size() != to.size()) {
        throw DimensionMismatch("space lists differ in length");
    }
    std::vector<size_t> perm(to.size());
    for (size_t i = 0; i < to.size(); i++) {
        size_t j = space_index(from, to[i].name);
        if (from[j].dim != to[i].dim) {
            throw DimensionMismatch("space '" + to[i].name + "' changes dimension");
        }
        perm[i] = j;
    }
    return perm;
}

ChoiObject::ChoiObject(ChoiKind kind, SpaceList spaces, Matrix data)
    : kind_(kind), spaces_(std::move(spaces)), data_(std::move(data)) {
    check_unique_names(spaces_);
    int64_t d = total_dim(spaces_);
    if (data_.rows() != d) {
        throw DimensionMismatch(
            "data has " + std::to_string(data_.rows()) + " rows, spaces give " + std::to_string(d));
    }
    int64_t want_cols = kind_ == ChoiKind::matrix ? d : 1;
    if (data_.cols() != want_cols) {
        throw DimensionMismatch("data has wrong column count for its kind");
    }
}

namespace {

// index_map[i] = flat index in the old order of basis state i of the new order.
std::vector<int64_t> permutation_index_map(const SpaceList &from, const SpaceList &to) {
    auto perm = space_permutation(from, to);
    auto from_strides = strides_of(from);
    int64_t d = total_dim(from);
    std::vector<int64_t> map(d);
    std::vector<int64_t> digits;
    for (int64_t i = 0; i < d; i++) {
        decompose_index(i, to, digits);
        int64_t old_idx = 0;
        for (size_t k = 0; k < perm.size(); k++) {
            old_idx += digits[k] * from_strides[perm[k]];
        }
        map[i] = old_idx;
    }
    return map;
}

}  // namespace

ChoiObject ChoiObject::permuted(const SpaceList &new_order) const {
    auto map = permutation_index_map(spaces_, new_order);
    int64_t d = dim();
    if (kind_ == ChoiKind::vector) {
        Matrix out(d, 1);
        for (int64_t i = 0; i < d; i++) {
            out(i, 0) = data_(map[i], 0);
        }
        return ChoiObject(kind_, new_order, std::move(out));
    }
    Matrix out(d, d);
    for (int64_t i = 0; i < d; i++) {
        for (int64_t j = 0; j < d; j++) {
            out(i, j) = data_(map[i], map[j]);
        }
    }
    return ChoiObject(kind_, new_order, std::move(out));
}

ChoiObject ChoiObject::renamed(const std::string &old_name, const std::string &new_name) const {
    return renamed({{old_name, new_name}});
}

ChoiObject ChoiObject::renamed(const std::vector<std::pair<std::string, std::string>> &renames) const {
    SpaceList spaces = spaces_;
    for (const auto &[old_name, new_name] : renames) {
        spaces[space_index(spaces, old_name)].name = new_name;
    }
    return ChoiObject(kind_, std::move(spaces), data_);
}

bool ChoiObject::is_hermitian(double tol) const {
    if (kind_ != ChoiKind::matrix) {
        return false;
    }
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::string ChoiObject::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_ == ChoiKind::matrix ? "matrix" : "vector";
    j["spaces"] = nlohmann::json::array();
    for (const auto &s : spaces_) {
        j["spaces"].push_back({{"name", s.name}, {"dim", s.dim}});
    }
    auto data = nlohmann::json::array();
    for (int64_t i = 0; i < data_.rows(); i++) {
        for (int64_t c = 0; c < data_.cols(); c++) {
            data.push_back({data_(i, c).real(), data_(i, c).imag()});
        }
    }
    j["data"] = std::move(data);
    return j.dump();
}

}  // namespace smq
