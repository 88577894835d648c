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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smq/errors.hpp"

namespace smq {

/// A named tensor factor of a composite Hilbert space.
struct SpaceLabel {
    std::string name;
    int64_t dim = 1;

    bool operator==(const SpaceLabel &other) const = default;
};

using SpaceList = std::vector<SpaceLabel>;

inline int64_t total_dim(const SpaceList &spaces) {
    int64_t d = 1;
    for (const auto &s : spaces) {
        d *= s.dim;
    }
    return d;
}

inline bool has_space(const SpaceList &spaces, const std::string &name) {
    for (const auto &s : spaces) {
        if (s.name == name) {
            return true;
        }
    }
    return false;
}

inline size_t space_index(const SpaceList &spaces, const std::string &name) {
    for (size_t i = 0; i < spaces.size(); i++) {
        if (spaces[i].name == name) {
            return i;
        }
    }
    throw UnknownSpace("no space named '" + name + "'");
}

/// Row-major strides for the listed space order (first space varies slowest).
inline std::vector<int64_t> strides_of(const SpaceList &spaces) {
    std::vector<int64_t> st(spaces.size());
    int64_t acc = 1;
    for (size_t i = spaces.size(); i-- > 0;) {
        st[i] = acc;
        acc *= spaces[i].dim;
    }
    return st;
}

/// Decomposes a flat index into per-space digits for the listed order.
inline void decompose_index(int64_t idx, const SpaceList &spaces, std::vector<int64_t> &digits) {
    digits.resize(spaces.size());
    for (size_t i = spaces.size(); i-- > 0;) {
        digits[i] = idx % spaces[i].dim;
        idx /= spaces[i].dim;
    }
}

void check_unique_names(const SpaceList &spaces);

/// Permutation mapping: perm[i] = position in `from` of the i-th space of `to`.
std::vector<size_t> space_permutation(const SpaceList &from, const SpaceList &to);

}  // namespace smq
