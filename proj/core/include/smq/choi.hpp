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

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "smq/spaces.hpp"

namespace smq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class ChoiKind { matrix, vector };

/// A dense operator or vector over an ordered list of named tensor factors.
///
/// For kind=matrix `data` is a D x D matrix, for kind=vector a D x 1 column,
/// with D the product of the space dimensions and basis indices enumerated
/// row-major in listed space order.
class ChoiObject {
   public:
    ChoiObject() = default;
    ChoiObject(ChoiKind kind, SpaceList spaces, Matrix data);

    ChoiKind kind() const {
        return kind_;
    }
    const SpaceList &spaces() const {
        return spaces_;
    }
    const Matrix &data() const {
        return data_;
    }
    int64_t dim() const {
        return data_.rows();
    }

    /// Same object with tensor factors listed in a different order.
    ChoiObject permuted(const SpaceList &new_order) const;

    /// Same object with one space renamed (dimension unchanged).
    ChoiObject renamed(const std::string &old_name, const std::string &new_name) const;
    ChoiObject renamed(const std::vector<std::pair<std::string, std::string>> &renames) const;

    bool is_hermitian(double tol = 1e-10) const;

    /// Debug dump: {spaces:[{name,dim}...], kind, data:[[re,im]...]}.
    std::string to_json() const;

   private:
    ChoiKind kind_ = ChoiKind::matrix;
    SpaceList spaces_;
    Matrix data_;
};

}  // namespace smq
