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
#include <map>
#include <string>
#include <vector>

#include "smq/errors.hpp"

namespace smq {

/// An n-bit Boolean function as a truth table.
///
/// Bit order convention: the input x = (x_1,...,x_n) indexes table position
/// p = sum_j x_j 2^(n-j), i.e. x_1 is the most significant bit, and the id is
/// the table read as a big-endian integer (table[0] is the id's top bit).
class BooleanFunction {
   public:
    BooleanFunction(int n, uint64_t id);
    BooleanFunction(int n, std::vector<uint8_t> table);

    int n() const {
        return n_;
    }
    uint64_t id() const;
    const std::vector<uint8_t> &table() const {
        return table_;
    }
    /// Value at the input whose bits are x (x_1 in the most significant position).
    int value(uint64_t x) const {
        return table_[x];
    }
    size_t num_inputs() const {
        return table_.size();
    }

   private:
    int n_;
    std::vector<uint8_t> table_;
};

/// Real multilinear polynomial over x_1..x_n, stored as subset -> coefficient.
/// Subset mask bit j-1 corresponds to the variable x_j.
struct MultilinearPoly {
    int n = 0;
    std::map<uint32_t, double> coeffs;

    double evaluate(uint64_t x_bits) const;
    /// Evaluate at a function input (x_1 in the most significant of n bits).
    double at_input(uint64_t x) const;
    int degree(double zero_tol = 0.0) const;
    /// Drops coefficients with magnitude <= tol.
    MultilinearPoly truncated(double tol) const;
    /// Sorted-monomial canonical text form, e.g. "1 - 2*x1*x3 + x2".
    std::string to_string() const;
};

/// Unique multilinear polynomial representing f, by Moebius inversion.
MultilinearPoly multilinear_interpolate(const BooleanFunction &f);

int degree(const BooleanFunction &f);

/// Smallest d such that some degree-<=d multilinear g has max_x |g(x)-f(x)| <= eps.
int approx_degree(const BooleanFunction &f, double eps = 1.0 / 3.0);

/// A negate-permute-negate input/output relabeling.
/// Acts as f'(x) = output_flip XOR f(pi(x) XOR input_flips), where bit j of
/// pi(x) is bit perm[j] of x (0-based from x_1).
struct NpnTransform {
    std::vector<int> perm;
    uint64_t input_flips = 0;
    bool output_flip = false;
};

BooleanFunction apply_npn_transform(const BooleanFunction &f, const NpnTransform &t);

struct NpnCanonical {
    uint64_t canonical_id;
    NpnTransform transform;  // witness: applying it to f yields the canonical function
};

NpnCanonical npn_canonical(const BooleanFunction &f);

/// All canonical representative ids for n-bit functions (n <= 4), sorted,
/// with class sizes.
std::vector<std::pair<uint64_t, uint64_t>> npn_classes(int n);

}  // namespace smq
