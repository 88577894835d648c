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

#include "smq/boolean.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "smq/conic/solver.hpp"

namespace smq {

namespace {

void check_n(int n) {
    if (n < 1 || n > 6) {
        throw SizeCap("n must be in 1..6, got " + std::to_string(n));
    }
}

// Table position p uses x_1 as the most significant bit; coefficient masks use
// bit j-1 for x_j. Converting between the two reverses the bit order.
uint64_t reverse_bits(uint64_t v, int n) {
    uint64_t out = 0;
    for (int i = 0; i < n; i++) {
        out |= ((v >> i) & 1) << (n - 1 - i);
    }
    return out;
}

}  // namespace

BooleanFunction::BooleanFunction(int n, uint64_t id) : n_(n) {
    check_n(n);
    size_t size = size_t{1} << n;
    if (n < 6 && id >> size != 0) {
        throw DimensionMismatch("id " + std::to_string(id) + " out of range for n=" + std::to_string(n));
    }
    table_.resize(size);
    for (size_t p = 0; p < size; p++) {
        table_[p] = (id >> (size - 1 - p)) & 1;
    }
}

BooleanFunction::BooleanFunction(int n, std::vector<uint8_t> table) : n_(n), table_(std::move(table)) {
    check_n(n);
    if (table_.size() != size_t{1} << n) {
        throw DimensionMismatch("table length does not match n");
    }
    for (auto v : table_) {
        if (v > 1) {
            throw DimensionMismatch("table entries must be 0 or 1");
        }
    }
}

uint64_t BooleanFunction::id() const {
    uint64_t id = 0;
    for (size_t p = 0; p < table_.size(); p++) {
        id |= uint64_t{table_[p]} << (table_.size() - 1 - p);
    }
    return id;
}

double MultilinearPoly::evaluate(uint64_t x_bits) const {
    double acc = 0;
    for (const auto &[mask, coeff] : coeffs) {
        if ((mask & ~x_bits) == 0) {
            acc += coeff;
        }
    }
    return acc;
}

double MultilinearPoly::at_input(uint64_t x) const {
    uint64_t bits = 0;
    for (int j = 0; j < n; j++) {
        bits |= ((x >> (n - 1 - j)) & 1) << j;
    }
    return evaluate(bits);
}

int MultilinearPoly::degree(double zero_tol) const {
    int d = 0;
    for (const auto &[mask, coeff] : coeffs) {
        if (std::abs(coeff) > zero_tol) {
            d = std::max(d, std::popcount(mask));
        }
    }
    return d;
}

MultilinearPoly MultilinearPoly::truncated(double tol) const {
    MultilinearPoly out;
    out.n = n;
    for (const auto &[mask, coeff] : coeffs) {
        if (std::abs(coeff) > tol) {
            out.coeffs[mask] = coeff;
        }
    }
    return out;
}

std::string MultilinearPoly::to_string() const {
    std::vector<std::pair<uint32_t, double>> terms(coeffs.begin(), coeffs.end());
    std::sort(terms.begin(), terms.end(), [](const auto &a, const auto &b) {
        int da = std::popcount(a.first), db = std::popcount(b.first);
        return da != db ? da < db : a.first < b.first;
    });
    std::ostringstream out;
    bool first = true;
    for (const auto &[mask, coeff] : terms) {
        if (coeff == 0) {
            continue;
        }
        double mag = std::abs(coeff);
        if (first) {
            if (coeff < 0) {
                out << "-";
            }
            first = false;
        } else {
            out << (coeff < 0 ? " - " : " + ");
        }
        bool unit = mag == 1.0;
        if (!unit || mask == 0) {
            if (mag == std::floor(mag) && mag < 1e15) {
                out << static_cast<int64_t>(mag);
            } else {
                out << mag;
            }
        }
        bool printed_coeff = !unit || mask == 0;
        for (int j = 0; j < 32; j++) {
            if ((mask >> j) & 1) {
                if (printed_coeff) {
                    out << "*";
                }
                out << "x" << (j + 1);
                printed_coeff = true;
            }
        }
    }
    if (first) {
        out << "0";
    }
    return out.str();
}

MultilinearPoly multilinear_interpolate(const BooleanFunction &f) {
    int n = f.n();
    size_t size = size_t{1} << n;
    std::vector<double> g(size);
    for (size_t mask = 0; mask < size; mask++) {
        g[mask] = f.value(reverse_bits(mask, n));
    }
    for (int i = 0; i < n; i++) {
        for (size_t mask = 0; mask < size; mask++) {
            if ((mask >> i) & 1) {
                g[mask] -= g[mask ^ (size_t{1} << i)];
            }
        }
    }
    MultilinearPoly out;
    out.n = n;
    for (size_t mask = 0; mask < size; mask++) {
        if (g[mask] != 0) {
            out.coeffs[static_cast<uint32_t>(mask)] = g[mask];
        }
    }
    return out;
}

int degree(const BooleanFunction &f) {
    return multilinear_interpolate(f).degree(0.5);
}

namespace {

// Best uniform approximation error by a degree-<=d multilinear polynomial,
// as a small LP.
double best_uniform_error(const BooleanFunction &f, int d) {
    int n = f.n();
    size_t size = size_t{1} << n;
    std::vector<uint32_t> monomials;
    for (uint32_t mask = 0; mask < size; mask++) {
        if (std::popcount(mask) <= d) {
            monomials.push_back(mask);
        }
    }
    conic::Problem p;
    p.num_vars = 1 + static_cast<int64_t>(monomials.size());
    int64_t row = 0;
    for (size_t pos = 0; pos < size; pos++) {
        uint64_t x_bits = reverse_bits(pos, n);
        double fv = f.value(pos);
        // g(x) - f(x) <= t and f(x) - g(x) <= t
        for (int sign : {1, -1}) {
            p.entries.push_back({row, 0, -1.0});
            for (size_t k = 0; k < monomials.size(); k++) {
                if ((monomials[k] & ~x_bits) == 0) {
                    p.entries.push_back({row, static_cast<int64_t>(k + 1), double(sign)});
                }
            }
            p.b.push_back(sign > 0 ? fv : -fv);
            row++;
        }
    }
    p.entries.push_back({row, 0, -1.0});
    p.b.push_back(0);
    row++;
    p.cones.push_back({conic::ConeType::nonneg, row});
    p.c.assign(p.num_vars, 0.0);
    p.c[0] = 1.0;

    conic::SolverConfig cfg;
    cfg.tol = 1e-9;
    auto sol = conic::solve(p, cfg);
    if (sol.status != conic::SolveStatus::optimal && sol.status != conic::SolveStatus::inaccurate) {
        throw SolverFailure("uniform approximation LP failed: " + conic::to_string(sol.status));
    }
    return sol.primal_objective;
}

}  // namespace

int approx_degree(const BooleanFunction &f, double eps) {
    int lo = 0, hi = degree(f);
    if (best_uniform_error(f, lo) <= eps + 1e-7) {
        return 0;
    }
    // invariant: lo infeasible, hi feasible
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (best_uniform_error(f, mid) <= eps + 1e-7) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

BooleanFunction apply_npn_transform(const BooleanFunction &f, const NpnTransform &t) {
    int n = f.n();
    if (static_cast<int>(t.perm.size()) != n) {
        throw DimensionMismatch("permutation length does not match n");
    }
    size_t size = size_t{1} << n;
    std::vector<uint8_t> table(size);
    for (size_t p = 0; p < size; p++) {
        size_t r = 0;
        for (int j = 0; j < n; j++) {
            uint64_t bit = (p >> (n - 1 - t.perm[j])) & 1;
            bit ^= (t.input_flips >> (n - 1 - j)) & 1;
            r |= bit << (n - 1 - j);
        }
        table[p] = static_cast<uint8_t>(f.value(r) ^ (t.output_flip ? 1 : 0));
    }
    return BooleanFunction(n, std::move(table));
}

namespace {

struct TransformTable {
    // For each (permutation, input flips): the source table position for each
    // output position.
    std::vector<NpnTransform> transforms;
    std::vector<std::vector<uint32_t>> maps;
};

TransformTable build_transforms(int n) {
    TransformTable tt;
    size_t size = size_t{1} << n;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (uint64_t flips = 0; flips < size; flips++) {
            NpnTransform t{perm, flips, false};
            std::vector<uint32_t> map(size);
            for (size_t p = 0; p < size; p++) {
                size_t r = 0;
                for (int j = 0; j < n; j++) {
                    uint64_t bit = (p >> (n - 1 - perm[j])) & 1;
                    bit ^= (flips >> (n - 1 - j)) & 1;
                    r |= bit << (n - 1 - j);
                }
                map[p] = static_cast<uint32_t>(r);
            }
            tt.transforms.push_back(std::move(t));
            tt.maps.push_back(std::move(map));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return tt;
}

uint64_t transformed_id(const std::vector<uint8_t> &table, const std::vector<uint32_t> &map, bool flip) {
    size_t size = table.size();
    uint64_t id = 0;
    for (size_t p = 0; p < size; p++) {
        id |= uint64_t{static_cast<uint8_t>(table[map[p]] ^ (flip ? 1 : 0))} << (size - 1 - p);
    }
    return id;
}

}  // namespace

NpnCanonical npn_canonical(const BooleanFunction &f) {
    int n = f.n();
    if (n > 4) {
        throw SizeCap("relabeling canonicalization supports n <= 4");
    }
    TransformTable tt = build_transforms(n);
    NpnCanonical best;
    best.canonical_id = ~uint64_t{0};
    for (size_t i = 0; i < tt.maps.size(); i++) {
        for (bool flip : {false, true}) {
            uint64_t id = transformed_id(f.table(), tt.maps[i], flip);
            if (id < best.canonical_id) {
                best.canonical_id = id;
                best.transform = tt.transforms[i];
                best.transform.output_flip = flip;
            }
        }
    }
    return best;
}

std::vector<std::pair<uint64_t, uint64_t>> npn_classes(int n) {
    if (n > 4) {
        throw SizeCap("class enumeration supports n <= 4");
    }
    check_n(n);
    TransformTable tt = build_transforms(n);
    size_t size = size_t{1} << n;
    uint64_t num_functions = uint64_t{1} << size;
    std::map<uint64_t, uint64_t> counts;
    std::vector<uint8_t> table(size);
    for (uint64_t id = 0; id < num_functions; id++) {
        for (size_t p = 0; p < size; p++) {
            table[p] = (id >> (size - 1 - p)) & 1;
        }
        uint64_t best = ~uint64_t{0};
        for (const auto &map : tt.maps) {
            for (bool flip : {false, true}) {
                best = std::min(best, transformed_id(table, map, flip));
            }
        }
        counts[best]++;
    }
    return {counts.begin(), counts.end()};
}

}  // namespace smq
