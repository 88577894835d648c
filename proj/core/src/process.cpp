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

#include "smq/process.hpp"

#include <sstream>

#include "smq/oracle.hpp"
#include "smq/qc.hpp"

namespace smq {

std::string to_string(SupermapClass c) {
    switch (c) {
        case SupermapClass::FO:
            return "FO";
        case SupermapClass::QC:
            return "QC";
        case SupermapClass::Gen:
            return "Gen";
    }
    return "?";
}

SupermapClass supermap_class_from_string(const std::string &s) {
    if (s == "FO" || s == "fo") {
        return SupermapClass::FO;
    }
    if (s == "QC" || s == "qc") {
        return SupermapClass::QC;
    }
    if (s == "Gen" || s == "gen" || s == "GEN") {
        return SupermapClass::Gen;
    }
    throw ParseError("unknown supermap class '" + s + "'");
}

ProcessScenario ProcessScenario::query(int n, int T) {
    return uniform(T, n + 1);
}

ProcessScenario ProcessScenario::uniform(int T, int64_t slot_dim, int64_t d_F, int64_t d_P) {
    ProcessScenario sc;
    sc.T = T;
    sc.d_P = d_P;
    sc.d_F = d_F;
    sc.d_I.assign(T, slot_dim);
    sc.d_O.assign(T, slot_dim);
    return sc;
}

std::string ProcessScenario::ai(int k) const {
    return "A" + std::to_string(k) + "I";
}

std::string ProcessScenario::ao(int k) const {
    return "A" + std::to_string(k) + "O";
}

SpaceList ProcessScenario::full_spaces() const {
    SpaceList out = slot_spaces();
    out.push_back({"F", d_F});
    return out;
}

SpaceList ProcessScenario::slot_spaces() const {
    SpaceList out;
    out.push_back({"P", d_P});
    for (int k = 1; k <= T; k++) {
        out.push_back({ai(k), d_I[k - 1]});
        out.push_back({ao(k), d_O[k - 1]});
    }
    return out;
}

int64_t ProcessScenario::d_out() const {
    int64_t d = d_P;
    for (auto v : d_O) {
        d *= v;
    }
    return d;
}

int64_t ProcessScenario::d_in() const {
    return d_F * d_in_slots();
}

int64_t ProcessScenario::d_in_slots() const {
    int64_t d = 1;
    for (auto v : d_I) {
        d *= v;
    }
    return d;
}

// The validity subspace is cut out by conditions of the form
// prod_{x in remove}(id - R_x) applied after replacing all `replace` factors,
// where R_x is trace-and-replace over x. All elementary maps are commuting
// orthogonal projectors and distinct conditions are mutually orthogonal, so
// the subspace projector is id minus the sum of the condition maps.
std::vector<SubspaceCondition> subspace_conditions(SupermapClass cls, const ProcessScenario &sc,
                                                   bool with_f) {
    std::vector<SubspaceCondition> out;
    int T = sc.T;
    if (cls == SupermapClass::Gen) {
        for (uint32_t k_mask = 1; k_mask < (uint32_t{1} << T); k_mask++) {
            SubspaceCondition c;
            std::ostringstream name;
            name << "K={";
            for (int k = 1; k <= T; k++) {
                if ((k_mask >> (k - 1)) & 1) {
                    c.remove.push_back(sc.ao(k));
                    name << k << ",";
                } else {
                    c.replace.insert(sc.ai(k));
                    c.replace.insert(sc.ao(k));
                }
            }
            if (with_f) {
                c.replace.insert("F");
            }
            c.name = name.str();
            c.name.back() = '}';
            out.push_back(std::move(c));
        }
    } else if (cls == SupermapClass::FO) {
        for (int t = 1; t <= T; t++) {
            SubspaceCondition c;
            c.remove.push_back(sc.ao(t));
            for (int s = t + 1; s <= T; s++) {
                c.replace.insert(sc.ai(s));
                c.replace.insert(sc.ao(s));
            }
            if (with_f) {
                c.replace.insert("F");
            }
            c.name = "t=" + std::to_string(t);
            out.push_back(std::move(c));
        }
    } else {
        throw Error("no linear subspace for the QC class; use the feasibility check");
    }
    if (sc.d_P > 1) {
        SubspaceCondition c;
        c.remove.push_back("P");
        for (int k = 1; k <= T; k++) {
            c.replace.insert(sc.ai(k));
            c.replace.insert(sc.ao(k));
        }
        if (with_f) {
            c.replace.insert("F");
        }
        c.name = "P";
        out.push_back(std::move(c));
    }
    return out;
}

ChoiObject apply_subspace_condition(const ChoiObject &w, const SubspaceCondition &c) {
    ChoiObject m = c.replace.empty() ? w : trace_and_replace(w, c.replace);
    for (const auto &x : c.remove) {
        m = one_minus(m, x);
    }
    return m;
}

namespace {

void check_scenario_spaces(const ChoiObject &w, const ProcessScenario &sc, bool with_f) {
    SpaceList want = with_f ? sc.full_spaces() : sc.slot_spaces();
    if (w.spaces().size() != want.size()) {
        throw DimensionMismatch("operator spaces do not match the scenario");
    }
    for (const auto &s : want) {
        if (!has_space(w.spaces(), s.name) || w.spaces()[space_index(w.spaces(), s.name)].dim != s.dim) {
            throw DimensionMismatch("operator is missing scenario space '" + s.name + "'");
        }
    }
}

}  // namespace

ChoiObject project_subspace(const ChoiObject &w, SupermapClass cls, const ProcessScenario &sc) {
    bool with_f = has_space(w.spaces(), "F");
    check_scenario_spaces(w, sc, with_f);
    Matrix acc = w.data();
    for (const auto &c : subspace_conditions(cls, sc, with_f)) {
        acc -= apply_subspace_condition(w, c).permuted(w.spaces()).data();
    }
    return ChoiObject(ChoiKind::matrix, w.spaces(), std::move(acc));
}

std::string ValidityReport::describe() const {
    std::ostringstream out;
    out << (valid ? "valid" : "invalid: " + violated) << " (min_eig=" << min_eigenvalue
        << ", trace_err=" << trace_error << ", subspace_residual=" << subspace_residual << ")";
    return out.str();
}

ValidityReport is_valid_process(const ChoiObject &w, SupermapClass cls, const ProcessScenario &sc,
                                double tol) {
    if (cls == SupermapClass::QC) {
        return is_valid_qc_process(w, sc, tol);
    }
    bool with_f = has_space(w.spaces(), "F");
    check_scenario_spaces(w, sc, with_f);
    ValidityReport r;
    if (!w.is_hermitian(tol)) {
        r.violated = "hermiticity";
        return r;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((w.data() + w.data().adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.trace_error = std::abs(w.data().trace().real() - static_cast<double>(sc.d_out()));
    double worst = 0;
    std::string worst_name;
    for (const auto &c : subspace_conditions(cls, sc, with_f)) {
        double res = apply_subspace_condition(w, c).data().norm();
        if (res > worst) {
            worst = res;
            worst_name = c.name;
        }
    }
    r.subspace_residual = worst;
    if (r.min_eigenvalue < -tol) {
        r.violated = "positivity";
    } else if (r.trace_error > tol) {
        r.violated = "trace";
    } else if (worst > tol) {
        r.violated = "condition " + worst_name;
    } else {
        r.valid = true;
    }
    return r;
}

ChoiObject build_fo_comb(const std::vector<ChoiObject> &channels, const ProcessScenario &sc) {
    int T = sc.T;
    if (static_cast<int>(channels.size()) != T + 1) {
        throw DimensionMismatch("need T+1 channels, got " + std::to_string(channels.size()));
    }
    for (int t = 1; t <= T + 1; t++) {
        const ChoiObject &v = channels[t - 1];
        std::set<std::string> in_names;
        if (t == 1) {
            in_names = {"P"};
        } else {
            in_names = {sc.ao(t - 1), "alpha" + std::to_string(t - 1)};
        }
        SpaceList in_spaces, out_spaces;
        for (const auto &s : v.spaces()) {
            (in_names.count(s.name) ? in_spaces : out_spaces).push_back(s);
        }
        if (in_spaces.size() != in_names.size()) {
            throw DimensionMismatch("channel " + std::to_string(t) + " is missing an input space");
        }
        ChoiObject reduced = partial_trace(v, [&] {
            std::set<std::string> names;
            for (const auto &s : out_spaces) {
                names.insert(s.name);
            }
            return names;
        }());
        reduced = reduced.permuted(in_spaces);
        int64_t d_in = total_dim(in_spaces);
        if ((reduced.data() - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() > 1e-10) {
            throw NonTracePreserving("channel " + std::to_string(t) + " is not trace-preserving");
        }
    }
    ChoiObject w = channels[0];
    for (size_t i = 1; i < channels.size(); i++) {
        w = link_product(w, channels[i]);
    }
    return w.permuted(sc.full_spaces());
}

double outcome_probability(const ChoiObject &w, uint64_t x, int outcome, const ProcessScenario &sc) {
    int n = static_cast<int>(sc.d_I[0]) - 1;
    ChoiObject m = phase_oracle_choi(n, x, sc.T);
    if (has_space(w.spaces(), "F")) {
        Matrix proj = Matrix::Zero(sc.d_F, sc.d_F);
        proj(outcome, outcome) = 1;
        m = tensor(m, ChoiObject(ChoiKind::matrix, {{"F", sc.d_F}}, std::move(proj)));
    }
    SpaceList order = m.spaces();
    for (const auto &s : w.spaces()) {
        if (!has_space(order, s.name)) {
            if (s.dim != 1) {
                throw DimensionMismatch("space '" + s.name + "' with dim > 1 is not measured");
            }
            order.push_back(s);
        }
    }
    ChoiObject wp = w.permuted(order);
    return (m.data() * wp.data()).trace().real();
}

double evaluate(const ChoiObject &w, const BooleanFunction &f, uint64_t x, const ProcessScenario &sc) {
    if (static_cast<int64_t>(f.n()) + 1 != sc.d_I[0]) {
        throw DimensionMismatch("function bit count does not match the scenario slot dimension");
    }
    return outcome_probability(w, x, f.value(x), sc);
}

}  // namespace smq
