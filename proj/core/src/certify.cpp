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

#include "smq/certify.hpp"

#include <cmath>
#include <sstream>

#include "smq/oracle.hpp"

namespace smq {

namespace {

void require_certifiable(SupermapClass cls) {
    if (cls != SupermapClass::FO && cls != SupermapClass::Gen) {
        throw CertificationFailed("certificates cover the FO and Gen classes only");
    }
}

// Smallest dyadic rational >= v with denominator 2^30.
Rational dyadic_up(double v) {
    const long den = 1L << 30;
    long scaled = static_cast<long>(std::ceil(v * static_cast<double>(den)));
    Rational out(scaled, den);
    out.canonicalize();
    return out;
}

// Nearest rational on the dyadic grid with denominator 2^b <= max_den.
// Keeping every rationalized entry on one power-of-two grid gives the
// certificate matrices a small common denominator, so exact PSD checks can
// run on scalar-scaled integer matrices.
Rational dyadic_rationalize(double v, int64_t max_den) {
    if (!std::isfinite(v)) {
        throw NumericalBreakdown("cannot rationalize a non-finite value");
    }
    int b = 0;
    while (b < 62 && (int64_t{1} << (b + 1)) <= max_den) {
        b++;
    }
    Rational exact(v);
    exact.canonicalize();
    mpz_class num = exact.get_num() << b;
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), exact.get_den().get_mpz_t());
    if (2 * r >= exact.get_den()) {
        q++;
    }
    Rational out(q, mpz_class(1) << b);
    out.canonicalize();
    return out;
}

Rational parse_rational(const std::string &text) {
    Rational r;
    if (r.set_str(text, 10) != 0 || r.get_den() == 0) {
        throw ParseError("bad rational '" + text + "'");
    }
    r.canonicalize();
    return r;
}

double min_eigenvalue(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::string rat_str(const Rational &r) {
    return r.get_str();
}

// (1 - mu) M + mu 1 for every matrix in mats.
bool all_psd_at_mu(const std::vector<const RationalChoi *> &mats, const Rational &mu) {
    for (const auto *m : mats) {
        RationalChoi d = *m;
        d *= Rational(1) - mu;
        for (int64_t i = 0; i < d.dim; i++) {
            d.real_at(i, i) += mu;
        }
        if (!exact_psd_check(d).psd) {
            return false;
        }
    }
    return true;
}

// Smallest identity-mixing weight (up to the refinement budget) making every
// matrix PSD. Float eigenvalues only steer the search; every accepted value
// is verified exactly.
Rational find_mu(const std::vector<const RationalChoi *> &mats, const CertifyOptions &opts,
                 std::vector<std::string> &transcript) {
    double lam = 0;
    for (const auto *m : mats) {
        lam = std::min(lam, min_eigenvalue(m->to_matrix()));
    }
    if (lam >= 0 && all_psd_at_mu(mats, Rational(0))) {
        transcript.push_back("mu = 0");
        return Rational(0);
    }
    double need = std::max(1e-12, -lam / (1.0 - std::min(lam, 0.0)));
    Rational hi = dyadic_up(std::min(1.0, need * 1.25 + 1e-12));
    int guard = 0;
    while (!all_psd_at_mu(mats, hi)) {
        if (hi >= 1) {
            throw CertificationFailed("no identity mixing up to mu = 1 is PSD");
        }
        hi = hi * 2;
        if (hi > 1) {
            hi = 1;
        }
        if (++guard > 64) {
            throw CertificationFailed("identity-mixing search failed to converge");
        }
    }
    Rational lo(0);
    for (int s = 0; s < opts.refine_steps; s++) {
        Rational mid = (lo + hi) / 2;
        if (all_psd_at_mu(mats, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    transcript.push_back("mu = " + rat_str(hi));
    return hi;
}

// S + (eta - 1) O must be PSD; eta = 1 always works since S is PSD.
Rational find_eta(const RationalChoi &s_pos, const RationalChoi &oi, const CertifyOptions &opts,
                  std::vector<std::string> &transcript, const std::string &label) {
    if (oi.is_zero()) {
        transcript.push_back(label + " = 0 (no inputs)");
        return Rational(0);
    }
    auto psd_at = [&](const Rational &eta) {
        RationalChoi m = oi;
        m *= eta - 1;
        m += s_pos;
        return exact_psd_check(m).psd;
    };
    if (psd_at(Rational(0))) {
        transcript.push_back(label + " = 0");
        return Rational(0);
    }
    Matrix sp = s_pos.to_matrix();
    Matrix om = oi.to_matrix();
    double lo_f = 0, hi_f = 1;
    for (int i = 0; i < 40; i++) {
        double mid = (lo_f + hi_f) / 2;
        (min_eigenvalue(sp + (mid - 1) * om) >= 0 ? hi_f : lo_f) = mid;
    }
    Rational hi = dyadic_up(std::min(1.0, hi_f * 1.05 + 1e-9));
    int guard = 0;
    while (!psd_at(hi)) {
        hi = hi * 2;
        if (hi > 1) {
            hi = 1;  // exact fallback: recovers plain S
        }
        if (++guard > 64) {
            throw CertificationFailed("multiplier-padding search failed to converge");
        }
    }
    Rational lo(0);
    for (int s = 0; s < opts.refine_steps; s++) {
        Rational mid = (lo + hi) / 2;
        if (psd_at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    transcript.push_back(label + " = " + rat_str(hi));
    return hi;
}

RationalChoi rationalized_on_slots(const ChoiObject &w, const ProcessScenario &sc,
                                   int64_t max_den) {
    ChoiObject p = w.permuted(sc.slot_spaces());
    RationalChoi out(sc.slot_spaces());
    for (int64_t r = 0; r < out.dim; r++) {
        for (int64_t c = 0; c < out.dim; c++) {
            out.real_at(r, c) = dyadic_rationalize(p.data()(r, c).real(), max_den);
            out.imag_at(r, c) = dyadic_rationalize(p.data()(r, c).imag(), max_den);
        }
    }
    return out;
}

}  // namespace

RationalChoi rational_oracle(const ProcessScenario &sc, int n, uint64_t x) {
    ChoiObject o = phase_oracle_choi(n, x, sc.T);
    SpaceList order;
    for (const auto &s : sc.slot_spaces()) {
        if (has_space(o.spaces(), s.name)) {
            order.push_back(s);
        }
    }
    Matrix m = o.permuted(order).data();
    // The global past is trivial, so flat indices coincide with the slot
    // space order including P.
    RationalChoi out(sc.slot_spaces());
    for (int64_t r = 0; r < out.dim; r++) {
        for (int64_t c = 0; c < out.dim; c++) {
            double v = m(r, c).real();
            if (v != 0) {
                out.real_at(r, c) = rationalize(v, 4);
            }
        }
    }
    return out;
}

BoundCertificate certify_lower(const BooleanFunction &f, int T, SupermapClass cls,
                               const DualSolution &dual, const CertifyOptions &opts) {
    require_certifiable(cls);
    BoundCertificate cert;
    cert.kind = BoundCertificate::Kind::lower;
    cert.f = f;
    cert.T = T;
    cert.cls = cls;
    cert.scenario = ProcessScenario::query(f.n(), T);
    const ProcessScenario &sc = cert.scenario;

    int64_t num_x = int64_t{1} << f.n();
    if (dual.lambdas.size() != num_x) {
        throw DimensionMismatch("dual multiplier count does not match the input count");
    }
    cert.lambdas.resize(num_x);
    Rational sum(0);
    for (int64_t x = 0; x < num_x; x++) {
        cert.lambdas[x] = dyadic_rationalize(std::max(dual.lambdas[x], 0.0), opts.max_denominator);
        sum += cert.lambdas[x];
    }
    Rational delta = 1 - sum;
    if (delta < 0) {
        // Largest self-consistent correction set: N entries that each absorb
        // delta / N without going negative.
        int64_t big = num_x;
        while (true) {
            Rational thr = -delta / big;
            int64_t cnt = 0;
            for (const auto &l : cert.lambdas) {
                cnt += l >= thr;
            }
            if (cnt == big) {
                break;
            }
            if (cnt == 0) {
                throw CertificationFailed("multiplier sum cannot be repaired");
            }
            big = cnt;
        }
        Rational thr = -delta / big;
        for (auto &l : cert.lambdas) {
            if (l >= thr) {
                l += delta / big;
            }
        }
        cert.transcript.push_back("delta = " + rat_str(delta) + ", N = " + std::to_string(big));
    } else {
        cert.transcript.push_back("delta = " + rat_str(delta));
    }

    RationalChoi s_herm = rationalized_on_slots(dual.wbar, sc, opts.max_denominator).hermitized();
    RationalChoi s_valid = exact_project_dual_cone(s_herm, cls, sc);

    Rational mu = find_mu({&s_valid}, opts, cert.transcript);
    RationalChoi s_pos = s_valid;
    s_pos *= Rational(1) - mu;
    for (int64_t i = 0; i < s_pos.dim; i++) {
        s_pos.real_at(i, i) += mu;
    }

    RationalChoi o0(sc.slot_spaces()), o1(sc.slot_spaces());
    for (int64_t x = 0; x < num_x; x++) {
        if (cert.lambdas[x] == 0) {
            continue;
        }
        RationalChoi ox = rational_oracle(sc, f.n(), x);
        ox *= cert.lambdas[x];
        (f.value(x) ? o1 : o0) += ox;
    }
    Rational eta0 = find_eta(s_pos, o0, opts, cert.transcript, "eta0");
    Rational eta1 = find_eta(s_pos, o1, opts, cert.transcript, "eta1");

    cert.s_final = s_pos;
    RationalChoi pad0 = o0;
    pad0 *= eta0;
    cert.s_final += pad0;
    RationalChoi pad1 = o1;
    pad1 *= eta1;
    cert.s_final += pad1;

    Rational lam_sum(0);
    for (const auto &l : cert.lambdas) {
        lam_sum += l;
    }
    cert.value = lam_sum - cert.s_final.trace() / sc.d_in_slots();
    cert.transcript.push_back("bound = " + rat_str(cert.value));
    return cert;
}

BoundCertificate certify_upper(const BooleanFunction &f, int T, SupermapClass cls,
                               const Superinstrument &primal, const CertifyOptions &opts) {
    require_certifiable(cls);
    BoundCertificate cert;
    cert.kind = BoundCertificate::Kind::upper;
    cert.f = f;
    cert.T = T;
    cert.cls = cls;
    cert.scenario = ProcessScenario::query(f.n(), T);
    const ProcessScenario &sc = cert.scenario;

    RationalChoi w0 = rationalized_on_slots(primal.w0, sc, opts.max_denominator).hermitized();
    RationalChoi w1 = rationalized_on_slots(primal.w1, sc, opts.max_denominator).hermitized();

    RationalChoi sum = w0;
    sum += w1;
    RationalChoi corr = exact_project_subspace(sum, cls, sc);
    corr -= sum;
    corr *= Rational(1, 2);
    w0 += corr;
    w1 += corr;

    Rational mu = find_mu({&w0, &w1}, opts, cert.transcript);
    for (RationalChoi *w : {&w0, &w1}) {
        *w *= Rational(1) - mu;
        for (int64_t i = 0; i < w->dim; i++) {
            w->real_at(i, i) += mu;
        }
    }

    Rational total = w0.trace() + w1.trace();
    if (total <= 0) {
        throw CertificationFailed("superinstrument trace vanished");
    }
    Rational factor = Rational(sc.d_out()) / total;
    w0 *= factor;
    w1 *= factor;
    cert.w0 = std::move(w0);
    cert.w1 = std::move(w1);

    Rational worst(1);
    bool seen = false;
    int64_t num_x = int64_t{1} << f.n();
    for (int64_t x = 0; x < num_x; x++) {
        RationalChoi ox = rational_oracle(sc, f.n(), x);
        Rational p = rational_trace_product(f.value(x) ? cert.w1 : cert.w0, ox);
        if (!seen || p < worst) {
            worst = p;
            seen = true;
        }
    }
    cert.value = 1 - worst;
    cert.transcript.push_back("bound = " + rat_str(cert.value));
    return cert;
}

bool verify_certificate(const BoundCertificate &cert, std::string *reason) {
    auto fail = [&](const std::string &why) {
        if (reason) {
            *reason = why;
        }
        return false;
    };
    const ProcessScenario &sc = cert.scenario;
    ProcessScenario expect = ProcessScenario::query(cert.f.n(), cert.T);
    if (sc.T != expect.T || sc.d_I != expect.d_I || sc.d_O != expect.d_O) {
        return fail("scenario does not match the function and query count");
    }
    if (cert.cls != SupermapClass::FO && cert.cls != SupermapClass::Gen) {
        return fail("unsupported supermap class");
    }
    int64_t num_x = int64_t{1} << cert.f.n();

    if (cert.kind == BoundCertificate::Kind::lower) {
        if (static_cast<int64_t>(cert.lambdas.size()) != num_x) {
            return fail("multiplier count mismatch");
        }
        Rational sum(0);
        for (const auto &l : cert.lambdas) {
            if (l < 0) {
                return fail("negative multiplier");
            }
            sum += l;
        }
        if (sum > 1) {
            return fail("multiplier sum exceeds 1");
        }
        const RationalChoi &s = cert.s_final;
        if (total_dim(sc.slot_spaces()) != s.dim) {
            return fail("cone element dimension mismatch");
        }
        if (!s.is_hermitian()) {
            return fail("cone element is not Hermitian");
        }
        if (!(exact_project_dual_cone(s, cert.cls, sc) == s)) {
            return fail("cone element is not a dual-cone fixed point");
        }
        for (int i = 0; i < 2; i++) {
            RationalChoi m = s;
            for (int64_t x = 0; x < num_x; x++) {
                if (cert.f.value(x) != i || cert.lambdas[x] == 0) {
                    continue;
                }
                RationalChoi ox = rational_oracle(sc, cert.f.n(), x);
                ox *= cert.lambdas[x];
                m -= ox;
            }
            if (!exact_psd_check(m).psd) {
                return fail("outcome " + std::to_string(i) + " dual constraint is not PSD");
            }
        }
        if (cert.value != sum - s.trace() / sc.d_in_slots()) {
            return fail("stated bound does not match the witness");
        }
        return true;
    }

    for (const RationalChoi *w : {&cert.w0, &cert.w1}) {
        if (total_dim(sc.slot_spaces()) != w->dim) {
            return fail("superinstrument dimension mismatch");
        }
        if (!w->is_hermitian()) {
            return fail("superinstrument part is not Hermitian");
        }
        if (!exact_psd_check(*w).psd) {
            return fail("superinstrument part is not PSD");
        }
    }
    RationalChoi sum = cert.w0;
    sum += cert.w1;
    if (sum.trace() != sc.d_out()) {
        return fail("superinstrument trace is wrong");
    }
    for (const auto &c : subspace_conditions(cert.cls, sc, false)) {
        if (!rational_apply_condition(sum, c).is_zero()) {
            return fail("subspace condition '" + c.name + "' violated");
        }
    }
    Rational worst(1);
    bool seen = false;
    for (int64_t x = 0; x < num_x; x++) {
        RationalChoi ox = rational_oracle(sc, cert.f.n(), x);
        Rational p = rational_trace_product(cert.f.value(x) ? cert.w1 : cert.w0, ox);
        if (!seen || p < worst) {
            worst = p;
            seen = true;
        }
    }
    if (cert.value != 1 - worst) {
        return fail("stated bound does not match the witness");
    }
    return true;
}

namespace {

void write_matrix(std::ostringstream &out, const std::string &name, const RationalChoi &m) {
    int64_t nnz = 0;
    for (int64_t r = 0; r < m.dim; r++) {
        for (int64_t c = 0; c < m.dim; c++) {
            nnz += m.real_at(r, c) != 0 || m.imag_at(r, c) != 0;
        }
    }
    out << "matrix " << name << " " << m.dim << " " << nnz << "\n";
    for (int64_t r = 0; r < m.dim; r++) {
        for (int64_t c = 0; c < m.dim; c++) {
            if (m.real_at(r, c) != 0 || m.imag_at(r, c) != 0) {
                out << r << " " << c << " " << m.real_at(r, c).get_str() << " "
                    << m.imag_at(r, c).get_str() << "\n";
            }
        }
    }
}

RationalChoi read_matrix(std::istream &in, const std::string &want, const SpaceList &spaces) {
    std::string tag, name;
    int64_t dim = 0, nnz = 0;
    in >> tag >> name >> dim >> nnz;
    if (tag != "matrix" || name != want) {
        throw ParseError("expected matrix " + want);
    }
    RationalChoi m(spaces);
    if (m.dim != dim) {
        throw ParseError("matrix dimension does not match the scenario");
    }
    for (int64_t k = 0; k < nnz; k++) {
        int64_t r, c;
        std::string re, im;
        if (!(in >> r >> c >> re >> im)) {
            throw ParseError("truncated matrix entry list");
        }
        if (r < 0 || r >= dim || c < 0 || c >= dim) {
            throw ParseError("matrix entry out of range");
        }
        m.real_at(r, c) = parse_rational(re);
        m.imag_at(r, c) = parse_rational(im);
    }
    return m;
}

}  // namespace

std::string BoundCertificate::to_text() const {
    std::ostringstream out;
    out << "smq-certificate 1\n";
    out << "kind " << (kind == Kind::lower ? "lower" : "upper") << "\n";
    out << "n " << f.n() << "\n";
    out << "id " << f.id() << "\n";
    out << "T " << T << "\n";
    out << "class " << to_string(cls) << "\n";
    out << "value " << value.get_str() << "\n";
    if (kind == Kind::lower) {
        out << "lambdas " << lambdas.size() << "\n";
        for (size_t x = 0; x < lambdas.size(); x++) {
            out << x << " " << lambdas[x].get_str() << "\n";
        }
        write_matrix(out, "S", s_final);
    } else {
        write_matrix(out, "W0", w0);
        write_matrix(out, "W1", w1);
    }
    out << "end\n";
    return out.str();
}

BoundCertificate BoundCertificate::from_text(const std::string &text) {
    std::istringstream in(text);
    std::string tag, val;
    int version = 0;
    in >> tag >> version;
    if (tag != "smq-certificate" || version != 1) {
        throw ParseError("not a certificate file");
    }
    BoundCertificate cert;
    in >> tag >> val;
    if (tag != "kind" || (val != "lower" && val != "upper")) {
        throw ParseError("bad certificate kind");
    }
    cert.kind = val == "lower" ? Kind::lower : Kind::upper;
    int n = 0;
    uint64_t id = 0;
    in >> tag >> n;
    if (tag != "n" || n < 1 || n > 20) {
        throw ParseError("bad input count");
    }
    in >> tag >> id;
    if (tag != "id") {
        throw ParseError("missing function id");
    }
    cert.f = BooleanFunction(n, id);
    in >> tag >> cert.T;
    if (tag != "T" || cert.T < 1) {
        throw ParseError("bad query count");
    }
    in >> tag >> val;
    if (tag != "class") {
        throw ParseError("missing supermap class");
    }
    cert.cls = supermap_class_from_string(val);
    cert.scenario = ProcessScenario::query(n, cert.T);
    in >> tag >> val;
    if (tag != "value") {
        throw ParseError("missing bound value");
    }
    cert.value = parse_rational(val);
    if (cert.kind == Kind::lower) {
        size_t count = 0;
        in >> tag >> count;
        if (tag != "lambdas" || count != size_t{1} << n) {
            throw ParseError("bad multiplier list");
        }
        cert.lambdas.resize(count);
        for (size_t k = 0; k < count; k++) {
            size_t x = 0;
            in >> x >> val;
            if (x >= count) {
                throw ParseError("multiplier index out of range");
            }
            cert.lambdas[x] = parse_rational(val);
        }
        cert.s_final = read_matrix(in, "S", cert.scenario.slot_spaces());
    } else {
        cert.w0 = read_matrix(in, "W0", cert.scenario.slot_spaces());
        cert.w1 = read_matrix(in, "W1", cert.scenario.slot_spaces());
    }
    in >> tag;
    if (tag != "end") {
        throw ParseError("missing end marker");
    }
    return cert;
}

}  // namespace smq
