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

#include "smq/rational.hpp"
#include "smq/sdp.hpp"

namespace smq {

struct CertifyOptions {
    /// Denominator bound for the initial rationalization step; entries are
    /// rounded to the dyadic grid with the largest power-of-two denominator
    /// not exceeding this, keeping exact PSD checks on a common denominator.
    int64_t max_denominator = 1000000;
    /// Extra exact dyadic bisection steps tightening each mixing parameter
    /// after the first verified value. Each step costs one exact PSD check.
    int refine_steps = 3;
};

/// An exact-rational feasible point of the error SDP (upper: primal
/// superinstrument; lower: dual multipliers + cone element), carrying a
/// rigorous bound on the minimum error. Every claim re-verifies from
/// scratch in exact arithmetic via verify_certificate.
struct BoundCertificate {
    enum class Kind { lower, upper };

    Kind kind = Kind::lower;
    BooleanFunction f{1, uint64_t{0}};
    int T = 1;
    SupermapClass cls = SupermapClass::Gen;
    ProcessScenario scenario;
    Rational value;

    std::vector<Rational> lambdas;  // lower: multiplier per input x
    RationalChoi s_final;           // lower: dual cone element
    RationalChoi w0, w1;            // upper: superinstrument parts

    std::vector<std::string> transcript;

    std::string to_text() const;
    static BoundCertificate from_text(const std::string &text);
};

/// Exact oracle Choi matrix on the scenario's contracted slot spaces
/// (entries are 0 and +-1, so this is exact by construction).
RationalChoi rational_oracle(const ProcessScenario &sc, int n, uint64_t x);

/// Turns a floating-point dual solution into an exact lower bound:
/// rationalize and clamp the multipliers, repair their sum, rationalize and
/// Hermitize the cone element, project it exactly onto the dual cone, mix
/// toward the identity until PSD, then pad with the smallest multiplier
/// operators keeping both outcome constraints PSD.
BoundCertificate certify_lower(const BooleanFunction &f, int T, SupermapClass cls,
                               const DualSolution &dual, const CertifyOptions &opts = {});

/// Turns a floating-point superinstrument into an exact upper bound:
/// rationalize, Hermitize, split the exact subspace-projection correction
/// evenly, mix toward the identity until PSD, and renormalize the trace.
BoundCertificate certify_upper(const BooleanFunction &f, int T, SupermapClass cls,
                               const Superinstrument &primal, const CertifyOptions &opts = {});

/// From-scratch re-check of every constraint the certificate claims, using
/// exact arithmetic only. Returns false with a reason on any violation.
bool verify_certificate(const BoundCertificate &cert, std::string *reason = nullptr);

}  // namespace smq
