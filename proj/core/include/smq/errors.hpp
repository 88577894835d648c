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

#include <stdexcept>
#include <string>

namespace smq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct NonIsometry : Error {
    using Error::Error;
};
struct SpaceCollision : Error {
    using Error::Error;
};
struct UnknownSpace : Error {
    using Error::Error;
};
struct NonTracePreserving : Error {
    using Error::Error;
};
struct SolverFailure : Error {
    using Error::Error;
};
struct SizeCap : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct NumericalBreakdown : Error {
    using Error::Error;
};
struct CertificationFailed : Error {
    using Error::Error;
};

}  // namespace smq
