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

#include <iosfwd>
#include <string>

#include "smq/conic/problem.hpp"

namespace smq::conic {

/// Line-oriented text format for cone programs. Floating point values are
/// written with shortest-round-trip precision, so write/read is lossless.
void write_problem(std::ostream &out, const Problem &problem);
Problem read_problem(std::istream &in);

void write_problem_file(const std::string &path, const Problem &problem);
Problem read_problem_file(const std::string &path);

}  // namespace smq::conic
