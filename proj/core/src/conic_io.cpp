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

#include <charconv>
#include <fstream>
#include <sstream>

#include "smq/conic/io.hpp"

namespace smq::conic {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string &tok) {
    double v;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("bad float '" + tok + "'");
    }
    return v;
}

int64_t parse_int(const std::string &tok) {
    int64_t v;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("bad integer '" + tok + "'");
    }
    return v;
}

std::vector<std::string> tokens_of(std::istream &in) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) {
            toks.push_back(t);
        }
        if (!toks.empty()) {
            return toks;
        }
    }
    throw ParseError("unexpected end of input");
}

void expect(const std::vector<std::string> &toks, const std::string &head, size_t count) {
    if (toks.size() != count || toks[0] != head) {
        throw ParseError("expected '" + head + "' line");
    }
}

}  // namespace

void write_problem(std::ostream &out, const Problem &problem) {
    out << "smqcp 1\n";
    out << "vars " << problem.num_vars << "\n";
    out << "cones " << problem.cones.size() << "\n";
    for (const auto &k : problem.cones) {
        switch (k.type) {
            case ConeType::zero:
                out << "zero ";
                break;
            case ConeType::nonneg:
                out << "nonneg ";
                break;
            case ConeType::psd:
                out << "psd ";
                break;
        }
        out << k.dim << "\n";
    }
    out << "varblocks " << problem.var_blocks.size() << "\n";
    for (const auto &v : problem.var_blocks) {
        out << v.name << " " << v.offset << " " << v.size << " " << v.matrix_dim << "\n";
    }
    out << "entries " << problem.entries.size() << "\n";
    for (const auto &e : problem.entries) {
        out << e.row << " " << e.col << " " << fmt(e.value) << "\n";
    }
    out << "b " << problem.b.size() << "\n";
    for (double v : problem.b) {
        out << fmt(v) << "\n";
    }
    out << "c " << problem.c.size() << "\n";
    for (double v : problem.c) {
        out << fmt(v) << "\n";
    }
}

Problem read_problem(std::istream &in) {
    Problem p;
    auto toks = tokens_of(in);
    expect(toks, "smqcp", 2);
    if (parse_int(toks[1]) != 1) {
        throw ParseError("unsupported format version");
    }
    toks = tokens_of(in);
    expect(toks, "vars", 2);
    p.num_vars = parse_int(toks[1]);
    toks = tokens_of(in);
    expect(toks, "cones", 2);
    int64_t num_cones = parse_int(toks[1]);
    for (int64_t i = 0; i < num_cones; i++) {
        toks = tokens_of(in);
        if (toks.size() != 2) {
            throw ParseError("bad cone line");
        }
        ConeType t;
        if (toks[0] == "zero") {
            t = ConeType::zero;
        } else if (toks[0] == "nonneg") {
            t = ConeType::nonneg;
        } else if (toks[0] == "psd") {
            t = ConeType::psd;
        } else {
            throw ParseError("unknown cone type '" + toks[0] + "'");
        }
        p.cones.push_back({t, parse_int(toks[1])});
    }
    toks = tokens_of(in);
    expect(toks, "varblocks", 2);
    int64_t num_vb = parse_int(toks[1]);
    for (int64_t i = 0; i < num_vb; i++) {
        toks = tokens_of(in);
        if (toks.size() != 4) {
            throw ParseError("bad varblock line");
        }
        p.var_blocks.push_back({toks[0], parse_int(toks[1]), parse_int(toks[2]), parse_int(toks[3])});
    }
    toks = tokens_of(in);
    expect(toks, "entries", 2);
    int64_t nnz = parse_int(toks[1]);
    p.entries.reserve(nnz);
    for (int64_t i = 0; i < nnz; i++) {
        toks = tokens_of(in);
        if (toks.size() != 3) {
            throw ParseError("bad entry line");
        }
        p.entries.push_back({parse_int(toks[0]), parse_int(toks[1]), parse_double(toks[2])});
    }
    toks = tokens_of(in);
    expect(toks, "b", 2);
    int64_t m = parse_int(toks[1]);
    p.b.reserve(m);
    for (int64_t i = 0; i < m; i++) {
        p.b.push_back(parse_double(tokens_of(in)[0]));
    }
    toks = tokens_of(in);
    expect(toks, "c", 2);
    int64_t n = parse_int(toks[1]);
    p.c.reserve(n);
    for (int64_t i = 0; i < n; i++) {
        p.c.push_back(parse_double(tokens_of(in)[0]));
    }
    p.validate();
    return p;
}

void write_problem_file(const std::string &path, const Problem &problem) {
    std::ofstream f(path);
    if (!f) {
        throw Error("cannot open '" + path + "' for writing");
    }
    write_problem(f, problem);
}

Problem read_problem_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw Error("cannot open '" + path + "'");
    }
    return read_problem(f);
}

}  // namespace smq::conic
