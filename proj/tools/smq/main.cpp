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

#include <CLI11.hpp>
#include <atomic>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <thread>

#include "smq/certify.hpp"
#include "smq/conic/io.hpp"
#include "smq/poly.hpp"
#include "smq/qc.hpp"
#include "smq/sdp.hpp"

namespace {

using nlohmann::json;

void print_error(const std::string &what) {
    json j;
    j["error"] = what;
    std::cout << j.dump() << std::endl;
}

uint64_t max_function_id(int n) {
    int bits = 1 << n;
    if (bits >= 64) {
        return ~uint64_t{0};
    }
    return (uint64_t{1} << bits) - 1;
}

void check_id(uint64_t id, int n) {
    if (n < 1 || n > 6) {
        throw CLI::ValidationError("--n", "n must be between 1 and 6");
    }
    if (id > max_function_id(n)) {
        throw CLI::ValidationError("--id", "id exceeds 2^(2^n) - 1 for n = " + std::to_string(n));
    }
}

/// Banker's rounding to `digits` decimals, as used for table display.
double round_half_even(double v, int digits) {
    double scale = std::pow(10.0, digits);
    int old_mode = std::fegetround();
    std::fesetround(FE_TONEAREST);
    double r = std::nearbyint(v * scale) / scale;
    std::fesetround(old_mode);
    return r;
}

std::string fixed5(double v) {
    char buf[32];
    double r = round_half_even(v, 5);
    if (r == 0) {
        r = 0;  // drop the sign of negative zero
    }
    std::snprintf(buf, sizeof(buf), "%.5f", r);
    return buf;
}

struct SolveOpts {
    uint64_t id = 0;
    int n = 2;
    int T = 2;
    std::string cls = "FO";
    double tol = 1e-6;
    int64_t max_iters = 200000;
    bool verbose = false;
    std::string dump_problem;
};

void add_solve_opts(CLI::App *cmd, SolveOpts &o, bool with_class = true) {
    cmd->add_option("--id", o.id, "Function id (big-endian truth table)")->required()->envname("SMQ_ID");
    cmd->add_option("--n", o.n, "Number of input bits")->required()->envname("SMQ_N");
    cmd->add_option("--T", o.T, "Number of oracle queries")->envname("SMQ_T");
    if (with_class) {
        cmd->add_option("--class", o.cls, "Supermap class (FO or Gen)")->envname("SMQ_CLASS");
    }
    cmd->add_option("--tol", o.tol, "Solver tolerance")->envname("SMQ_TOL");
    cmd->add_option("--max-iters", o.max_iters, "Solver iteration budget")->envname("SMQ_MAX_ITERS");
    cmd->add_flag("--verbose", o.verbose, "Print solver progress to stderr")->envname("SMQ_VERBOSE");
    cmd->add_option("--dump-problem", o.dump_problem, "Write the built cone program to PATH (.cpi)");
}

smq::conic::SolverConfig solver_config(const SolveOpts &o) {
    smq::conic::SolverConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.verbose = o.verbose;
    return cfg;
}

smq::MinErrorResult run_min_error(const SolveOpts &o) {
    check_id(o.id, o.n);
    smq::BooleanFunction f(o.n, o.id);
    auto cls = smq::supermap_class_from_string(o.cls);
    if (!o.dump_problem.empty()) {
        auto qp = smq::build_primal(f, o.T, cls);
        smq::conic::write_problem_file(o.dump_problem, qp.conic);
    }
    return smq::min_error(f, o.T, cls, solver_config(o));
}

int cmd_solve(const SolveOpts &o) {
    auto res = run_min_error(o);
    std::cout << res.to_json() << std::endl;
    return res.status == smq::conic::SolveStatus::optimal ? 0 : 1;
}

// ---------------------------------------------------------------------------
// table: NPN-representative sweep with per-row checkpointing.

struct TableOpts {
    int n = 3;
    int T = 2;
    std::vector<std::string> classes{"FO", "Gen"};
    bool all_functions = false;
    double tol = 1e-6;
    int64_t max_iters = 200000;
    int workers = 1;
    std::string out_dir = ".";
};

int cmd_table(const TableOpts &o) {
    if (o.n < 1 || o.n > 4) {
        throw CLI::ValidationError("--n", "table supports n between 1 and 4");
    }
    std::vector<uint64_t> ids;
    if (o.all_functions) {
        for (uint64_t id = 0; id <= max_function_id(o.n); ++id) {
            ids.push_back(id);
        }
    } else {
        for (auto [id, size] : smq::npn_classes(o.n)) {
            (void)size;
            ids.push_back(id);
        }
    }

    std::filesystem::create_directories(o.out_dir);
    std::string stem = o.out_dir + "/table_n" + std::to_string(o.n) + "_T" + std::to_string(o.T);
    std::string rows_path = stem + ".rows.jsonl";
    std::string csv_path = stem + ".csv";

    // Resume: rows already solved (keyed by id and class) are not re-run.
    std::map<std::pair<uint64_t, std::string>, json> done;
    {
        std::ifstream in(rows_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            json row = json::parse(line, nullptr, false);
            if (row.is_discarded() || !row.contains("id") || !row.contains("class")) {
                continue;
            }
            done[{row["id"].get<uint64_t>(), row["class"].get<std::string>()}] = row;
        }
    }

    struct Item {
        uint64_t id;
        std::string cls;
    };
    std::vector<Item> work;
    for (uint64_t id : ids) {
        for (const auto &cls : o.classes) {
            if (!done.count({id, cls})) {
                work.push_back({id, cls});
            }
        }
    }

    std::mutex sink_mutex;
    std::ofstream sink(rows_path, std::ios::app);
    std::atomic<size_t> next{0};
    int workers = std::max(1, o.workers);
    auto run_worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= work.size()) {
                return;
            }
            SolveOpts so;
            so.id = work[i].id;
            so.n = o.n;
            so.T = o.T;
            so.cls = work[i].cls;
            so.tol = o.tol;
            so.max_iters = o.max_iters;
            json row;
            try {
                auto res = run_min_error(so);
                row = json::parse(res.to_json());
            } catch (const std::exception &e) {
                row["id"] = work[i].id;
                row["class"] = work[i].cls;
                row["status"] = "error";
                row["error"] = e.what();
            }
            std::lock_guard<std::mutex> lock(sink_mutex);
            sink << row.dump() << "\n";
            sink.flush();
            done[{work[i].id, work[i].cls}] = row;
            std::cerr << "row " << done.size() << "/" << ids.size() * o.classes.size() << " id "
                      << work[i].id << " " << work[i].cls << " "
                      << row.value("status", std::string("?")) << "\n";
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(run_worker);
    }
    run_worker();
    for (auto &t : pool) {
        t.join();
    }

    std::ofstream csv(csv_path);
    csv << "id";
    for (const auto &cls : o.classes) {
        csv << ",eps_" << cls;
    }
    if (o.classes.size() == 2) {
        csv << ",gap";
    }
    csv << "\n";
    int failures = 0;
    for (uint64_t id : ids) {
        csv << id;
        std::vector<double> eps;
        for (const auto &cls : o.classes) {
            auto it = done.find({id, cls});
            if (it == done.end() || !it->second.contains("eps_primal")) {
                csv << ",";
                ++failures;
                continue;
            }
            double v = it->second["eps_primal"].get<double>();
            eps.push_back(v);
            csv << "," << fixed5(v);
        }
        if (o.classes.size() == 2) {
            if (eps.size() == 2) {
                csv << "," << fixed5(eps[0] - eps[1]);
            } else {
                csv << ",";
            }
        }
        csv << "\n";
    }
    json summary;
    summary["rows"] = ids.size();
    summary["csv"] = csv_path;
    summary["rows_file"] = rows_path;
    summary["failed_cells"] = failures;
    std::cout << summary.dump() << std::endl;
    return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// certify: solve then emit exact-rational bound certificates.

json certificate_summary(const smq::BoundCertificate &cert, const std::string &path) {
    json j;
    j["kind"] = cert.kind == smq::BoundCertificate::Kind::lower ? "lower" : "upper";
    j["id"] = cert.f.id();
    j["n"] = cert.f.n();
    j["T"] = cert.T;
    j["class"] = smq::to_string(cert.cls);
    j["value"] = cert.value.get_str();
    j["value_approx"] = cert.value.get_d();
    if (!path.empty()) {
        j["file"] = path;
    }
    return j;
}

std::string write_certificate(const smq::BoundCertificate &cert, const std::string &out_dir) {
    std::filesystem::create_directories(out_dir);
    std::string side = cert.kind == smq::BoundCertificate::Kind::lower ? "lower" : "upper";
    std::string path = out_dir + "/cert_n" + std::to_string(cert.f.n()) + "_id" +
                       std::to_string(cert.f.id()) + "_T" + std::to_string(cert.T) + "_" +
                       smq::to_string(cert.cls) + "_" + side + ".txt";
    std::ofstream out(path);
    out << cert.to_text();
    return path;
}

struct CertifyOpts {
    SolveOpts solve;
    std::string side = "both";
    int64_t max_denominator = 1000000;
    std::string out_dir = ".";
    bool gap = false;
};

int cmd_certify(const CertifyOpts &o) {
    smq::CertifyOptions copts;
    copts.max_denominator = o.max_denominator;

    auto certify_one = [&](const std::string &cls, const std::string &side,
                           const smq::MinErrorResult &res) {
        smq::BooleanFunction f(o.solve.n, o.solve.id);
        auto c = smq::supermap_class_from_string(cls);
        smq::BoundCertificate cert = side == "lower" ? smq::certify_lower(f, o.solve.T, c, res.dual, copts)
                                                     : smq::certify_upper(f, o.solve.T, c, res.primal, copts);
        std::string reason;
        if (!smq::verify_certificate(cert, &reason)) {
            throw smq::Error("emitted certificate failed re-verification: " + reason);
        }
        std::string path = write_certificate(cert, o.out_dir);
        auto j = certificate_summary(cert, path);
        std::cout << j.dump() << std::endl;
        return cert.value;
    };

    if (o.gap) {
        // Full separation workflow: all four bounds plus the verdict.
        SolveOpts fo = o.solve;
        fo.cls = "FO";
        SolveOpts gen = o.solve;
        gen.cls = "Gen";
        auto res_fo = run_min_error(fo);
        auto res_gen = run_min_error(gen);
        auto fo_lower = certify_one("FO", "lower", res_fo);
        auto fo_upper = certify_one("FO", "upper", res_fo);
        auto gen_lower = certify_one("Gen", "lower", res_gen);
        auto gen_upper = certify_one("Gen", "upper", res_gen);
        bool separated = gen_upper < fo_lower;
        json verdict;
        verdict["fo_lower"] = fo_lower.get_d();
        verdict["fo_upper"] = fo_upper.get_d();
        verdict["gen_lower"] = gen_lower.get_d();
        verdict["gen_upper"] = gen_upper.get_d();
        verdict["verdict"] = separated ? "Gen upper < FO lower" : "no certified separation";
        std::cout << verdict.dump() << std::endl;
        return separated ? 0 : 1;
    }

    auto res = run_min_error(o.solve);
    if (res.status != smq::conic::SolveStatus::optimal) {
        print_error("solver did not reach the requested tolerance; certify anyway via --side "
                    "on a tighter solve");
        return 1;
    }
    if (o.side == "both" || o.side == "lower") {
        certify_one(o.solve.cls, "lower", res);
    }
    if (o.side == "both" || o.side == "upper") {
        certify_one(o.solve.cls, "upper", res);
    }
    return 0;
}

int cmd_verify_certificate(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        print_error("cannot open " + path);
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto cert = smq::BoundCertificate::from_text(ss.str());
    std::string reason;
    bool ok = smq::verify_certificate(cert, &reason);
    auto j = certificate_summary(cert, path);
    j["verified"] = ok;
    if (!ok) {
        j["reason"] = reason;
    }
    std::cout << j.dump() << std::endl;
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-qc: order-controlled vs sequential action on equal unitaries.

struct VerifyQcOpts {
    uint64_t seed = 1;
    int trials = 20;
    int unitaries = 20;
    int max_slot_dim = 3;
};

double action_deviation(const smq::ChoiObject &a, const smq::ChoiObject &b) {
    auto bp = b.permuted(a.spaces());
    return (a.data() - bp.data()).norm();
}

int cmd_verify_qc(const VerifyQcOpts &o) {
    std::mt19937_64 rng(o.seed);
    double max_same = 0;
    int control_hits = 0;
    int control_total = 0;
    for (int trial = 0; trial < o.trials; ++trial) {
        int T = 2 + static_cast<int>(rng() % 2);
        int64_t slot_dim = 2 + static_cast<int64_t>(rng() % (o.max_slot_dim - 1));
        int64_t d_alpha = 1 + static_cast<int64_t>(rng() % 2);
        auto sc = smq::ProcessScenario::uniform(T, slot_dim, /*d_F=*/2, /*d_P=*/2);
        auto impl = smq::random_qc_implementation(sc, d_alpha, rng);
        auto w_qc = smq::build_qc_process(impl);
        auto w_fo = smq::qc_to_fo(impl);
        for (int u = 0; u < o.unitaries; ++u) {
            auto unitary = smq::random_unitary(slot_dim, rng);
            std::vector<smq::Matrix> same(T, unitary);
            double dev = action_deviation(smq::supermap_action(w_qc, same, sc),
                                          smq::supermap_action(w_fo, same, sc));
            max_same = std::max(max_same, dev);

            std::vector<smq::Matrix> distinct;
            for (int t = 0; t < T; ++t) {
                distinct.push_back(smq::random_unitary(slot_dim, rng));
            }
            double cdev = action_deviation(smq::supermap_action(w_qc, distinct, sc),
                                           smq::supermap_action(w_fo, distinct, sc));
            ++control_total;
            if (cdev > 1e-2) {
                ++control_hits;
            }
        }
    }

    auto sw = smq::switch_implementation();
    auto sw_qc = smq::build_qc_process(sw);
    auto sw_fo = smq::qc_to_fo(sw);
    auto u = smq::random_unitary(2, rng);
    std::vector<smq::Matrix> both{u, u};
    double sw_dev = action_deviation(smq::supermap_action(sw_qc, both, sw.scenario),
                                     smq::supermap_action(sw_fo, both, sw.scenario));

    double control_fraction = control_total ? static_cast<double>(control_hits) / control_total : 0;
    bool pass = max_same <= 1e-9 && sw_dev <= 1e-12 && control_fraction >= 0.9;
    json j;
    j["trials"] = o.trials;
    j["unitaries_per_trial"] = o.unitaries;
    j["max_deviation_same_unitary"] = max_same;
    j["switch_deviation"] = sw_dev;
    j["control_fraction_above_1e-2"] = control_fraction;
    j["pass"] = pass;
    std::cout << j.dump() << std::endl;
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_degree(uint64_t id, int n) {
    check_id(id, n);
    smq::BooleanFunction f(n, id);
    auto [exact_t, approx_t] = smq::polynomial_lower_bound(f);
    json j;
    j["id"] = id;
    j["n"] = n;
    j["degree"] = smq::degree(f);
    j["approx_degree"] = smq::approx_degree(f);
    j["query_lower_bound_exact"] = exact_t;
    j["query_lower_bound_bounded_error"] = approx_t;
    std::cout << j.dump() << std::endl;
    return 0;
}

int cmd_dump_problem(const SolveOpts &o, const std::string &form, const std::string &out) {
    check_id(o.id, o.n);
    smq::BooleanFunction f(o.n, o.id);
    auto cls = smq::supermap_class_from_string(o.cls);
    auto qp = form == "dual" ? smq::build_dual(f, o.T, cls) : smq::build_primal(f, o.T, cls);
    smq::conic::write_problem_file(out, qp.conic);
    json j;
    j["file"] = out;
    j["form"] = form;
    j["vars"] = qp.conic.num_vars;
    j["rows"] = qp.conic.num_rows();
    std::cout << j.dump() << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"smq: minimum-error query supermaps, with exact-rational certification"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file with key=value lines");
    app.allow_config_extras(true);

    SolveOpts solve_opts;
    auto *solve = app.add_subcommand("solve", "Solve the minimum-error program for one function");
    add_solve_opts(solve, solve_opts);

    TableOpts table_opts;
    auto *table = app.add_subcommand("table", "Sweep NPN representatives and emit a CSV table");
    table->add_option("--n", table_opts.n, "Number of input bits")->required()->envname("SMQ_N");
    table->add_option("--T", table_opts.T, "Number of oracle queries")->envname("SMQ_T");
    table->add_option("--classes", table_opts.classes, "Supermap classes to solve")->envname("SMQ_CLASSES");
    table->add_flag("--all-functions", table_opts.all_functions, "All 2^(2^n) ids, not just representatives");
    table->add_option("--tol", table_opts.tol, "Solver tolerance")->envname("SMQ_TOL");
    table->add_option("--max-iters", table_opts.max_iters, "Solver iteration budget")->envname("SMQ_MAX_ITERS");
    table->add_option("--workers", table_opts.workers, "Worker thread count")
        ->check(CLI::PositiveNumber)
        ->envname("SMQ_WORKERS");
    table->add_option("--out-dir", table_opts.out_dir, "Output directory (also holds the resume file)")
        ->envname("SMQ_OUT_DIR");

    CertifyOpts certify_opts;
    auto *certify = app.add_subcommand("certify", "Emit exact-rational bound certificates");
    add_solve_opts(certify, certify_opts.solve);
    certify->add_option("--side", certify_opts.side, "lower, upper, or both")
        ->check(CLI::IsMember({"lower", "upper", "both"}));
    certify->add_option("--max-denominator", certify_opts.max_denominator,
                        "Denominator bound for rationalization")
        ->envname("SMQ_MAX_DENOMINATOR");
    certify->add_option("--out-dir", certify_opts.out_dir, "Certificate output directory")
        ->envname("SMQ_OUT_DIR");
    certify->add_flag("--gap", certify_opts.gap,
                      "Certify all four FO/Gen bounds and print the separation verdict");

    std::string cert_path;
    auto *verify_cert = app.add_subcommand("verify-certificate", "Re-check a certificate file exactly");
    verify_cert->add_option("file", cert_path, "Certificate file")->required();

    VerifyQcOpts qc_opts;
    auto *verify_qc = app.add_subcommand("verify-qc", "Check order-controlled vs sequential actions");
    verify_qc->add_option("--seed", qc_opts.seed, "RNG seed")->envname("SMQ_SEED");
    verify_qc->add_option("--trials", qc_opts.trials, "Random implementations to draw");
    verify_qc->add_option("--unitaries", qc_opts.unitaries, "Unitaries per implementation");
    verify_qc->add_option("--max-slot-dim", qc_opts.max_slot_dim, "Largest slot dimension")
        ->check(CLI::Range(2, 4));

    uint64_t deg_id = 0;
    int deg_n = 2;
    auto *deg = app.add_subcommand("degree", "Polynomial degree and query lower bounds");
    deg->add_option("--id", deg_id, "Function id")->required();
    deg->add_option("--n", deg_n, "Number of input bits")->required();

    SolveOpts dump_opts;
    std::string dump_form = "primal";
    std::string dump_out = "problem.cpi";
    auto *dump = app.add_subcommand("dump-problem", "Write the cone program to a .cpi file");
    add_solve_opts(dump, dump_opts);
    dump->add_option("--form", dump_form, "primal or dual")->check(CLI::IsMember({"primal", "dual"}));
    dump->add_option("--out", dump_out, "Output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            return cmd_solve(solve_opts);
        }
        if (table->parsed()) {
            return cmd_table(table_opts);
        }
        if (certify->parsed()) {
            return cmd_certify(certify_opts);
        }
        if (verify_cert->parsed()) {
            return cmd_verify_certificate(cert_path);
        }
        if (verify_qc->parsed()) {
            return cmd_verify_qc(qc_opts);
        }
        if (deg->parsed()) {
            return cmd_degree(deg_id, deg_n);
        }
        if (dump->parsed()) {
            return cmd_dump_problem(dump_opts, dump_form, dump_out);
        }
    } catch (const std::exception &e) {
        print_error(e.what());
        return 2;
    }
    return 0;
}
