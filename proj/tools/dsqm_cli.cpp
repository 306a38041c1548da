/*
   Copyright 2026 The dsqm Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Command-line front end; talks to the library only through dsqm.h.

#include "dsqm/dsqm.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kConfig = 2, kVerify = 3 };

struct ConfigDeleter {
    void operator()(dsqm_config* c) const { dsqm_config_destroy(c); }
};
struct ResultDeleter {
    void operator()(dsqm_run_result* r) const { dsqm_run_result_destroy(r); }
};
struct ReportDeleter {
    void operator()(dsqm_verify_report* r) const { dsqm_verify_report_destroy(r); }
};

// Thrown to unwind with an exit code after the message has been printed.
struct ExitWith {
    int code;
};

int exit_code_for(dsqm_status s) {
    switch (s) {
    case DSQM_OK: return kOk;
    case DSQM_ERR_ARG: return kUsage;
    case DSQM_ERR_VERIFY: return kVerify;
    default: return kConfig;
    }
}

void check(dsqm_status s, const std::string& context) {
    if (s != DSQM_OK) {
        std::cerr << "dsqm: " << context << ": " << dsqm_last_error() << '\n';
        throw ExitWith{exit_code_for(s)};
    }
}

// Flags stored as text and forwarded verbatim as configuration keys, so a
// flag and the same key in --config behave identically.
struct RunFlags {
    std::string config_file;
    std::string out = "-";
    std::string json;
    std::string manifest;
    std::string diagnostics;
    std::map<std::string, std::string> keys;
    bool p_uniform = false;
};

void add_key(CLI::App* app, RunFlags& f, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option(flag, f.keys[key], help);
}

void add_common(CLI::App* app, RunFlags& f) {
    add_key(app, f, "--np", "np", "number of particles");
    add_key(app, f, "--nt", "nt", "number of time steps");
    add_key(app, f, "--seed", "seed", "random seed");
    add_key(app, f, "--threads", "threads", "worker threads (output does not depend on it)");
    app->add_option("--config", f.config_file, "key = value file; flags override it");
    app->add_option("--out", f.out, "CSV output path, '-' for stdout");
    app->add_option("--json", f.json, "also write a JSON mirror of the table here");
    app->add_option("--manifest", f.manifest, "manifest path (default: <out>.manifest when --out is a file)");
}

std::unique_ptr<dsqm_config, ConfigDeleter> build_config(CLI::App* app, RunFlags& f,
                                                         const std::map<std::string, std::string>& fixed) {
    dsqm_config* raw = nullptr;
    check(dsqm_config_create(&raw), "config");
    std::unique_ptr<dsqm_config, ConfigDeleter> cfg(raw);
    if (!f.config_file.empty()) {
        check(dsqm_config_load_file(cfg.get(), f.config_file.c_str()), f.config_file);
    }
    for (const auto& [key, value] : fixed) {
        check(dsqm_config_set(cfg.get(), key.c_str(), value.c_str()), "--" + key);
    }
    for (const auto& [key, value] : f.keys) {
        const std::string flag = "--" + key;
        if (app->count(flag) > 0) {
            check(dsqm_config_set(cfg.get(), key.c_str(), value.c_str()), flag);
        }
    }
    if (f.p_uniform) {
        check(dsqm_config_set(cfg.get(), "p", "uniform"), "--p-uniform");
    }
    check(dsqm_config_validate(cfg.get()), "configuration");
    return cfg;
}

std::string get_key(const dsqm_config* cfg, const char* key) {
    size_t needed = 0;
    check(dsqm_config_get(cfg, key, nullptr, 0, &needed), key);
    std::vector<char> buf(needed);
    check(dsqm_config_get(cfg, key, buf.data(), buf.size(), nullptr), key);
    return buf.data();
}

int execute(const dsqm_config* cfg, const RunFlags& f) {
    if (get_key(cfg, "mode") == "training" && get_key(cfg, "scenario") != "free" && get_key(cfg, "threads") != "1") {
        std::cerr << "dsqm: warning: training mode runs single-threaded; --threads ignored\n";
    }
    dsqm_run_result* raw = nullptr;
    if (f.diagnostics.empty()) {
        check(dsqm_run(cfg, &raw), "run");
    } else {
        check(dsqm_run_with_diagnostics(cfg, f.diagnostics.c_str(), &raw), "run");
    }
    std::unique_ptr<dsqm_run_result, ResultDeleter> result(raw);

    check(dsqm_result_write_csv(result.get(), f.out.c_str()), f.out);
    if (!f.json.empty()) {
        check(dsqm_result_write_json(result.get(), f.json.c_str()), f.json);
    }
    std::string manifest = f.manifest;
    if (manifest.empty() && f.out != "-") {
        manifest = f.out + ".manifest";
    }
    if (!manifest.empty()) {
        const std::string note = "output = " + f.out + (f.json.empty() ? "" : ", json = " + f.json);
        check(dsqm_write_manifest(cfg, manifest.c_str(), note.c_str()), manifest);
    }

    dsqm_comparison cmp{};
    if (dsqm_result_compare(result.get(), 0.001, &cmp) == DSQM_OK) {
        std::fprintf(stderr, "model fit: l1=%.6g chi2=%.6g dof=%llu critical=%.6g p=%.3g %s\n", cmp.l1, cmp.chi2,
                     static_cast<unsigned long long>(cmp.dof), cmp.critical, cmp.p_value,
                     cmp.pass ? "consistent" : "inconsistent");
    }
    if (get_key(cfg, "scenario") != "free") {
        dsqm_run_stats st{};
        check(dsqm_result_stats(result.get(), &st), "stats");
        std::fprintf(stderr, "mean p_eff: final=%.6g late=%.6g  mean velocity=%.6g  bosons=%llu\n",
                     st.mean_final_momentum, st.late_mean_momentum, st.mean_velocity,
                     static_cast<unsigned long long>(st.bosons_created));
        if (st.wide_site_bosons > 0) {
            std::fprintf(stderr, "note: %llu site bosons had |delta*w0| >= 1\n",
                         static_cast<unsigned long long>(st.wide_site_bosons));
        }
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-spacetime random walk with lattice memory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dsqm_version()));

    RunFlags free_flags;
    auto* free_cmd = app.add_subcommand("free", "free-motion ensemble");
    add_common(free_cmd, free_flags);
    auto* p_opt = free_cmd->add_option("--p", free_flags.keys["p"], "fixed momentum propensity in [-1, 1]");
    auto* pu_opt = free_cmd->add_flag("--p-uniform", free_flags.p_uniform, "draw p uniformly in [-1, 1] (default)");
    p_opt->excludes(pu_opt);

    RunFlags int_flags;
    auto* int_cmd = app.add_subcommand("interfere", "self-interference scenarios");
    add_common(int_cmd, int_flags);
    add_key(int_cmd, int_flags, "--scenario", "scenario", "two-slit | multi-slit | ring | box");
    add_key(int_cmd, int_flags, "--delta", "delta", "two-slit source distance");
    add_key(int_cmd, int_flags, "--sources", "sources", "explicit sources site:P,site:P,...");
    add_key(int_cmd, int_flags, "--ell", "ell", "ring circumference / box length in sites");
    add_key(int_cmd, int_flags, "--p1", "p1", "probability of the first two-slit source");
    add_key(int_cmd, int_flags, "--mode", "mode", "trained | training");
    add_key(int_cmd, int_flags, "--p", "p", "fixed momentum propensity, or 'uniform'");
    add_key(int_cmd, int_flags, "--windings", "windings", "image sources used on a ring or in a box");
    int_cmd->add_option("--diagnostics", int_flags.diagnostics, "per-particle CSV records");

    std::string suite = "all";
    std::int64_t tau_max = 64;
    double tolerance = 0.0;
    std::uint64_t verify_seed = 1;
    std::string verify_json;
    auto* ver_cmd = app.add_subcommand("verify", "check closed-form identities");
    ver_cmd->add_option("--suite", suite, "pmf | energy | action | dbb | matterwave | lorentz | boson | all")
        ->check(CLI::IsMember({"pmf", "energy", "action", "dbb", "matterwave", "lorentz", "boson", "all"}));
    ver_cmd->add_option("--tau-max", tau_max, "largest tau for enumerated checks")->check(CLI::Range(1, 100000));
    ver_cmd->add_option("--tolerance", tolerance, "override every upper-bound tolerance")->check(CLI::PositiveNumber);
    ver_cmd->add_option("--seed", verify_seed, "seed for randomized checks");
    ver_cmd->add_option("--json", verify_json, "write the report as JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*free_cmd) {
            auto cfg = build_config(free_cmd, free_flags, {{"scenario", "free"}});
            return execute(cfg.get(), free_flags);
        }
        if (*int_cmd) {
            auto cfg = build_config(int_cmd, int_flags, {});
            if (get_key(cfg.get(), "scenario") == "free") {
                std::cerr << "dsqm: interfere needs --scenario (or scenario in --config)\n";
                return kUsage;
            }
            return execute(cfg.get(), int_flags);
        }
        dsqm_verify_report* raw = nullptr;
        check(dsqm_verify(suite.c_str(), tau_max, tolerance, verify_seed, &raw), "verify");
        std::unique_ptr<dsqm_verify_report, ReportDeleter> report(raw);
        check(dsqm_verify_write_text(report.get(), "-"), "report");
        if (!verify_json.empty()) {
            check(dsqm_verify_write_json(report.get(), verify_json.c_str()), verify_json);
        }
        return dsqm_verify_passed(report.get()) ? kOk : kVerify;
    } catch (const ExitWith& e) {
        return e.code;
    }
}
