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

#include "dsqm/dsqm.h"

#include "dsqm/analytic.hpp"
#include "dsqm/errors.hpp"
#include "dsqm/lattice_core.hpp"
#include "dsqm/qforce.hpp"
#include "dsqm/scenarios.hpp"
#include "dsqm/verify.hpp"
#include "dsqm/walker.hpp"

#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <algorithm>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#ifndef DSQM_VERSION
#define DSQM_VERSION "0.0.0"
#endif

struct dsqm_config {
    dsqm::ScenarioConfig value;
};

struct dsqm_run_result {
    dsqm::ScenarioConfig config;
    dsqm::Histogram histogram;
    dsqm::Distribution model;
    dsqm::Distribution qm;
    dsqm_run_stats stats{};
};

struct dsqm_verify_report {
    dsqm::VerifyReport value;
};

namespace {

thread_local std::string g_last_error;

dsqm_status fail(dsqm_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <class F>
dsqm_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const dsqm::DomainError& e) {
        return fail(DSQM_ERR_DOMAIN, e.what());
    } catch (const dsqm::ConfigError& e) {
        return fail(DSQM_ERR_CONFIG, e.what());
    } catch (const dsqm::IoError& e) {
        return fail(DSQM_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(DSQM_ERR_ARG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DSQM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DSQM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DSQM_ERR_INTERNAL, "unknown error");
    }
}

dsqm_status copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed) {
        *needed = s.size() + 1;
    }
    if (!buf) {
        return cap == 0 ? DSQM_OK : fail(DSQM_ERR_ARG, "null buffer");
    }
    if (cap < s.size() + 1) {
        if (cap > 0) {
            buf[0] = '\0';
        }
        return fail(DSQM_ERR_ARG, "buffer too small");
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return DSQM_OK;
}

// Calls write(os) on stdout for "-" or on the named file.
template <class W>
dsqm_status write_to(const char* path, W&& write) {
    if (!path) {
        return fail(DSQM_ERR_ARG, "null path");
    }
    if (std::strcmp(path, "-") == 0) {
        write(std::cout);
        std::cout.flush();
        return DSQM_OK;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        return fail(DSQM_ERR_IO, std::string("cannot open ") + path + " for writing");
    }
    write(out);
    out.flush();
    if (!out) {
        return fail(DSQM_ERR_IO, std::string("write failed: ") + path);
    }
    return DSQM_OK;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

dsqm_status run_impl(const dsqm_config* config, const char* diagnostics_path, dsqm_run_result** out) {
    if (!config || !out) {
        return fail(DSQM_ERR_ARG, "null argument");
    }
    *out = nullptr;
    const auto& c = config->value;
    dsqm::validate(c);
    auto result = std::make_unique<dsqm_run_result>();
    result->config = c;
    if (c.kind == dsqm::ScenarioKind::free) {
        if (diagnostics_path) {
            return fail(DSQM_ERR_CONFIG, "diagnostics are only recorded for interference scenarios");
        }
        const auto sampler =
            c.p_fixed ? dsqm::PropensitySampler::fixed(*c.p_fixed) : dsqm::PropensitySampler::uniform();
        result->histogram = dsqm::run_ensemble_free(c.n_particles, c.n_steps, sampler,
                                                    dsqm::SourceSampler(dsqm::resolved_sources(c)),
                                                    dsqm::EnsembleOptions{c.seed, c.threads, c.block_size});
    } else {
        std::ofstream diag;
        dsqm::qforce::RunOptions options;
        if (diagnostics_path) {
            diag.open(diagnostics_path, std::ios::binary);
            if (!diag) {
                return fail(DSQM_ERR_IO, std::string("cannot open ") + diagnostics_path);
            }
            options.diagnostics = &diag;
        }
        const auto r = dsqm::qforce::run_interference(c, options);
        result->histogram = r.histogram;
        result->stats = {r.mean_final_momentum, r.late_mean_momentum, r.mean_velocity, r.bosons_created,
                         r.wide_site_bosons};
    }
    result->model = dsqm::scenarios::model_distribution(c, result->histogram);
    result->qm = dsqm::scenarios::qm_distribution(c, result->histogram);
    *out = result.release();
    return DSQM_OK;
}

dsqm_status copy_values(const dsqm::Distribution& d, double* values, size_t cap) {
    if (!values || cap < d.p.size()) {
        return fail(DSQM_ERR_ARG, "buffer too small");
    }
    std::copy(d.p.begin(), d.p.end(), values);
    return DSQM_OK;
}

} // namespace

extern "C" {

const char* dsqm_last_error(void) {
    return g_last_error.c_str();
}

const char* dsqm_version(void) {
    return DSQM_VERSION;
}

dsqm_status dsqm_config_create(dsqm_config** out) {
    return guarded([&] {
        if (!out) {
            return fail(DSQM_ERR_ARG, "null output handle");
        }
        *out = new dsqm_config{};
        return DSQM_OK;
    });
}

void dsqm_config_destroy(dsqm_config* config) {
    delete config;
}

dsqm_status dsqm_config_set(dsqm_config* config, const char* key, const char* value) {
    return guarded([&] {
        if (!config || !key || !value) {
            return fail(DSQM_ERR_ARG, "null argument");
        }
        if (std::strpbrk(key, "=\n#") || std::strpbrk(value, "\n#")) {
            return fail(DSQM_ERR_CONFIG, std::string("invalid characters in '") + key + "'");
        }
        config->value = dsqm::parse_config(std::string(key) + " = " + value, config->value);
        return DSQM_OK;
    });
}

dsqm_status dsqm_config_get(const dsqm_config* config, const char* key, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        if (!config || !key) {
            return fail(DSQM_ERR_ARG, "null argument");
        }
        const auto text = dsqm::serialize(config->value);
        const std::string prefix = std::string(key) + " = ";
        std::size_t pos = 0;
        while (pos < text.size()) {
            const auto nl = text.find('\n', pos);
            const auto line = text.substr(pos, nl - pos);
            if (line.rfind(prefix, 0) == 0) {
                return copy_string(line.substr(prefix.size()), buf, cap, needed);
            }
            pos = nl + 1;
        }
        if (std::strcmp(key, "sources") == 0) {
            return copy_string("", buf, cap, needed);
        }
        return fail(DSQM_ERR_CONFIG, std::string("unknown key '") + key + "'");
    });
}

dsqm_status dsqm_config_load_file(dsqm_config* config, const char* path) {
    return guarded([&] {
        if (!config || !path) {
            return fail(DSQM_ERR_ARG, "null argument");
        }
        config->value = dsqm::load_config(path, config->value);
        return DSQM_OK;
    });
}

dsqm_status dsqm_config_validate(const dsqm_config* config) {
    return guarded([&] {
        if (!config) {
            return fail(DSQM_ERR_ARG, "null config");
        }
        dsqm::validate(config->value);
        return DSQM_OK;
    });
}

dsqm_status dsqm_config_to_string(const dsqm_config* config, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        if (!config) {
            return fail(DSQM_ERR_ARG, "null config");
        }
        return copy_string(dsqm::serialize(config->value), buf, cap, needed);
    });
}

dsqm_status dsqm_write_manifest(const dsqm_config* config, const char* path, const char* note) {
    return guarded([&] {
        if (!config) {
            return fail(DSQM_ERR_ARG, "null config");
        }
        return write_to(path, [&](std::ostream& os) {
            os << "# dsqm " << DSQM_VERSION << '\n' << "# created " << utc_timestamp() << '\n';
            if (note && *note) {
                os << "# " << note << '\n';
            }
            os << dsqm::serialize(config->value);
        });
    });
}

dsqm_status dsqm_run(const dsqm_config* config, dsqm_run_result** out) {
    return guarded([&] { return run_impl(config, nullptr, out); });
}

dsqm_status dsqm_run_with_diagnostics(const dsqm_config* config, const char* diagnostics_path,
                                      dsqm_run_result** out) {
    return guarded([&] {
        if (!diagnostics_path) {
            return fail(DSQM_ERR_ARG, "null diagnostics path");
        }
        return run_impl(config, diagnostics_path, out);
    });
}

void dsqm_run_result_destroy(dsqm_run_result* result) {
    delete result;
}

dsqm_status dsqm_result_support(const dsqm_run_result* result, int64_t* offset, size_t* size, uint64_t* total) {
    if (!result) {
        return fail(DSQM_ERR_ARG, "null result");
    }
    if (offset) {
        *offset = result->histogram.offset();
    }
    if (size) {
        *size = result->histogram.size();
    }
    if (total) {
        *total = result->histogram.total();
    }
    return DSQM_OK;
}

dsqm_status dsqm_result_counts(const dsqm_run_result* result, uint64_t* counts, size_t cap) {
    if (!result || !counts || cap < result->histogram.size()) {
        return fail(DSQM_ERR_ARG, "null result or buffer too small");
    }
    const auto c = result->histogram.counts();
    std::copy(c.begin(), c.end(), counts);
    return DSQM_OK;
}

dsqm_status dsqm_result_model(const dsqm_run_result* result, double* values, size_t cap) {
    if (!result) {
        return fail(DSQM_ERR_ARG, "null result");
    }
    return copy_values(result->model, values, cap);
}

dsqm_status dsqm_result_qm(const dsqm_run_result* result, double* values, size_t cap) {
    if (!result) {
        return fail(DSQM_ERR_ARG, "null result");
    }
    return copy_values(result->qm, values, cap);
}

dsqm_status dsqm_result_compare(const dsqm_run_result* result, double alpha, dsqm_comparison* out) {
    return guarded([&] {
        if (!result || !out) {
            return fail(DSQM_ERR_ARG, "null argument");
        }
        const auto r = dsqm::compare(result->histogram, result->model, alpha);
        *out = {r.l1, r.chi2, r.dof, r.max_abs_dev, r.critical, r.p_value, r.pass ? 1 : 0};
        return DSQM_OK;
    });
}

dsqm_status dsqm_result_stats(const dsqm_run_result* result, dsqm_run_stats* out) {
    if (!result || !out) {
        return fail(DSQM_ERR_ARG, "null argument");
    }
    *out = result->stats;
    return DSQM_OK;
}

dsqm_status dsqm_result_write_csv(const dsqm_run_result* result, const char* path) {
    return guarded([&] {
        if (!result) {
            return fail(DSQM_ERR_ARG, "null result");
        }
        return write_to(path, [&](std::ostream& os) {
            dsqm::write_histogram_csv(os, result->histogram, result->model, result->qm);
        });
    });
}

dsqm_status dsqm_result_write_json(const dsqm_run_result* result, const char* path) {
    return guarded([&] {
        if (!result) {
            return fail(DSQM_ERR_ARG, "null result");
        }
        return write_to(path, [&](std::ostream& os) {
            dsqm::write_histogram_json(os, result->histogram, result->model, result->qm);
        });
    });
}

dsqm_status dsqm_verify(const char* suite, int64_t tau_max, double tolerance, uint64_t seed,
                        dsqm_verify_report** out) {
    return guarded([&] {
        if (!suite || !out) {
            return fail(DSQM_ERR_ARG, "null argument");
        }
        *out = nullptr;
        dsqm::VerifyOptions options;
        options.tau_max = tau_max;
        options.seed = seed;
        if (tolerance > 0.0) {
            options.tolerance = tolerance;
        }
        *out = new dsqm_verify_report{dsqm::run_verify(suite, options)};
        return DSQM_OK;
    });
}

void dsqm_verify_report_destroy(dsqm_verify_report* report) {
    delete report;
}

int dsqm_verify_passed(const dsqm_verify_report* report) {
    return report && report->value.pass() ? 1 : 0;
}

size_t dsqm_verify_count(const dsqm_verify_report* report) {
    return report ? report->value.checks.size() : 0;
}

dsqm_status dsqm_verify_get(const dsqm_verify_report* report, size_t index, dsqm_verify_check* out) {
    if (!report || !out || index >= report->value.checks.size()) {
        return fail(DSQM_ERR_ARG, "null argument or index out of range");
    }
    const auto& c = report->value.checks[index];
    *out = {c.suite.c_str(), c.name.c_str(), c.value, c.tolerance, c.lower_bound ? 1 : 0, c.pass ? 1 : 0};
    return DSQM_OK;
}

dsqm_status dsqm_verify_write_text(const dsqm_verify_report* report, const char* path) {
    return guarded([&] {
        if (!report) {
            return fail(DSQM_ERR_ARG, "null report");
        }
        return write_to(path, [&](std::ostream& os) { dsqm::write_verify_text(os, report->value); });
    });
}

dsqm_status dsqm_verify_write_json(const dsqm_verify_report* report, const char* path) {
    return guarded([&] {
        if (!report) {
            return fail(DSQM_ERR_ARG, "null report");
        }
        return write_to(path, [&](std::ostream& os) { dsqm::write_verify_json(os, report->value); });
    });
}

dsqm_status dsqm_transition_probs(double p, double* a, double* b, double* c) {
    return guarded([&] {
        if (!a || !b || !c) {
            return fail(DSQM_ERR_ARG, "null output");
        }
        const auto t = dsqm::transition_probs(p);
        *a = t.a;
        *b = t.b;
        *c = t.c;
        return DSQM_OK;
    });
}

dsqm_status dsqm_pmf_free(int64_t xi, int64_t tau, double p, double* out) {
    return guarded([&] {
        if (!out) {
            return fail(DSQM_ERR_ARG, "null output");
        }
        *out = dsqm::analytic::pmf_free(xi, tau, p);
        return DSQM_OK;
    });
}

dsqm_status dsqm_ensemble_probability(int64_t xi, int64_t tau, double* out) {
    return guarded([&] {
        if (!out) {
            return fail(DSQM_ERR_ARG, "null output");
        }
        *out = dsqm::analytic::ensemble_probability(xi, tau);
        return DSQM_OK;
    });
}

dsqm_status dsqm_two_slit_density(double xi, double tau, double p1, double p2, double delta, double* out) {
    return guarded([&] {
        if (!out) {
            return fail(DSQM_ERR_ARG, "null output");
        }
        *out = dsqm::scenarios::two_slit_density(xi, tau, p1, p2, delta);
        return DSQM_OK;
    });
}

dsqm_status dsqm_ring_steady_momentum(double p, int64_t ell, double* out) {
    return guarded([&] {
        if (!out) {
            return fail(DSQM_ERR_ARG, "null output");
        }
        *out = dsqm::scenarios::ring_steady_momentum(p, ell);
        return DSQM_OK;
    });
}

dsqm_status dsqm_matter_frequency(double e, double* out) {
    return guarded([&] {
        if (!out) {
            return fail(DSQM_ERR_ARG, "null output");
        }
        *out = dsqm::analytic::matter_frequency(e);
        return DSQM_OK;
    });
}

} // extern "C"
