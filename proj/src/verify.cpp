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

#include "dsqm/verify.hpp"

#include "dsqm/analytic.hpp"
#include "dsqm/errors.hpp"
#include "dsqm/lattice_core.hpp"
#include "dsqm/qforce.hpp"
#include "dsqm/random.hpp"
#include "dsqm/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

namespace dsqm {

bool VerifyReport::pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names{"pmf",     "energy",  "action", "dbb",
                                                "matterwave", "lorentz", "boson", "all"};
    return names;
}

namespace {

constexpr std::array kPropensities{-0.9, -0.5, 0.0, 0.37, 0.9};

class Suite {
public:
    Suite(std::string name, const VerifyOptions& options, VerifyReport& report)
        : name_(std::move(name)), options_(options), report_(report) {}

    void at_most(std::string check, double value, double tolerance) {
        const double tol = options_.tolerance.value_or(tolerance);
        report_.checks.push_back({name_, std::move(check), value, tol, value <= tol, false});
    }

    void at_least(std::string check, double value, double bound) {
        report_.checks.push_back({name_, std::move(check), value, bound, value >= bound, true});
    }

    const VerifyOptions& options() const { return options_; }

private:
    std::string name_;
    const VerifyOptions& options_;
    VerifyReport& report_;
};

void suite_pmf(Suite& s) {
    const auto tau_max = s.options().tau_max;
    double recursion = 0.0;
    double norm = 0.0;
    double mirror = 0.0;
    double corner = 0.0;
    for (const double p : kPropensities) {
        const auto t = transition_probs(p);
        for (std::int64_t tau = 0; tau <= tau_max; ++tau) {
            const auto closed = analytic::pmf_free_row(tau, p);
            const auto rec = analytic::pmf_recursive(tau, p);
            for (std::size_t i = 0; i < closed.p.size(); ++i) {
                recursion = std::max(recursion, std::fabs(closed.p[i] - rec.p[i]));
                const auto xi = closed.offset + static_cast<std::int64_t>(i);
                mirror = std::max(mirror, std::fabs(closed.p[i] - analytic::pmf_free(-xi, tau, -p)));
            }
            norm = std::max(norm, std::fabs(closed.sum() - 1.0));
            corner = std::max(corner, std::fabs(analytic::pmf_free(tau, tau, p) - std::pow(t.a, static_cast<double>(tau))));
        }
    }
    s.at_most("recursion_vs_closed_form", recursion, 1e-12);
    s.at_most("normalization", norm, 1e-12);
    s.at_most("mirror_symmetry", mirror, 1e-12);
    s.at_most("light_cone_corner", corner, 1e-12);

    double ens = 0.0;
    for (std::int64_t tau = 1; tau <= tau_max; ++tau) {
        double sum = 0.0;
        for (auto xi = -tau; xi <= tau; ++xi) {
            sum += analytic::ensemble_probability(xi, tau);
        }
        ens = std::max(ens, std::fabs(sum - 1.0));
    }
    s.at_most("ensemble_normalization", ens, 1e-12);
}

void suite_energy(Suite& s) {
    const auto tau_max = std::min<std::int64_t>(s.options().tau_max, 30);
    double norm = 0.0;
    double mean = 0.0;
    double var = 0.0;
    for (std::int64_t tau = 1; tau <= tau_max; ++tau) {
        for (auto xi = -tau; xi <= tau; ++xi) {
            double m0 = 0.0;
            double m1 = 0.0;
            double m2 = 0.0;
            for (const auto sigma : analytic::energy_support(xi, tau)) {
                const double w = analytic::energy_pmf(sigma, xi, tau);
                const auto sg = static_cast<double>(sigma);
                m0 += w;
                m1 += w * sg;
                m2 += w * sg * sg;
            }
            norm = std::max(norm, std::fabs(m0 - 1.0));
            mean = std::max(mean, std::fabs(m1 - analytic::energy_mean(xi, tau)));
            var = std::max(var, std::fabs(m2 - m1 * m1 - analytic::energy_var(xi, tau)));
        }
    }
    s.at_most("energy_pmf_normalization", norm, 1e-10);
    s.at_most("energy_mean_closed_form", mean, 1e-10);
    s.at_most("energy_var_closed_form", var, 1e-10);

    double particle = 0.0;
    for (const double p : kPropensities) {
        const double e = energy_propensity(MomentumPropensity(p));
        for (std::int64_t tau = 1; tau <= tau_max; ++tau) {
            double m0 = 0.0;
            double m1 = 0.0;
            for (std::int64_t sigma = 0; sigma <= tau; ++sigma) {
                const double w = analytic::particle_energy_pmf(sigma, tau, e);
                m0 += w;
                m1 += w * static_cast<double>(sigma);
            }
            particle = std::max({particle, std::fabs(m0 - 1.0), std::fabs(m1 - e * static_cast<double>(tau))});
        }
    }
    s.at_most("particle_energy_moments", particle, 1e-10);
}

void suite_action(Suite& s) {
    s.at_most("action_origin_tau2", std::fabs(analytic::action(0, 2) - 2.0 / 3.0), 1e-15);
    const std::int64_t tau = 10000;
    const std::int64_t xi = 100;
    const double gap = std::numbers::pi * (analytic::action(xi, tau) - analytic::action(0, tau));
    const double phase = analytic::qm_phase(static_cast<double>(xi), static_cast<double>(tau));
    s.at_most("phase_relative_gap", std::fabs(gap - phase) / phase, 1e-4);
    double ratio = 0.0;
    for (std::int64_t t = 100; t <= 100000; t *= 10) {
        const double r = analytic::ensemble_probability(0, t) / analytic::qm_lattice_density(t) - 1.0;
        ratio = std::max(ratio, std::fabs(r) * 2.0 * static_cast<double>(t));
    }
    // |ratio - 1| <= 1/(2tau), scaled so the bound is 1.
    s.at_most("ensemble_vs_qm_density", ratio, 1.0);
}

void suite_dbb(Suite& s) {
    const auto flat = [](double) { return 0.5; };
    const auto tilted = [](double q) { return 0.5 + 0.3 * q; };
    for (const auto& [label, f] : {std::pair<const char*, std::function<double(double)>>{"flat", flat},
                                   {"tilted", tilted}}) {
        analytic::DbbGrid g;
        const auto coarse = analytic::dbb_residuals(g, f);
        g.spacing = 0.5;
        const auto fine = analytic::dbb_residuals(g, f);
        s.at_least(std::string(label) + "_continuity_ratio", coarse.continuity / fine.continuity, 3.0);
        s.at_least(std::string(label) + "_hamilton_jacobi_phase_ratio",
                   coarse.hamilton_jacobi_phase / fine.hamilton_jacobi_phase, 3.0);
        // The full continuum action carries the rest term tau/2, which leaves 1/2.
        s.at_most(std::string(label) + "_hamilton_jacobi_rest_offset", std::fabs(fine.hamilton_jacobi - 0.5), 1e-3);
    }
}

void suite_matterwave(Suite& s) {
    s.at_most("frequency_at_e1", std::fabs(analytic::matter_frequency(1.0) - 1.0), 1e-15);
    double de_broglie = 0.0;
    for (double e = 0.001; e <= 0.05 + 1e-12; e += 0.001) {
        de_broglie = std::max(de_broglie, std::fabs(analytic::matter_frequency(e) - e) / e);
    }
    s.at_most("small_energy_relative_gap", de_broglie, 0.1);

    double mass = 0.0;
    double first = 0.0;
    double freq = 0.0;
    double forms = 0.0;
    for (double b = 0.05; b < 0.951; b += 0.05) {
        double m0 = 0.0;
        double m1 = 0.0;
        for (std::int64_t n = 1; n <= 10000; ++n) {
            const double pn = analytic::return_time_pmf(n, b);
            m0 += pn;
            m1 += static_cast<double>(n) * pn;
            if (n <= 40) {
                forms = std::max(forms, std::fabs(pn - analytic::return_time_pmf_sum(n, b)));
            }
        }
        const auto closed = analytic::return_time_moments(b);
        mass = std::max(mass, std::fabs(m0 - closed.mass));
        first = std::max(first, std::fabs(m1 - closed.first));
        freq = std::max(freq, std::fabs(1.0 / analytic::mean_return_time(b) - analytic::matter_frequency(1.0 - b)));
    }
    s.at_most("pmf_closed_vs_sum", forms, 1e-15);
    s.at_most("series_mass_vs_closed", mass, 1e-9);
    s.at_most("series_first_moment_vs_closed", first, 1e-9);
    s.at_most("frequency_vs_return_time", freq, 1e-12);
}

void suite_lorentz(Suite& s) {
    RandomSource rng(s.options().seed);
    double drift = 0.0;
    double spread = 0.0;
    double speed = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = rng.uniform(-0.95, 0.95);
        const double q = rng.uniform(-0.95, 0.95);
        const double beta = rng.uniform(-0.95, 0.95);
        const auto r = analytic::lorentz_check(p, beta, q * 1000.0, 1000.0);
        drift = std::max(drift, r.drift_residual);
        spread = std::max(spread, r.spread_residual);
        speed = std::max(speed, r.speed_residual);
    }
    s.at_most("drift_identity", drift, 1e-10);
    s.at_most("spread_identity", spread, 1e-10);
    s.at_most("speed_of_light", speed, 1e-15);
    const auto r = analytic::lorentz_check(0.3, 0.5, 0.3 * 1e4, 1e4);
    s.at_most("density_at_q_eq_p", r.density_rel_gap, 1e-3);
}

void suite_boson(Suite& s) {
    double product = 0.0;
    for (const double delta : {1.0, 2.0, 3.0, 4.0}) {
        for (double q = -0.9 / delta; q <= 0.9 / delta + 1e-12; q += 0.05 / delta) {
            product = std::max(product, std::fabs(qforce::site_boson_after(q, delta, 1000) -
                                                  qforce::expected_site_momentum(q, delta)));
        }
    }
    s.at_most("site_product_vs_sinc", product, 1e-3);

    double series = 0.0;
    for (const double P : {0.01, 0.09, 0.25}) {
        series = std::max(series, std::fabs(qforce::particle_boson_series(P, 100000) - std::sqrt(P)));
    }
    s.at_most("particle_series_vs_sqrt", series, 1e-4);

    double damping = 0.0;
    for (std::int64_t k = 0; k <= 20; ++k) {
        const double closed = analytic::binomial(2 * k, k) / std::pow(4.0, static_cast<double>(k));
        damping = std::max(damping, std::fabs(qforce::particle_damping(k) - closed));
    }
    s.at_most("particle_damping_closed_form", damping, 1e-15);

    const double renewal = qforce::site_boson_renewal_mean(0.25, 2.0, 1e-4, 100000);
    s.at_most("renewal_mean_vs_sinc", std::fabs(renewal - qforce::expected_site_momentum(0.25, 2.0)), 1e-3);
}

} // namespace

VerifyReport run_verify(std::string_view suite, const VerifyOptions& options) {
    using Fn = void (*)(Suite&);
    static const std::vector<std::pair<std::string, Fn>> table{
        {"pmf", suite_pmf},         {"energy", suite_energy},   {"action", suite_action}, {"dbb", suite_dbb},
        {"matterwave", suite_matterwave}, {"lorentz", suite_lorentz}, {"boson", suite_boson}};
    if (options.tau_max < 1) {
        throw ConfigError("tau-max must be at least 1");
    }
    VerifyReport report;
    bool found = false;
    for (const auto& [name, fn] : table) {
        if (suite == "all" || suite == name) {
            Suite s(name, options, report);
            fn(s);
            found = true;
        }
    }
    if (!found) {
        throw ConfigError("unknown verify suite '" + std::string(suite) + "'");
    }
    return report;
}

void write_verify_text(std::ostream& os, const VerifyReport& report) {
    for (const auto& c : report.checks) {
        os << (c.pass ? "ok   " : "FAIL ") << c.suite << '.' << c.name << "  value=" << format_double(c.value)
           << (c.lower_bound ? "  min=" : "  max=") << format_double(c.tolerance) << '\n';
    }
    os << (report.pass() ? "all checks passed" : "some checks failed") << '\n';
}

void write_verify_json(std::ostream& os, const VerifyReport& report) {
    nlohmann::json j;
    j["pass"] = report.pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        j["checks"].push_back(
            {{"suite", c.suite}, {"name", c.name}, {"value", c.value}, {"bound", c.tolerance},
             {"kind", c.lower_bound ? "min" : "max"}, {"pass", c.pass}});
    }
    os << j.dump(2) << '\n';
}

} // namespace dsqm
