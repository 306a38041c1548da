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

// Acceptance runner. `acceptance N` evaluates criterion N, prints the measured
// quantities and a final "PASS criterion N" or "FAIL criterion N" line, and
// exits non-zero on failure. Without arguments every criterion is run.

#include "dsqm/analytic.hpp"
#include "dsqm/lattice_core.hpp"
#include "dsqm/qforce.hpp"
#include "dsqm/qm_oracle.hpp"
#include "dsqm/random.hpp"
#include "dsqm/scenarios.hpp"
#include "dsqm/stats.hpp"
#include "dsqm/walker.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace dsqm;

namespace {

class Criterion {
public:
    explicit Criterion(int number) : number_(number), start_(std::chrono::steady_clock::now()) {}

    // Records one sub-check; all must hold for the criterion to pass.
    void expect(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
        std::va_list args;
        va_start(args, fmt);
        std::printf("  [%s] ", ok ? "ok" : "no");
        std::vprintf(fmt, args);
        std::printf("\n");
        va_end(args);
        pass_ = pass_ && ok;
    }

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    bool finish(const char* summary) const {
        std::printf("%s criterion %d: %s (%.2f s)\n", pass_ ? "PASS" : "FAIL", number_, summary, seconds());
        std::fflush(stdout);
        return pass_;
    }

private:
    int number_;
    std::chrono::steady_clock::time_point start_;
    bool pass_ = true;
};

// ---------------------------------------------------------------------------

bool exact_enumeration() {
    Criterion c(1);
    double pmf_err = 0.0;
    double energy_err = 0.0;
    double mean_err = 0.0;
    double var_err = 0.0;
    double particle_err = 0.0;
    for (const double p : {-0.9, -0.5, 0.0, 0.37, 0.9}) {
        const double e = energy_propensity(MomentumPropensity(p));
        for (std::int64_t tau = 0; tau <= 8; ++tau) {
            const auto en = oracle::enumerate_paths(tau, p);
            for (std::int64_t xi = -tau; xi <= tau; ++xi) {
                pmf_err = std::max(pmf_err, std::fabs(analytic::pmf_free(xi, tau, p) - static_cast<double>(en.at(xi))));
                if (tau == 0) {
                    continue;
                }
                long double mean = 0.0L;
                long double second = 0.0L;
                for (std::int64_t sigma = 0; sigma <= tau; ++sigma) {
                    const long double w = en.energy_given(sigma, xi);
                    energy_err = std::max(energy_err,
                                          std::fabs(analytic::energy_pmf(sigma, xi, tau) - static_cast<double>(w)));
                    mean += sigma * w;
                    second += static_cast<long double>(sigma * sigma) * w;
                }
                mean_err = std::max(mean_err, std::fabs(analytic::energy_mean(xi, tau) - static_cast<double>(mean)));
                if (tau >= 2) {
                    var_err = std::max(var_err, std::fabs(analytic::energy_var(xi, tau) -
                                                          static_cast<double>(second - mean * mean)));
                }
            }
            for (std::int64_t sigma = 0; sigma <= tau; ++sigma) {
                particle_err = std::max(particle_err,
                                        std::fabs(analytic::particle_energy_pmf(sigma, tau, e) -
                                                  static_cast<double>(en.energy[static_cast<std::size_t>(sigma)])));
            }
        }
    }
    const double tol = 1e-12;
    c.expect(pmf_err <= tol, "position law max error %.3g", pmf_err);
    c.expect(energy_err <= tol, "energy law given site max error %.3g", energy_err);
    c.expect(mean_err <= tol, "conditional energy mean max error %.3g", mean_err);
    c.expect(var_err <= tol, "conditional energy variance max error %.3g", var_err);
    c.expect(particle_err <= tol, "particle energy law max error %.3g", particle_err);
    c.expect(c.seconds() < 10.0, "runtime %.2f s < 10 s", c.seconds());
    return c.finish("brute-force path sums for tau <= 8");
}

bool free_motion_flatness() {
    Criterion c(2);
    const std::uint64_t np = 50000;
    const std::int64_t nt = 300;
    const auto h = run_ensemble_free(np, nt, PropensitySampler::uniform(), SourceSampler{},
                                     EnsembleOptions{.seed = 2, .threads = 1});
    Histogram full(-nt, nt);
    full.merge(h);
    const Distribution flat{-nt, std::vector<double>(2 * nt + 1, 1.0 / (2 * nt + 1))};
    const auto r = compare(full, flat);
    const double bound = 5.0 / std::sqrt(static_cast<double>(np));
    c.expect(full.offset() == -nt && full.last() == nt, "support [%lld, %lld]", static_cast<long long>(full.offset()),
             static_cast<long long>(full.last()));
    c.expect(r.pass, "chi2 %.1f on %zu dof, critical %.1f (alpha 0.001)", r.chi2, r.dof, r.critical);
    c.expect(r.max_abs_dev <= bound, "max |nu - 1/601| %.4g <= %.4g", r.max_abs_dev, bound);
    c.expect(c.seconds() < 60.0, "runtime %.2f s < 60 s", c.seconds());
    return c.finish("uniform preparation gives a flat light cone");
}

bool fixed_p_gaussian() {
    Criterion c(3);
    const std::uint64_t np = 100000;
    const std::int64_t nt = 400;
    const double p = 0.2;
    const auto h = run_ensemble_free(np, nt, PropensitySampler::fixed(p), SourceSampler{},
                                     EnsembleOptions{.seed = 3, .threads = 1});
    const double b = transition_probs(p).b;
    const double mean_bound = 3.0 * std::sqrt(b * nt / static_cast<double>(np));
    const double mean_dev = std::fabs(h.mean() - p * nt);
    const double var_rel = std::fabs(h.variance() - b * nt) / (b * nt);
    c.expect(mean_dev <= mean_bound, "sample mean %.4f, |mean - p tau| = %.4f <= %.4f", h.mean(), mean_dev, mean_bound);
    c.expect(var_rel <= 0.05, "sample variance %.3f vs b tau %.3f, relative gap %.4f <= 0.05", h.variance(), b * nt,
             var_rel);
    return c.finish("fixed p drifts at p tau and spreads as b tau");
}

// Flat over the union of the light cones, for the negative control.
Distribution flat_over_cone(const ScenarioConfig& cfg, const Histogram& h) {
    const auto sources = resolved_sources(cfg);
    std::int64_t lo = sources.front().site;
    std::int64_t hi = lo;
    for (const auto& s : sources) {
        lo = std::min(lo, s.site);
        hi = std::max(hi, s.site);
    }
    lo -= cfg.n_steps;
    hi += cfg.n_steps;
    auto d = tabulate(h.offset(), h.last(), [&](std::int64_t xi) { return xi >= lo && xi <= hi ? 1.0 : 0.0; });
    d.normalize();
    return d;
}

bool two_slit_interference() {
    Criterion c(4);
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::two_slit;
    cfg.delta = 2;
    cfg.p1 = 0.5;
    cfg.n_particles = 50000;
    cfg.n_steps = 300;
    cfg.mode = RunMode::trained;
    cfg.seed = 4;
    const auto r = qforce::run_interference(cfg);
    const auto model = scenarios::model_distribution(cfg, r.histogram);
    const auto fit = compare(r.histogram, model);
    const auto control = compare(r.histogram, flat_over_cone(cfg, r.histogram));
    const double v = fit_visibility(r.histogram, source_centre(resolved_sources(cfg)),
                                    std::numbers::pi * static_cast<double>(cfg.delta) / static_cast<double>(cfg.n_steps));
    std::printf("  fringe visibility %.3f (fully developed pattern: 1)\n", v);
    c.expect(fit.pass, "chi2 vs interference density %.1f on %zu dof, critical %.1f, l1 %.3f", fit.chi2, fit.dof,
             fit.critical, fit.l1);
    c.expect(!control.pass, "chi2 vs flat (negative control) %.1f on %zu dof, critical %.1f", control.chi2, control.dof,
             control.critical);
    c.expect(c.seconds() < 120.0, "runtime %.2f s < 120 s", c.seconds());
    return c.finish("trained two-slit pattern");
}

double binned_l1(const Histogram& h, const Distribution& model, std::size_t bins) {
    return compare(coarsen(h, bins), coarsen(model, bins)).l1;
}

bool unequal_and_three_sources() {
    Criterion c(5);
    constexpr std::size_t kBins = 10;

    ScenarioConfig unequal;
    unequal.kind = ScenarioKind::two_slit;
    unequal.delta = 2;
    unequal.p1 = 0.9;
    unequal.n_particles = 5000;
    unequal.n_steps = 10000;
    unequal.seed = 5;
    const auto ru = qforce::run_interference(unequal);
    const double l1u = binned_l1(ru.histogram, scenarios::model_distribution(unequal, ru.histogram), kBins);
    const double vis = fit_visibility(ru.histogram, source_centre(resolved_sources(unequal)),
                                      std::numbers::pi * 2.0 / static_cast<double>(unequal.n_steps));
    c.expect(l1u <= 0.05, "P1 = 0.9, P2 = 0.1: L1 on %zu bins %.4f <= 0.05", kBins, l1u);
    c.expect(std::fabs(vis - 0.6) <= 0.1, "P1 = 0.9, P2 = 0.1: visibility %.3f, target 0.6 +- 0.1", vis);

    ScenarioConfig three;
    three.kind = ScenarioKind::multi_slit;
    three.sources = {{-1, 1.0 / 3.0}, {0, 1.0 / 3.0}, {1, 1.0 / 3.0}};
    three.n_particles = 5000;
    three.n_steps = 10000;
    three.seed = 5;
    const auto rt = qforce::run_interference(three);
    const double l1t = binned_l1(rt.histogram, scenarios::model_distribution(three, rt.histogram), kBins);
    c.expect(l1t <= 0.05, "three equal sources one site apart: L1 on %zu bins %.4f <= 0.05", kBins, l1t);
    return c.finish("unequal and three-source patterns");
}

bool boson_closed_forms() {
    Criterion c(6);
    double worst_product = 0.0;
    std::size_t points = 0;
    for (int d = 1; d <= 4; ++d) {
        for (int i = -45; i <= 45; ++i) {
            const double q = i / 50.0;
            if (std::fabs(d * q) > 0.9) {
                continue;
            }
            const double limit = q * static_cast<double>(oracle::sinc(d * q));
            worst_product = std::max(worst_product, std::fabs(qforce::site_boson_after(q, d, 1000) - limit));
            ++points;
        }
    }
    c.expect(worst_product <= 1e-3, "site boson after 1000 decays vs q sinc(delta q): max error %.3g over %zu points",
             worst_product, points);
    for (const double P : {0.01, 0.09, 0.25}) {
        const double s = qforce::particle_boson_series(P, 100000);
        c.expect(std::fabs(s - std::sqrt(P)) <= 1e-4, "particle boson series P = %.2f: %.8f vs sqrt(P) = %.8f", P, s,
                 std::sqrt(P));
    }
    return c.finish("boson momentum products and series");
}

bool ring_quantization() {
    Criterion c(7);
    const std::int64_t ell = 10;
    for (const double p : {0.05, 0.33, 0.61}) {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::ring;
        cfg.ell = ell;
        cfg.p_fixed = p;
        cfg.windings = 32;
        cfg.n_particles = 400;
        cfg.n_steps = 2000;
        cfg.seed = 7;
        const auto r = qforce::run_interference(cfg);
        const double target = scenarios::ring_steady_momentum(p, ell);
        c.expect(std::fabs(r.late_mean_momentum - target) <= 0.5 / ell,
                 "p = %.2f: long-run mean momentum %.4f, allowed value %.4f, tolerance %.3f", p, r.late_mean_momentum,
                 target, 0.5 / ell);
    }
    double worst = 0.0;
    for (int i = -19; i <= 19; i += 2) {
        const double q = i / 20.0;
        worst = std::max(worst, std::fabs(scenarios::ring_limit_sum(q, ell, 1000) - scenarios::ring_limit_closed(q, ell)));
    }
    for (const double q : {0.05, 0.33, 0.61}) {
        worst = std::max(worst, std::fabs(scenarios::ring_limit_sum(q, ell, 1000) - scenarios::ring_limit_closed(q, ell)));
    }
    c.expect(worst <= 1e-2, "image sum with 1000 windings vs closed form: max gap %.3g", worst);
    return c.finish("ring momenta settle on 2n/ell");
}

bool matter_wave() {
    Criterion c(8);
    const double f1 = analytic::matter_frequency(1.0);
    c.expect(f1 == 1.0, "f(1) = %.17g", f1);
    double worst = 0.0;
    for (int i = 1; i <= 500; ++i) {
        const double e = 0.05 * i / 500.0;
        worst = std::max(worst, std::fabs(analytic::matter_frequency(e) - e) / e);
    }
    c.expect(worst <= 0.1, "max |f(e) - e|/e for e <= 0.05: %.4f", worst);
    double series_gap = 0.0;
    for (int i = 1; i <= 19; ++i) {
        const double b = 0.05 * i;
        const auto [mass, first] = oracle::return_time_series(b, 400000);
        const auto m = analytic::return_time_moments(b);
        series_gap = std::max(series_gap, std::fabs(m.mass - static_cast<double>(mass)) / static_cast<double>(mass));
        series_gap = std::max(series_gap, std::fabs(m.first - static_cast<double>(first)) / static_cast<double>(first));
    }
    c.expect(series_gap <= 1e-9, "summed return-time series vs closed forms, b in [0.05, 0.95]: max relative gap %.3g",
             series_gap);
    return c.finish("matter-wave frequency");
}

bool lorentz_identities() {
    Criterion c(9);
    RandomSource rng(9);
    double drift = 0.0;
    double spread = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = rng.uniform(-0.95, 0.95);
        const double q = rng.uniform(-0.95, 0.95);
        const double beta = rng.uniform(-0.95, 0.95);
        const double tau = 1000.0;
        const long double xi = q * tau;
        const auto o = oracle::boost(p, beta, xi, tau);
        const long double lhs = o.xi - o.p * o.tau;
        const long double rhs = (xi - p * tau) * (1.0L - p * beta) / (1.0L - q * beta);
        drift = std::max(drift, static_cast<double>(std::fabs(lhs - rhs) / tau));
        const long double b = (1.0L - static_cast<long double>(p) * p) / 2.0L;
        spread = std::max(spread, static_cast<double>(std::fabs(o.b * o.tau - b * tau) / tau));
        const auto r = analytic::lorentz_check(p, beta, static_cast<double>(xi), tau);
        drift = std::max(drift, r.drift_residual);
        spread = std::max(spread, r.spread_residual / tau);
    }
    c.expect(drift <= 1e-10, "drift identity over 100 random triples: max residual %.3g", drift);
    c.expect(spread <= 1e-10, "spread identity over 100 random triples: max residual %.3g", spread);
    const double tau = 1e4;
    const double p = 0.3;
    const auto r = analytic::lorentz_check(p, 0.5, p * tau, tau);
    c.expect(r.density_rel_gap <= 1e-3, "at q = p, tau = 1e4: primed density %.6g vs %.6g, relative gap %.3g",
             r.density_primed, r.density, r.density_rel_gap);
    return c.finish("Gaussian law is frame independent");
}

bool dbb_residuals() {
    Criterion c(10);
    const std::vector<std::pair<const char*, std::function<double(double)>>> fields{
        {"flat", [](double) { return 0.5; }}, {"tilted", [](double q) { return 0.5 + 0.3 * q; }}};
    for (const auto& [name, f] : fields) {
        analytic::DbbGrid g;
        const auto coarse = analytic::dbb_residuals(g, f);
        g.spacing = 0.5;
        const auto fine = analytic::dbb_residuals(g, f);
        const double rc = coarse.continuity / fine.continuity;
        const double rh = coarse.hamilton_jacobi / fine.hamilton_jacobi;
        c.expect(rc >= 3.0, "%s density: continuity residual %.3g -> %.3g, ratio %.2f", name, coarse.continuity,
                 fine.continuity, rc);
        c.expect(rh >= 3.0, "%s density: Hamilton-Jacobi residual %.3g -> %.3g, ratio %.2f", name,
                 coarse.hamilton_jacobi, fine.hamilton_jacobi, rh);
        std::printf("  %s density: Hamilton-Jacobi residual without the tau/2 term %.3g -> %.3g, ratio %.2f\n", name,
                    coarse.hamilton_jacobi_phase, fine.hamilton_jacobi_phase,
                    coarse.hamilton_jacobi_phase / fine.hamilton_jacobi_phase);
    }
    return c.finish("guidance equations hold to second order");
}

bool qm_correspondence() {
    Criterion c(11);
    double worst_density = 0.0;
    for (std::int64_t tau = 100; tau <= 100000; tau = tau * 3 / 2) {
        const double ratio = analytic::ensemble_probability(0, tau) / qm::qm_single_source(0.0, static_cast<double>(tau));
        worst_density = std::max(worst_density, std::fabs(ratio - 1.0) * 2.0 * static_cast<double>(tau));
    }
    c.expect(worst_density <= 1.0, "|P/(1/2tau) - 1| * 2tau over tau >= 100: max %.4f <= 1", worst_density);
    const std::int64_t tau = 10000;
    double worst_phase = 0.0;
    const double base = analytic::action(0, tau);
    for (std::int64_t xi = 1; xi <= tau; xi += 7) {
        const double phase = analytic::qm_phase(static_cast<double>(xi), static_cast<double>(tau));
        const double model = std::numbers::pi * (analytic::action(xi, tau) - base);
        worst_phase = std::max(worst_phase, std::fabs(model - phase) / phase);
    }
    c.expect(worst_phase <= 1e-4, "pi (action - action at centre) vs free phase at tau = 1e4: max relative gap %.3g",
             worst_phase);
    return c.finish("ensemble density and action match the free wave");
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> criteria{
        exact_enumeration,   free_motion_flatness, fixed_p_gaussian, two_slit_interference,
        unequal_and_three_sources, boson_closed_forms, ring_quantization, matter_wave,
        lorentz_identities,  dbb_residuals,        qm_correspondence};
    std::vector<int> which;
    if (argc < 2) {
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
            which.push_back(i);
        }
    }
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: acceptance [1-%zu ...]\n", criteria.size());
            return 2;
        }
        which.push_back(n);
    }
    bool ok = true;
    for (const int n : which) {
        ok = criteria[static_cast<std::size_t>(n - 1)]() && ok;
    }
    return ok ? 0 : 1;
}
