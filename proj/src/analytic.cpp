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

#include "dsqm/analytic.hpp"

#include "dsqm/errors.hpp"
#include "dsqm/lattice_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dsqm::analytic {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::int64_t kExactBinomialMax = 60;
constexpr std::int64_t kExactTauMax = 30;

void require_tau(std::int64_t tau, const char* what) {
    if (tau < 0) {
        throw DomainError(std::string(what) + ": tau must be non-negative");
    }
}

double checked_p(double p, const char* what) {
    if (!(std::fabs(p) <= 1.0)) {
        throw DomainError(std::string(what) + ": |p| must not exceed 1");
    }
    return p;
}

// log(x^k) with 0^0 = 1.
double log_power(double x, std::int64_t k) {
    if (k == 0) {
        return 0.0;
    }
    return static_cast<double>(k) * std::log(x);
}

} // namespace

double binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    if (n <= kExactBinomialMax) {
        u128 r = 1;
        for (std::int64_t i = 1; i <= k; ++i) {
            r = r * static_cast<u128>(n - k + i) / static_cast<u128>(i);
        }
        return static_cast<double>(r);
    }
    return std::exp(log_binomial(n, k));
}

double log_binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    if (n <= kExactBinomialMax) {
        return std::log(binomial(n, k));
    }
    const auto dn = static_cast<double>(n);
    const auto dk = static_cast<double>(k);
    return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

double pmf_free(std::int64_t xi, std::int64_t tau, double p) {
    require_tau(tau, "pmf_free");
    checked_p(p, "pmf_free");
    if (std::llabs(xi) > tau) {
        return 0.0;
    }
    const double up = 0.5 * (1.0 + p);
    const double down = 0.5 * (1.0 - p);
    const std::int64_t n_up = tau + xi;
    const std::int64_t n_down = tau - xi;
    if ((up == 0.0 && n_up > 0) || (down == 0.0 && n_down > 0)) {
        return 0.0;
    }
    if (tau <= kExactTauMax) {
        return binomial(2 * tau, n_up) * std::pow(up, static_cast<double>(n_up)) *
               std::pow(down, static_cast<double>(n_down));
    }
    return std::exp(log_binomial(2 * tau, n_up) + log_power(up, n_up) + log_power(down, n_down));
}

Distribution pmf_free_row(std::int64_t tau, double p) {
    require_tau(tau, "pmf_free_row");
    checked_p(p, "pmf_free_row");
    return tabulate(-tau, tau, [&](std::int64_t xi) { return pmf_free(xi, tau, p); });
}

Distribution pmf_recursive(std::int64_t tau, double p) {
    require_tau(tau, "pmf_recursive");
    const auto t = transition_probs(p);
    // rho[i] holds site i - tau; sites beyond the current light cone stay 0.
    const auto width = static_cast<std::size_t>(2 * tau + 1);
    std::vector<double> rho(width + 2, 0.0);
    std::vector<double> next(width + 2, 0.0);
    rho[static_cast<std::size_t>(tau) + 1] = 1.0;
    for (std::int64_t n = 1; n <= tau; ++n) {
        for (std::size_t i = 1; i <= width; ++i) {
            next[i] = t.a * rho[i - 1] + t.b * rho[i] + t.c * rho[i + 1];
        }
        std::swap(rho, next);
    }
    Distribution d;
    d.offset = -tau;
    d.p.assign(rho.begin() + 1, rho.begin() + 1 + static_cast<std::ptrdiff_t>(width));
    return d;
}

std::optional<double> gaussian_limit(double xi, double tau, double p) {
    if (!(tau >= 1.0)) {
        throw DomainError("gaussian_limit: tau must be at least 1");
    }
    const double b = transition_probs(p).b;
    if (b <= 0.0) {
        return std::nullopt;
    }
    const double var = b * tau;
    const double d = xi - p * tau;
    return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

double ensemble_probability(std::int64_t xi, std::int64_t tau) {
    require_tau(tau, "ensemble_probability");
    if (std::llabs(xi) > tau) {
        return 0.0;
    }
    return 1.0 / static_cast<double>(2 * tau + 1);
}

double qm_lattice_density(std::int64_t tau) {
    if (tau < 1) {
        throw DomainError("qm_lattice_density: tau must be at least 1");
    }
    return 1.0 / static_cast<double>(2 * tau);
}

std::vector<std::int64_t> energy_support(std::int64_t xi, std::int64_t tau) {
    require_tau(tau, "energy_support");
    std::vector<std::int64_t> out;
    for (auto s = std::llabs(xi); s <= tau; s += 2) {
        out.push_back(s);
    }
    return out;
}

double energy_pmf(std::int64_t sigma, std::int64_t xi, std::int64_t tau) {
    require_tau(tau, "energy_pmf");
    xi = std::llabs(xi);
    if (xi > tau || sigma < xi || sigma > tau || (sigma - xi) % 2 != 0) {
        return 0.0;
    }
    // n_c = (sigma - xi)/2 left moves, n_a = n_c + xi right moves, n_b = tau - sigma rests.
    const std::int64_t n_a = (sigma + xi) / 2;
    const std::int64_t n_b = tau - sigma;
    if (tau <= kExactTauMax) {
        return std::ldexp(binomial(tau, n_a) * binomial(tau - n_a, n_b), static_cast<int>(n_b)) /
               binomial(2 * tau, tau + xi);
    }
    return std::exp(static_cast<double>(n_b) * std::numbers::ln2 + log_binomial(tau, n_a) +
                    log_binomial(tau - n_a, n_b) - log_binomial(2 * tau, tau + xi));
}

double energy_mean(std::int64_t xi, std::int64_t tau) {
    if (tau < 1) {
        throw DomainError("energy_mean: tau must be at least 1");
    }
    const auto x = static_cast<double>(xi);
    const auto t = static_cast<double>(tau);
    return (x * x + t * t - t) / (2.0 * t - 1.0);
}

double energy_var(std::int64_t xi, std::int64_t tau) {
    if (tau < 1) {
        throw DomainError("energy_var: tau must be at least 1");
    }
    const auto x2 = static_cast<double>(xi) * static_cast<double>(xi);
    const auto t = static_cast<double>(tau);
    const double v = 2.0 * (x2 - t * t) * (x2 - (t - 1.0) * (t - 1.0)) /
                     ((2.0 * t - 1.0) * (2.0 * t - 1.0) * (2.0 * t - 3.0));
    return v == 0.0 ? 0.0 : v;
}

double particle_energy_pmf(std::int64_t sigma, std::int64_t tau, double e) {
    require_tau(tau, "particle_energy_pmf");
    if (!(e >= 0.0 && e <= 1.0)) {
        throw DomainError("particle_energy_pmf: e must lie in [0, 1]");
    }
    if (sigma < 0 || sigma > tau) {
        return 0.0;
    }
    const double b = 1.0 - e;
    if (tau <= kExactTauMax) {
        return binomial(tau, sigma) * std::pow(e, static_cast<double>(sigma)) *
               std::pow(b, static_cast<double>(tau - sigma));
    }
    if ((e == 0.0 && sigma > 0) || (b == 0.0 && sigma < tau)) {
        return 0.0;
    }
    return std::exp(log_binomial(tau, sigma) + log_power(e, sigma) + log_power(b, tau - sigma));
}

double action(std::int64_t xi, std::int64_t tau) {
    return energy_mean(xi, tau);
}

double action_continuum(double xi, double tau) {
    return (xi * xi + tau * tau) / (2.0 * tau);
}

double qm_phase(double xi, double tau) {
    if (!(tau > 0.0)) {
        throw DomainError("qm_phase: tau must be positive");
    }
    return std::numbers::pi * xi * xi / (2.0 * tau);
}

DbbResiduals dbb_residuals(const DbbGrid& grid, const std::function<double(double)>& f) {
    const double h = grid.spacing;
    if (!(h > 0.0)) {
        throw DomainError("dbb_residuals: spacing must be positive");
    }
    if (static_cast<double>(grid.tau_lo) - h <= 0.0) {
        throw DomainError("dbb_residuals: grid reaches tau <= 0");
    }
    if (grid.tau_hi < grid.tau_lo || !(grid.xi_fraction >= 0.0 && grid.xi_fraction < 1.0)) {
        throw DomainError("dbb_residuals: empty or invalid grid");
    }
    auto density = [&](double xi, double tau) { return f(xi / tau) / tau; };
    auto sigma_xi = [&](double xi, double tau) {
        return (action_continuum(xi + h, tau) - action_continuum(xi - h, tau)) / (2.0 * h);
    };
    auto flux = [&](double xi, double tau) { return density(xi, tau) * sigma_xi(xi, tau); };

    DbbResiduals out;
    for (auto t = grid.tau_lo; t <= grid.tau_hi; ++t) {
        const auto tau = static_cast<double>(t);
        const auto half = static_cast<std::int64_t>(std::floor(grid.xi_fraction * tau));
        for (auto x = -half; x <= half; ++x) {
            const auto xi = static_cast<double>(x);
            const double dp_dtau = (density(xi, tau + h) - density(xi, tau - h)) / (2.0 * h);
            const double dflux = (flux(xi + h, tau) - flux(xi - h, tau)) / (2.0 * h);
            const double ds_dtau = (action_continuum(xi, tau + h) - action_continuum(xi, tau - h)) / (2.0 * h);
            const double ds_dxi = sigma_xi(xi, tau);
            // Sigma(0, tau) = tau/2 moves at exactly 1/2 per unit time.
            const double dphase_dtau = ds_dtau - (action_continuum(0.0, tau + h) - action_continuum(0.0, tau - h)) / (2.0 * h);
            out.continuity = std::max(out.continuity, std::fabs(dp_dtau + dflux));
            out.hamilton_jacobi = std::max(out.hamilton_jacobi, std::fabs(ds_dtau + 0.5 * ds_dxi * ds_dxi));
            out.hamilton_jacobi_phase = std::max(out.hamilton_jacobi_phase, std::fabs(dphase_dtau + 0.5 * ds_dxi * ds_dxi));
            ++out.points;
        }
    }
    return out;
}

double return_time_pmf(std::int64_t n, double b) {
    if (n < 1) {
        throw DomainError("return_time_pmf: n must be at least 1");
    }
    const auto dn = static_cast<double>(n);
    return 2.0 * std::pow(b, 2.0 * dn) * (dn / 3.0 - 4.0 / 9.0 + (13.0 / 9.0) * std::pow(0.25, dn));
}

double return_time_pmf_sum(std::int64_t n, double b) {
    if (n < 1) {
        throw DomainError("return_time_pmf_sum: n must be at least 1");
    }
    double s = 0.25;
    double quarter_k = 0.25;
    for (std::int64_t k = 2; k <= n; ++k) {
        quarter_k *= 0.25;
        s += static_cast<double>(1 + 4 * (n - k)) * quarter_k;
    }
    return 2.0 * std::pow(b, 2.0 * static_cast<double>(n)) * s;
}

ReturnTimeMoments return_time_moments(double b) {
    if (!(b >= 0.0 && b < 1.0)) {
        throw DomainError("return_time_moments: b must lie in [0, 1)");
    }
    const double r = b * b;
    const double s = r / 4.0;
    const double u = 1.0 - r;
    const double v = 1.0 - s;
    ReturnTimeMoments m;
    m.mass = (2.0 / 3.0) * r / (u * u) - (8.0 / 9.0) * (1.0 / u - 1.0) + (26.0 / 9.0) * (1.0 / v - 1.0);
    m.first = (2.0 / 3.0) * r * (1.0 + r) / (u * u * u) - (8.0 / 9.0) * r / (u * u) + (26.0 / 9.0) * s / (v * v);
    return m;
}

double mean_return_time(double b) {
    if (b == 0.0) {
        throw DomainError("mean_return_time: undefined at b = 0");
    }
    const auto m = return_time_moments(b);
    return m.first / m.mass;
}

double matter_frequency(double e) {
    if (!(e >= 0.0 && e <= 1.0)) {
        throw DomainError("matter_frequency: e must lie in [0, 1]");
    }
    const double e2 = e * e;
    const double e3 = e2 * e;
    const double e4 = e2 * e2;
    const double num = e * (2.0 - e) * (-1.0 - e) * (3.0 - e) * (e4 - 4.0 * e3 + 5.0 * e2 - 2.0 * e + 1.0);
    const double den = (e2 - 2.0 * e - 1.0) * (5.0 * e4 - 20.0 * e3 + 29.0 * e2 - 18.0 * e + 6.0);
    return num / den;
}

LorentzReport lorentz_check(double p, double beta, double xi, double tau) {
    if (!(tau > 0.0)) {
        throw DomainError("lorentz_check: tau must be positive");
    }
    const double q = xi / tau;
    if (!(std::fabs(p) < 1.0) || !(std::fabs(q) < 1.0) || !(std::fabs(beta) < 1.0)) {
        throw DomainError("lorentz_check: |p|, |xi/tau| and |beta| must be below 1");
    }
    const double one_pb = 1.0 - p * beta;
    const double one_qb = 1.0 - q * beta;
    const double one_bb = 1.0 - beta * beta;
    const double k = one_pb * one_pb / (one_bb * one_qb);
    const double b = transition_probs(p).b;

    LorentzReport r;
    r.scale = one_qb * std::sqrt(one_bb) / (one_pb * one_pb);
    r.xi = k * (xi - beta * tau);
    r.tau = k * (tau - beta * xi);
    r.p = (p - beta) / one_pb;
    r.b = b * one_bb / (one_pb * one_pb);

    const double drift = r.xi - r.p * r.tau;
    const double drift_expected = (xi - p * tau) * one_pb / one_qb;
    r.drift_residual = std::fabs(drift - drift_expected) / std::max(1.0, std::fabs(tau));
    r.spread_residual = std::fabs(r.b * r.tau - b * tau) / std::max(1.0, b * tau);
    // Units with X = T = 1, so c = 1.
    const double x_primed = r.scale;
    const double t_primed = r.scale;
    r.speed_residual = std::fabs(x_primed / t_primed - 1.0);

    auto gauss = [](double d, double var) {
        return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
    };
    r.density = gauss(xi - p * tau, b * tau);
    r.density_primed = gauss(drift, r.b * r.tau);
    r.density_rel_gap = std::fabs(r.density_primed - r.density) / r.density;
    return r;
}

double convection_diffusion_density(double xi, double tau, double p) {
    if (!(tau > 0.0)) {
        throw DomainError("convection_diffusion_density: tau must be positive");
    }
    const double e = energy_propensity(MomentumPropensity(p));
    const double var = 2.0 * e * tau;
    const double d = xi - p * tau;
    return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

} // namespace dsqm::analytic
