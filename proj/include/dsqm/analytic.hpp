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

#pragma once

#include "dsqm/stats.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

/// Closed forms of the free walk and the quantities derived from it. All
/// coordinates are lattice units; xi is measured from the source.
namespace dsqm::analytic {

/// C(n, k) as a double. Exact integer arithmetic for n <= 60 (rounded once),
/// log-gamma beyond. Zero outside 0 <= k <= n.
double binomial(std::int64_t n, std::int64_t k);

/// log C(n, k); -inf outside 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);

/// Probability of being at xi after tau steps with fixed propensity p:
/// C(2tau, tau+xi) ((1+p)/2)^(tau+xi) ((1-p)/2)^(tau-xi). Zero for |xi| > tau.
/// Throws DomainError for |p| > 1 or tau < 0.
double pmf_free(std::int64_t xi, std::int64_t tau, double p);

/// pmf_free tabulated over [-tau, tau].
Distribution pmf_free_row(std::int64_t tau, double p);

/// Same row built by iterating the one-step recursion from a point mass.
Distribution pmf_recursive(std::int64_t tau, double p);

/// Normal density with mean p tau and variance b tau. Empty when b = 0
/// (|p| = 1), where the walk is a point mass. Throws DomainError for tau < 1.
std::optional<double> gaussian_limit(double xi, double tau, double p);

/// Probability at xi for a preparation with p uniform on [-1, 1]: 1/(2tau+1)
/// inside the light cone, 0 outside.
double ensemble_probability(std::int64_t xi, std::int64_t tau);

/// Free-particle density of the Schrodinger equation in lattice units: 1/(2tau).
double qm_lattice_density(std::int64_t tau);

/// Accumulated energy values reachable at (xi, tau): |xi|, |xi|+2, ..., <= tau.
std::vector<std::int64_t> energy_support(std::int64_t xi, std::int64_t tau);

/// Probability that a particle reaching (xi, tau) has accumulated energy sigma,
/// as the ratio of weighted path counts. Independent of p. Zero off the support.
double energy_pmf(std::int64_t sigma, std::int64_t xi, std::int64_t tau);

/// (xi^2 + tau^2 - tau)/(2tau - 1).
double energy_mean(std::int64_t xi, std::int64_t tau);

/// 2 (xi^2 - tau^2)(xi^2 - (tau-1)^2) / ((2tau-1)^2 (2tau-3)).
double energy_var(std::int64_t xi, std::int64_t tau);

/// Energy accumulated by a particle regardless of position: Binomial(tau, e) at sigma.
double particle_energy_pmf(std::int64_t sigma, std::int64_t tau, double e);

/// Action at (xi, tau): the p-averaged expected accumulated energy. Equal to energy_mean.
double action(std::int64_t xi, std::int64_t tau);

/// Large-tau form of the action, (xi^2 + tau^2)/(2tau).
double action_continuum(double xi, double tau);

/// Phase of the free Schrodinger wavefunction in lattice units, pi xi^2/(2tau).
double qm_phase(double xi, double tau);

/// Rectangle of (xi, tau) points: tau in [tau_lo, tau_hi] step 1, integer
/// |xi| <= xi_fraction * tau. `spacing` is the finite-difference step.
struct DbbGrid {
    std::int64_t tau_lo = 100;
    std::int64_t tau_hi = 200;
    double xi_fraction = 0.5;
    double spacing = 1.0;
};

struct DbbResiduals {
    double continuity = 0.0;      ///< max |dP/dtau + d(P dSigma/dxi)/dxi|
    double hamilton_jacobi = 0.0; ///< max |dSigma/dtau + (dSigma/dxi)^2 / 2|
    /// Same with Sigma(0, tau) = tau/2 subtracted, i.e. for the phase part xi^2/(2tau).
    double hamilton_jacobi_phase = 0.0;
    std::size_t points = 0;
};

/// Evaluates P = f(xi/tau)/tau and Sigma = action_continuum on the grid with
/// second-order central differences. P and Sigma solve the continuity
/// equation exactly, so that residual is pure discretization error,
/// O(spacing^2). The Hamilton-Jacobi residual of Sigma is not: the tau/2 term
/// leaves a constant 1/2. Only the phase part xi^2/(2tau) solves it exactly.
/// Throws DomainError when tau_lo - spacing <= 0 or the grid is empty.
DbbResiduals dbb_residuals(const DbbGrid& grid, const std::function<double(double)>& f);

/// Probability that a resting particle first returns to rest with zero net
/// displacement after n steps, for stay probability b:
/// 2 b^(2n) (n/3 - 4/9 + (13/9) 4^-n).
double return_time_pmf(std::int64_t n, double b);

/// Same value from the unreduced sum 2 b^(2n) (1/4 + sum_{k=2..n} (1 + 4(n-k))/4^k).
double return_time_pmf_sum(std::int64_t n, double b);

struct ReturnTimeMoments {
    double mass = 0.0;  ///< sum_n P(n)
    double first = 0.0; ///< sum_n n P(n)
};

/// Closed-form sums of return_time_pmf over n >= 1. Requires 0 <= b < 1.
ReturnTimeMoments return_time_moments(double b);

/// first / mass; throws DomainError at b = 0 where both vanish.
double mean_return_time(double b);

/// Matter-wave frequency 1/tau_r as a rational function of e = 1 - b.
/// f(0) = 0 and f(1) = 1; f(e) ~ e for small e. Throws DomainError outside [0, 1].
double matter_frequency(double e);

/// Primed quantities under a boost of velocity beta and the residuals of the
/// two identities that make the Gaussian law frame-independent.
struct LorentzReport {
    double scale = 1.0;       ///< X'/X = T'/T
    double xi = 0.0;          ///< xi'
    double tau = 0.0;         ///< tau'
    double p = 0.0;           ///< p' (relativistic velocity addition)
    double b = 0.0;           ///< b'
    double drift_residual = 0.0;     ///< |(xi' - p'tau') - (xi - p tau)(1 - p beta)/(1 - q beta)|
    double spread_residual = 0.0;    ///< |b'tau' - b tau|
    double speed_residual = 0.0;     ///< |X'/T' - X/T| / (X/T)
    double density = 0.0;            ///< Gaussian law at (xi, tau)
    double density_primed = 0.0;     ///< Gaussian law at (xi', tau') with p', b'
    double density_rel_gap = 0.0;    ///< |density_primed - density| / density
};

/// q = xi/tau. Requires |p|, |q|, |beta| < 1 and tau > 0, else DomainError.
LorentzReport lorentz_check(double p, double beta, double xi, double tau);

/// Point-source solution of the continuum convection-diffusion limit of the
/// recursion: mean p tau, diffusivity e, hence variance 2 e tau. The exact
/// walk has variance b tau, so this density is too wide; kept for comparison.
double convection_diffusion_density(double xi, double tau, double p);

} // namespace dsqm::analytic
