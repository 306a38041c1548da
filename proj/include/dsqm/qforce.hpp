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

#include "dsqm/particle.hpp"
#include "dsqm/random.hpp"
#include "dsqm/scenarios.hpp"
#include "dsqm/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <unordered_map>

namespace dsqm::qforce {

/// Boson resident on a site. w0 is the visiting particle's sample momentum
/// lambda/tau at creation and dw0 = delta * w0.
struct SiteBoson {
    double w = 0.0;
    double w0 = 0.0;
    double dw0 = 0.0;
    std::int64_t lifetime = 0;
};

/// Register and resident bosons of one site. The register is empty until the
/// first visit.
struct SiteState {
    std::optional<std::int64_t> mu;
    std::map<BosonKey, SiteBoson> bosons;
};

/// One decay step of a site boson: lifetime + 1, w *= 1 - (dw0/lifetime)^2.
SiteBoson decay_site_boson(SiteBoson b);

/// One decay step of a particle boson: k + 1, momentum *= 1 - 1/(2k).
ParticleBoson decay_particle_boson(ParticleBoson b);

/// A particle at site xi (unwrapped), time tau >= 1, meets the site register.
///
/// First visit: the register takes lambda, nothing else happens. When the
/// register differs from lambda a boson pair keyed by the two counter origins
/// is created: the particle takes over the resident boson of that key (its
/// current w, or 0 if there was none), the resident boson restarts at
/// w0 = lambda/tau, and the register and the particle counter are exchanged.
/// Returns the key of the created pair. Throws DomainError for tau < 1.
std::optional<BosonKey> visit(SiteState& site, ParticleState& particle);

/// p0 minus the carried boson momenta, clamped to [-1, 1].
double total_momentum(const ParticleState& particle);

/// Steady-state resident boson for q = xi/tau: q sinc(delta q) = sin(pi delta q)/(pi delta).
double expected_site_momentum(double q, double delta);

/// Steady-state particle boson: sqrt(P1 P2) sin(pi delta q)/(pi delta).
double expected_particle_boson(double P1, double P2, double q, double delta);

/// Resident boson after `lifetime` undisturbed decays from w0 = q.
double site_boson_after(double q, double delta, std::int64_t lifetime);

/// Expected resident boson when each iteration recreates it with probability
/// r: r sum_{l=0..tau} (1-r)^l site_boson_after(q, delta, l).
double site_boson_renewal_mean(double q, double delta, double r, std::int64_t tau);

/// Cumulative particle-boson damping after k decays, prod_{l<=k} (2l-1)/(2l).
double particle_damping(std::int64_t k);

/// P sum_{k=0..k_max} (1-P)^k particle_damping(k); tends to sqrt(P).
double particle_boson_series(double P, std::int64_t k_max);

/// Sparse lattice memory keyed by site. Site bosons decay once per tick();
/// the decay is applied lazily on access, with the same arithmetic as
/// calling decay_site_boson on every resident boson each tick.
class Lattice {
public:
    /// The site, with its resident bosons brought up to the current tick.
    SiteState& at(std::int64_t site);

    /// Advances every resident boson by one decay step.
    void tick() noexcept { ++clock_; }

    std::int64_t clock() const noexcept { return clock_; }
    std::size_t size() const noexcept { return sites_.size(); }

    /// Visits every site (bringing bosons up to date) in ascending site order.
    template <class F>
    void for_each(F&& f) {
        for (auto& [site, entry] : sites_) {
            sync(entry);
            f(site, entry.state);
        }
    }

private:
    struct Entry {
        SiteState state;
        std::int64_t synced = 0;
    };
    void sync(Entry& e) const;

    std::map<std::int64_t, Entry> sites_;
    std::int64_t clock_ = 0;
};

struct RunOptions {
    /// Optional per-emission CSV: particle,source,xi,tau,lambda,created,carried,p_eff.
    std::ostream* diagnostics = nullptr;
};

struct InterferenceResult {
    /// Arrivals after n_steps. Two/multi-slit: site; ring: unwrapped site;
    /// box: physical site in [0, ell].
    Histogram histogram;
    double mean_final_momentum = 0.0; ///< ensemble mean of p_eff at the last step
    double late_mean_momentum = 0.0;  ///< mean of p_eff over the second half of the steps
    double mean_velocity = 0.0;       ///< ensemble mean of (xi - xi0)/n_steps, unwrapped
    std::uint64_t bosons_created = 0;
    std::uint64_t wide_site_bosons = 0; ///< resident bosons created with |dw0| >= 1
};

/// Emits config.n_particles particles and walks each for config.n_steps steps
/// under the boson-mediated memory.
///
/// Trained mode skips the lattice: every step the register is drawn from the
/// source probabilities and, when it differs from the particle's current
/// origin, the particle takes a boson at its steady-state momentum. Training
/// mode runs the full lattice sequentially with no gap between emissions.
/// Throws ConfigError for free scenarios or invalid configurations.
InterferenceResult run_interference(const ScenarioConfig& config, const RunOptions& options = {});

} // namespace dsqm::qforce
