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

#include "dsqm/qforce.hpp"

#include "dsqm/errors.hpp"
#include "dsqm/lattice_core.hpp"
#include "dsqm/walker.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dsqm::qforce {

SiteBoson decay_site_boson(SiteBoson b) {
    b.lifetime += 1;
    const double r = b.dw0 / static_cast<double>(b.lifetime);
    b.w *= 1.0 - r * r;
    return b;
}

ParticleBoson decay_particle_boson(ParticleBoson b) {
    b.lifetime += 1;
    b.momentum *= 1.0 - 1.0 / (2.0 * static_cast<double>(b.lifetime));
    return b;
}

namespace {

ParticleBoson& particle_boson(ParticleState& particle, const BosonKey& key) {
    auto it = std::find_if(particle.bosons.begin(), particle.bosons.end(),
                           [&](const ParticleBoson& b) { return b.key == key; });
    if (it == particle.bosons.end()) {
        particle.bosons.push_back({key, 0.0, 0});
        return particle.bosons.back();
    }
    return *it;
}

double sinc_momentum(double q, double delta) {
    const double x = std::numbers::pi * delta;
    return std::sin(x * q) / x;
}

} // namespace

std::optional<BosonKey> visit(SiteState& site, ParticleState& particle) {
    if (particle.tau < 1) {
        throw DomainError("visit: tau must be at least 1");
    }
    if (!site.mu) {
        site.mu = particle.lambda;
        return std::nullopt;
    }
    const std::int64_t mu = *site.mu;
    const std::int64_t lambda = particle.lambda;
    if (mu == lambda) {
        return std::nullopt;
    }
    const BosonKey key{particle.xi - lambda, particle.xi - mu};
    const auto delta = static_cast<double>(key.delta());

    const auto resident = site.bosons.find(key);
    auto& carried = particle_boson(particle, key);
    carried.momentum = resident == site.bosons.end() ? 0.0 : resident->second.w;
    carried.lifetime = 0;

    const double w0 = static_cast<double>(lambda) / static_cast<double>(particle.tau);
    site.bosons[key] = SiteBoson{w0, w0, delta * w0, 0};

    site.mu = lambda;
    particle.lambda = mu;
    return key;
}

double total_momentum(const ParticleState& particle) {
    double p = particle.p0;
    for (const auto& b : particle.bosons) {
        p -= b.momentum;
    }
    return MomentumPropensity::clamped(p).value();
}

double expected_site_momentum(double q, double delta) {
    if (delta == 0.0) {
        return q;
    }
    return sinc_momentum(q, delta);
}

double expected_particle_boson(double P1, double P2, double q, double delta) {
    return std::sqrt(P1 * P2) * expected_site_momentum(q, delta);
}

double site_boson_after(double q, double delta, std::int64_t lifetime) {
    SiteBoson b{q, q, delta * q, 0};
    for (std::int64_t l = 0; l < lifetime; ++l) {
        b = decay_site_boson(b);
    }
    return b.w;
}

double site_boson_renewal_mean(double q, double delta, double r, std::int64_t tau) {
    if (!(r > 0.0 && r <= 1.0)) {
        throw DomainError("site_boson_renewal_mean: r must lie in (0, 1]");
    }
    SiteBoson b{q, q, delta * q, 0};
    double weight = r;
    double s = r * b.w;
    for (std::int64_t l = 1; l <= tau; ++l) {
        b = decay_site_boson(b);
        weight *= 1.0 - r;
        s += weight * b.w;
    }
    return s;
}

double particle_damping(std::int64_t k) {
    ParticleBoson b{{}, 1.0, 0};
    for (std::int64_t i = 0; i < k; ++i) {
        b = decay_particle_boson(b);
    }
    return b.momentum;
}

double particle_boson_series(double P, std::int64_t k_max) {
    if (!(P > 0.0 && P <= 1.0)) {
        throw DomainError("particle_boson_series: P must lie in (0, 1]");
    }
    ParticleBoson b{{}, 1.0, 0};
    double geometric = 1.0;
    double s = b.momentum;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        b = decay_particle_boson(b);
        geometric *= 1.0 - P;
        s += geometric * b.momentum;
    }
    return P * s;
}

void Lattice::sync(Entry& e) const {
    const auto steps = clock_ - e.synced;
    if (steps > 0) {
        for (auto& [key, boson] : e.state.bosons) {
            for (std::int64_t i = 0; i < steps; ++i) {
                boson = decay_site_boson(boson);
            }
        }
    }
    e.synced = clock_;
}

SiteState& Lattice::at(std::int64_t site) {
    auto [it, inserted] = sites_.try_emplace(site);
    if (inserted) {
        it->second.synced = clock_;
    } else {
        sync(it->second);
    }
    return it->second.state;
}

namespace {

// Emission geometry shared by both modes. Trained mode works on an unfolded
// line: ring and box become rows of image sources ell (ring) or 2 ell (box) apart.
struct Geometry {
    ScenarioKind kind;
    std::int64_t ell = 0;
    std::vector<Source> sources;    // physical emission sites
    std::vector<std::int64_t> origins; // trained-mode register types
    std::vector<double> type_cumulative;
    double centre = 0.0;

    std::int64_t physical(std::int64_t xi) const {
        if (kind == ScenarioKind::ring) {
            return ((xi % ell) + ell) % ell;
        }
        if (kind == ScenarioKind::box) {
            const auto period = 2 * ell;
            const auto m = ((xi % period) + period) % period;
            return m <= ell ? m : period - m;
        }
        return xi;
    }

    // Ring arrivals are kept unwrapped so the drift stays visible.
    std::int64_t recorded(std::int64_t xi) const { return kind == ScenarioKind::box ? physical(xi) : xi; }

    bool periodic() const { return kind == ScenarioKind::ring || kind == ScenarioKind::box; }
};

Geometry make_geometry(const ScenarioConfig& c) {
    Geometry g;
    g.kind = c.kind;
    g.ell = c.ell;
    g.sources = resolved_sources(c);
    if (g.periodic()) {
        const auto spacing = c.kind == ScenarioKind::ring ? c.ell : 2 * c.ell;
        const auto x0 = g.sources.front().site;
        for (std::int64_t i = 0; i < c.windings; ++i) {
            g.origins.push_back(x0 + i * spacing);
        }
        const auto n = static_cast<double>(c.windings);
        for (std::int64_t i = 1; i <= c.windings; ++i) {
            g.type_cumulative.push_back(static_cast<double>(i) / n);
        }
        g.centre = static_cast<double>(x0);
    } else {
        double acc = 0.0;
        for (const auto& s : g.sources) {
            g.origins.push_back(s.site);
            acc += s.probability;
            g.type_cumulative.push_back(acc);
        }
        g.centre = source_centre(g.sources);
    }
    g.type_cumulative.back() = 1.0;
    return g;
}

std::size_t draw_index(const std::vector<double>& cumulative, RandomSource& rng) {
    if (cumulative.size() == 1) {
        return 0;
    }
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

Histogram empty_support(const ScenarioConfig& c, const Geometry& g) {
    if (c.kind == ScenarioKind::box) {
        return Histogram(0, c.ell);
    }
    std::int64_t lo = g.sources.front().site;
    std::int64_t hi = lo;
    for (const auto& s : g.sources) {
        lo = std::min(lo, s.site);
        hi = std::max(hi, s.site);
    }
    return Histogram(lo - c.n_steps, hi + c.n_steps);
}

struct Partial {
    Histogram histogram;
    double sum_final = 0.0;
    double sum_late = 0.0;
    double sum_velocity = 0.0;
    std::uint64_t created = 0;
    std::uint64_t wide = 0;
    std::string diagnostics;
};

void write_record(std::ostream& os, std::uint64_t particle, std::size_t source, const ParticleState& s,
                  std::uint64_t created, double p_eff) {
    os << particle << ',' << source << ',' << s.xi << ',' << s.tau << ',' << s.lambda << ',' << created << ','
       << s.bosons.size() << ',' << format_double(p_eff) << '\n';
}

double draw_p0(const ScenarioConfig& c, RandomSource& rng) {
    return c.p_fixed ? *c.p_fixed : rng.uniform(-1.0, 1.0);
}

Partial run_trained_block(const ScenarioConfig& c, const Geometry& g, std::uint64_t first, std::uint64_t count,
                          RandomSource& rng, bool want_diagnostics) {
    Partial out;
    std::ostringstream diag;
    const std::size_t n_types = g.origins.size();
    const auto late_from = c.n_steps / 2 + 1;
    std::vector<std::int32_t> slot(n_types * n_types);

    for (std::uint64_t n = 0; n < count; ++n) {
        // Emission: on a ring or in a box the particle leaves the physical source
        // while its register type is one of the images, drawn uniformly.
        std::size_t type = draw_index(g.type_cumulative, rng);
        ParticleState s;
        s.xi0 = g.periodic() ? g.sources.front().site : g.origins[type];
        s.xi = s.xi0;
        s.p0 = draw_p0(c, rng);
        std::fill(slot.begin(), slot.end(), -1);
        std::uint64_t created = 0;
        double p_eff = s.p0;

        for (std::int64_t t = 1; t <= c.n_steps; ++t) {
            p_eff = total_momentum(s);
            if (t >= late_from) {
                out.sum_late += p_eff;
            }
            advance(s, MomentumPropensity::clamped(p_eff), rng);
            for (auto& b : s.bosons) {
                b = decay_particle_boson(b);
            }
            const std::size_t reg = draw_index(g.type_cumulative, rng);
            if (reg == type) {
                continue;
            }
            const BosonKey key{g.origins[type], g.origins[reg]};
            const double q = (static_cast<double>(s.xi) - g.centre) / static_cast<double>(t);
            const double momentum = sinc_momentum(q, static_cast<double>(key.delta()));
            auto& idx = slot[type * n_types + reg];
            if (idx < 0) {
                idx = static_cast<std::int32_t>(s.bosons.size());
                s.bosons.push_back({key, momentum, 0});
            } else {
                s.bosons[static_cast<std::size_t>(idx)] = {key, momentum, 0};
            }
            s.lambda = s.xi - g.origins[reg];
            type = reg;
            ++created;
        }

        out.histogram.add(g.recorded(s.xi));
        out.sum_final += p_eff;
        if (c.n_steps > 0) {
            out.sum_velocity += static_cast<double>(s.xi - s.xi0) / static_cast<double>(c.n_steps);
        }
        out.created += created;
        if (want_diagnostics) {
            write_record(diag, first + n, type, s, created, p_eff);
        }
    }
    out.diagnostics = diag.str();
    return out;
}

Partial run_training(const ScenarioConfig& c, const Geometry& g, RandomSource& rng, std::ostream* diagnostics) {
    Partial out;
    Lattice lattice;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& src : g.sources) {
        acc += src.probability;
        cumulative.push_back(acc);
    }
    cumulative.back() = 1.0;
    const auto late_from = c.n_steps / 2 + 1;

    for (std::uint64_t n = 0; n < c.n_particles; ++n) {
        const auto source = draw_index(cumulative, rng);
        ParticleState s;
        s.xi0 = g.sources[source].site;
        s.xi = s.xi0;
        s.p0 = draw_p0(c, rng);
        std::uint64_t created = 0;
        double p_eff = s.p0;
        std::int64_t unwrapped = s.xi;

        for (std::int64_t t = 1; t <= c.n_steps; ++t) {
            p_eff = total_momentum(s);
            if (t >= late_from) {
                out.sum_late += p_eff;
            }
            const int v = advance(s, MomentumPropensity::clamped(p_eff), rng);
            unwrapped += v;
            if (c.kind == ScenarioKind::box && (s.xi < 0 || s.xi > c.ell)) {
                // Specular reflection off the wall; propensity, boson momenta
                // and counter change sign and the time counter restarts.
                s.xi = s.xi < 0 ? -s.xi : 2 * c.ell - s.xi;
                s.p0 = -s.p0;
                for (auto& b : s.bosons) {
                    b.momentum = -b.momentum;
                }
                s.lambda = -s.lambda;
                s.tau = 0;
            }
            for (auto& b : s.bosons) {
                b = decay_particle_boson(b);
            }
            lattice.tick();
            if (s.tau < 1) {
                continue;
            }
            auto& site = lattice.at(g.physical(s.xi));
            if (const auto key = visit(site, s)) {
                ++created;
                if (std::fabs(site.bosons[*key].dw0) >= 1.0) {
                    ++out.wide;
                }
            }
        }

        out.histogram.add(g.recorded(s.xi));
        out.sum_final += p_eff;
        if (c.n_steps > 0) {
            out.sum_velocity += static_cast<double>(unwrapped - s.xi0) / static_cast<double>(c.n_steps);
        }
        out.created += created;
        if (diagnostics) {
            write_record(*diagnostics, n, source, s, created, p_eff);
        }
    }
    return out;
}

} // namespace

InterferenceResult run_interference(const ScenarioConfig& config, const RunOptions& options) {
    validate(config);
    if (config.kind == ScenarioKind::free) {
        throw ConfigError("run_interference: free motion has no lattice memory");
    }
    const auto g = make_geometry(config);
    if (options.diagnostics) {
        *options.diagnostics << "particle,source,xi,tau,lambda,created,carried,p_eff\n";
    }

    InterferenceResult result;
    result.histogram = empty_support(config, g);
    std::vector<Partial> parts;
    if (config.mode == RunMode::training) {
        RandomSource rng(derive_seed(config.seed, 0));
        parts.push_back(run_training(config, g, rng, options.diagnostics));
    } else {
        const bool want = options.diagnostics != nullptr;
        parts = detail::map_blocks<Partial>(
            config.n_particles, config.block_size, config.threads,
            [&](std::uint64_t block, std::uint64_t first, std::uint64_t count) {
                RandomSource rng(derive_seed(config.seed, block));
                return run_trained_block(config, g, first, count, rng, want);
            });
    }

    double sum_final = 0.0;
    double sum_late = 0.0;
    double sum_velocity = 0.0;
    for (const auto& p : parts) {
        result.histogram.merge(p.histogram);
        sum_final += p.sum_final;
        sum_late += p.sum_late;
        sum_velocity += p.sum_velocity;
        result.bosons_created += p.created;
        result.wide_site_bosons += p.wide;
        if (options.diagnostics && !p.diagnostics.empty()) {
            *options.diagnostics << p.diagnostics;
        }
    }
    const auto n = static_cast<double>(config.n_particles);
    const auto late_steps = config.n_steps - config.n_steps / 2;
    result.mean_final_momentum = sum_final / n;
    result.late_mean_momentum = late_steps > 0 ? sum_late / (n * static_cast<double>(late_steps)) : 0.0;
    result.mean_velocity = sum_velocity / n;
    return result;
}

} // namespace dsqm::qforce
