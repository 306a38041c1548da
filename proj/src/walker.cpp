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

#include "dsqm/walker.hpp"

#include "dsqm/errors.hpp"
#include "parallel.hpp"

#include <cmath>
#include <string>

namespace dsqm {

int sample_velocity(MomentumPropensity p, RandomSource& rng) {
    return velocity_from_uniform(transition_probs(p), rng.uniform());
}

int advance(ParticleState& state, MomentumPropensity effective, RandomSource& rng) {
    const int v = sample_velocity(effective, rng);
    state.tau += 1;
    state.xi += v;
    state.lambda += v;
    return v;
}

ParticleState step(ParticleState state, MomentumPropensity effective, RandomSource& rng) {
    advance(state, effective, rng);
    return state;
}

std::int64_t run_free(std::int64_t xi0, MomentumPropensity p, std::int64_t n_steps, RandomSource& rng) {
    const auto probs = transition_probs(p);
    std::int64_t xi = xi0;
    for (std::int64_t n = 0; n < n_steps; ++n) {
        xi += velocity_from_uniform(probs, rng.uniform());
    }
    return xi;
}

PropensitySampler PropensitySampler::uniform(double lo, double hi) {
    (void)MomentumPropensity(lo);
    (void)MomentumPropensity(hi);
    if (!(lo < hi)) {
        throw DomainError("PropensitySampler::uniform: need lo < hi");
    }
    return {lo, hi};
}

PropensitySampler PropensitySampler::fixed(double p) {
    (void)MomentumPropensity(p);
    return {p, p};
}

double PropensitySampler::draw(RandomSource& rng) const {
    if (is_fixed()) {
        return lo_;
    }
    return rng.uniform(lo_, hi_);
}

SourceSampler::SourceSampler(std::vector<Source> sources) : sources_(std::move(sources)) {
    if (sources_.empty()) {
        throw ConfigError("at least one source is required");
    }
    double total = 0.0;
    for (const auto& s : sources_) {
        if (!(s.probability >= 0.0) || !std::isfinite(s.probability)) {
            throw ConfigError("source probabilities must be non-negative");
        }
        total += s.probability;
    }
    if (!(total > 0.0)) {
        throw ConfigError("source probabilities sum to zero");
    }
    double acc = 0.0;
    for (auto& s : sources_) {
        s.probability /= total;
        acc += s.probability;
        cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
}

std::size_t SourceSampler::draw(RandomSource& rng) const {
    if (sources_.size() == 1) {
        return 0;
    }
    const double u = rng.uniform();
    for (std::size_t i = 0; i < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) {
            return i;
        }
    }
    return cumulative_.size() - 1;
}

namespace {

void walk_particles(std::uint64_t count, std::int64_t n_steps, const PropensitySampler& propensity,
                    const SourceSampler& sources, RandomSource& rng, Histogram& out) {
    for (std::uint64_t n = 0; n < count; ++n) {
        const auto xi0 = sources.sources()[sources.draw(rng)].site;
        const auto p = MomentumPropensity(propensity.draw(rng));
        out.add(run_free(xi0, p, n_steps, rng));
    }
}

Histogram light_cone(const SourceSampler& sources, std::int64_t n_steps) {
    std::int64_t lo = sources.sources().front().site;
    std::int64_t hi = lo;
    for (const auto& s : sources.sources()) {
        lo = std::min(lo, s.site);
        hi = std::max(hi, s.site);
    }
    return Histogram(lo - n_steps, hi + n_steps);
}

} // namespace

Histogram run_ensemble_free(std::uint64_t n_particles, std::int64_t n_steps, const PropensitySampler& propensity,
                            const SourceSampler& sources, const EnsembleOptions& options) {
    if (n_particles < 1) {
        throw DomainError("run_ensemble_free: need at least one particle");
    }
    if (n_steps < 0) {
        throw DomainError("run_ensemble_free: negative step count");
    }
    auto shards = detail::map_blocks<Histogram>(
        n_particles, options.block_size, options.threads, [&](std::uint64_t block, std::uint64_t, std::uint64_t count) {
            RandomSource rng(derive_seed(options.seed, block));
            Histogram h;
            walk_particles(count, n_steps, propensity, sources, rng, h);
            return h;
        });
    Histogram total = light_cone(sources, n_steps);
    for (const auto& h : shards) {
        total.merge(h);
    }
    return total;
}

Histogram run_ensemble_free(std::uint64_t n_particles, std::int64_t n_steps, const PropensitySampler& propensity,
                            const SourceSampler& sources, RandomSource& rng) {
    if (n_particles < 1) {
        throw DomainError("run_ensemble_free: need at least one particle");
    }
    if (n_steps < 0) {
        throw DomainError("run_ensemble_free: negative step count");
    }
    Histogram total = light_cone(sources, n_steps);
    walk_particles(n_particles, n_steps, propensity, sources, rng, total);
    return total;
}

} // namespace dsqm
