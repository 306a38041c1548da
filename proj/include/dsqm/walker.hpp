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

#include "dsqm/lattice_core.hpp"
#include "dsqm/particle.hpp"
#include "dsqm/random.hpp"
#include "dsqm/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dsqm {

/// Draws v in {+1, 0, -1} with probabilities (a, b, c) of p.
int sample_velocity(MomentumPropensity p, RandomSource& rng);

/// One iteration: tau += 1, v drawn from `effective`, xi and lambda move by v.
/// Returns v. The caller is responsible for clamping the propensity.
int advance(ParticleState& state, MomentumPropensity effective, RandomSource& rng);

/// Value form of advance().
ParticleState step(ParticleState state, MomentumPropensity effective, RandomSource& rng);

/// Final site after n_steps steps at constant propensity.
std::int64_t run_free(std::int64_t xi0, MomentumPropensity p, std::int64_t n_steps, RandomSource& rng);

/// Distribution of the momentum propensity drawn at preparation.
class PropensitySampler {
public:
    /// Density 1/(hi - lo) on [lo, hi]; the default preparation is uniform on [-1, 1].
    static PropensitySampler uniform(double lo = -1.0, double hi = 1.0);
    static PropensitySampler fixed(double p);

    double draw(RandomSource& rng) const;

    bool is_fixed() const noexcept { return lo_ == hi_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    PropensitySampler(double lo, double hi) : lo_(lo), hi_(hi) {}
    double lo_;
    double hi_;
};

/// Emission site with its probability.
struct Source {
    std::int64_t site = 0;
    double probability = 1.0;
    friend bool operator==(const Source&, const Source&) = default;
};

/// Picks a source index with the given probabilities (normalized on construction).
class SourceSampler {
public:
    SourceSampler() : SourceSampler(std::vector<Source>{Source{}}) {}
    explicit SourceSampler(std::vector<Source> sources);

    std::size_t draw(RandomSource& rng) const;
    std::span<const Source> sources() const noexcept { return sources_; }

private:
    std::vector<Source> sources_;
    std::vector<double> cumulative_;
};

/// Sharding of an ensemble: particles are processed in fixed-size blocks,
/// block b drawing from RandomSource(derive_seed(seed, b)). Output depends
/// on seed and block size only, not on the number of threads.
struct EnsembleOptions {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::uint64_t block_size = 4096;
};

/// Free-motion ensemble: each particle draws its source and p once, walks
/// n_steps, and its final site is counted.
Histogram run_ensemble_free(std::uint64_t n_particles, std::int64_t n_steps, const PropensitySampler& propensity,
                            const SourceSampler& sources, const EnsembleOptions& options);

/// Single-stream variant drawing everything from `rng`.
Histogram run_ensemble_free(std::uint64_t n_particles, std::int64_t n_steps, const PropensitySampler& propensity,
                            const SourceSampler& sources, RandomSource& rng);

} // namespace dsqm
