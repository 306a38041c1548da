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
#include "dsqm/walker.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsqm {

enum class ScenarioKind { free, two_slit, multi_slit, ring, box };
enum class RunMode { trained, training };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(RunMode mode);
/// Accepts both "two-slit" and "two_slit" spellings. Throws ConfigError.
ScenarioKind parse_kind(std::string_view text);
RunMode parse_mode(std::string_view text);

/// Everything needed to replay a run.
///
/// For two_slit the sources are derived from `delta` and `p1` unless given
/// explicitly. On a ring or in a box the particle is emitted from the first
/// source (default: site 0 on the ring, the middle of the box) and `windings`
/// is the number of image sources used by the trained lattice.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::free;
    std::vector<Source> sources;
    std::int64_t delta = 2;
    double p1 = 0.5;
    std::int64_t ell = 10;
    std::uint64_t n_particles = 50000;
    std::int64_t n_steps = 300;
    std::optional<double> p_fixed; ///< empty: p uniform on [-1, 1]
    RunMode mode = RunMode::trained;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::uint64_t block_size = 4096;
    std::int64_t windings = 32;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Emission sites with normalized probabilities.
std::vector<Source> resolved_sources(const ScenarioConfig& config);

/// Mean of the source positions; interference patterns are centred here.
double source_centre(std::span<const Source> sources);

/// Throws ConfigError on any inconsistency (probabilities not summing to one,
/// ell < 2, sources outside the box, non-positive sizes, ...).
void validate(const ScenarioConfig& config);

/// Flat "key = value" text, one key per line; '#' starts a comment.
/// Keys: scenario, sources (site:P,site:P,...), delta, p1, ell, np, nt,
/// p (a number or "uniform"), mode, seed, threads, block_size, windings.
std::string serialize(const ScenarioConfig& config);

/// Applies the keys found in `text` on top of `base`. Throws ConfigError on
/// unknown keys or malformed values.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});

/// parse_config on the contents of a file. Throws IoError if unreadable.
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

namespace scenarios {

/// Two sources delta apart with probabilities P1, P2:
/// (1 + 2 sqrt(P1 P2) cos(pi delta xi/tau)) / (2tau), xi from the centre.
double two_slit_density(double xi, double tau, double P1, double P2, double delta);

/// Steady-state density of the mean momentum, (1 + 2 sqrt(P1 P2) cos(pi delta pbar))/2 on [-1, 1].
double momentum_density_two_slit(double pbar, double P1, double P2, double delta);

/// Pairwise generalization: (1 + sum_{i<j} 2 sqrt(PiPj) cos(pi |xi_i - xi_j| xi/tau)) / (2tau).
double multi_slit_density(double xi, double tau, std::span<const Source> sources);

struct MeanMotionPoint {
    std::int64_t tau = 0;
    double xi = 0.0;   ///< mean position
    double pbar = 0.0; ///< mean momentum used for the step tau -> tau + 1
};

/// Mean trajectory of a two-source ensemble starting at the centre:
/// xi_{tau+1} = xi_tau + pbar_tau with pbar = p - 2 sqrt(P1P2) sin(pi delta q)/(pi delta), q = xi/tau.
/// The first step uses pbar = p. Returns tau_max + 1 points.
std::vector<MeanMotionPoint> mean_motion(double p, double P1, double P2, double delta, std::int64_t tau_max);

/// Fixed point q* = p - 2 sqrt(P1P2) sin(pi delta q*)/(pi delta) reached by iteration from q = p.
double mean_motion_fixed_point(double p, double P1, double P2, double delta);

/// Allowed steady momentum on a ring of ell sites: (2/ell) round(p ell/2), half away from zero.
double ring_steady_momentum(double p, std::int64_t ell);

/// Allowed steady momentum in a box of ell sites: round(p ell)/ell.
double box_steady_momentum(double p, std::int64_t ell);

/// Image-source boson sum on a ring truncated at n_sources images:
/// sum_{i<j} (2/n) sin(pi (j-i) ell q)/(pi (j-i) ell). Throws DomainError for n_sources < 2.
double ring_limit_sum(double q, std::int64_t ell, std::int64_t n_sources);

/// Limit of ring_limit_sum: 1/ell - q + (2/ell) floor(q ell/2). At the jumps
/// (q a multiple of 2/ell) every partial sum is 0 instead.
double ring_limit_closed(double q, std::int64_t ell);

/// Smallest number of images after which adding one more changes
/// ring_limit_sum(q) by less than tol.
std::int64_t ring_windings_for(double q, std::int64_t ell, double tol, std::int64_t max_sources = 1 << 20);

/// Reference probabilities over the support of `h` predicted by the model
/// for this scenario, normalized to one over that support.
Distribution model_distribution(const ScenarioConfig& config, const Histogram& h);

/// Schrodinger-equation reference over the same support (not renormalized).
Distribution qm_distribution(const ScenarioConfig& config, const Histogram& h);

} // namespace scenarios
} // namespace dsqm
