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

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace dsqm {

/// Identifies a boson type by the origins of the two spatial counters that
/// met: origin = site - counter. For a particle from a source at x the
/// origin is x, so the key of a "12" event stays the same while the
/// particle moves, and delta = |mu - lambda| = |particle_origin - register_origin|.
struct BosonKey {
    std::int64_t particle_origin = 0;
    std::int64_t register_origin = 0;

    std::int64_t delta() const noexcept { return std::llabs(particle_origin - register_origin); }

    friend auto operator<=>(const BosonKey&, const BosonKey&) = default;
};

/// Boson carried by a particle; momentum decays per visit without creation.
struct ParticleBoson {
    BosonKey key;
    double momentum = 0.0;
    std::int64_t lifetime = 0;
};

/// Walker state. `xi` is the unwrapped site: on a ring the physical site
/// is xi mod ell. `lambda` is the spatial counter, which the lattice
/// memory may exchange, so it need not equal xi - xi0.
struct ParticleState {
    std::int64_t xi = 0;
    std::int64_t xi0 = 0;
    std::int64_t tau = 0;
    std::int64_t lambda = 0;
    double p0 = 0.0;
    std::vector<ParticleBoson> bosons;

    /// Origin of the current counter value.
    std::int64_t counter_origin() const noexcept { return xi - lambda; }
};

} // namespace dsqm
