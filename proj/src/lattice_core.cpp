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

#include "dsqm/lattice_core.hpp"

#include "dsqm/errors.hpp"

#include <cmath>
#include <string>

namespace dsqm {

LatticeUnits lattice_units(double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw DomainError("lattice_units: mass must be positive, got " + std::to_string(mass));
    }
    const double X = kPlanck / (2.0 * mass * kSpeedOfLight);
    const double T = X / kSpeedOfLight;
    return {mass, X, T, kSpeedOfLight};
}

UncertaintyProduct uncertainty_product(std::int64_t iterations) {
    if (iterations < 1) {
        throw DomainError("uncertainty_product: need at least one iteration");
    }
    const auto n = static_cast<double>(iterations);
    const double dv = 1.0 / n;
    const double dx = 2.0 * n;
    return {dv, dx, dv * dx};
}

UncertaintyProduct uncertainty_product(std::int64_t iterations, const LatticeUnits& units) {
    const auto lattice = uncertainty_product(iterations);
    return {lattice.dv * units.c, lattice.dx * units.X, lattice.product * units.X * units.X / units.T};
}

MomentumPropensity::MomentumPropensity(double p) : p_(p) {
    if (!(p >= -1.0 && p <= 1.0)) {
        throw DomainError("momentum propensity must lie in [-1, 1], got " + std::to_string(p));
    }
}

MomentumPropensity MomentumPropensity::clamped(double p) noexcept {
    if (std::isnan(p)) {
        return {0.0, Unchecked{}};
    }
    return {p < -1.0 ? -1.0 : (p > 1.0 ? 1.0 : p), Unchecked{}};
}

TransitionProbs transition_probs(double p) {
    return transition_probs(MomentumPropensity(p));
}

} // namespace dsqm
