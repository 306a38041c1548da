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

namespace dsqm {

// CODATA exact SI values.
inline constexpr double kPlanck = 6.62607015e-34;      // J s
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s

/// Spatial and temporal quanta of the lattice for a particle of given mass.
struct LatticeUnits {
    double mass; ///< kg
    double X;    ///< m, spatial quantum
    double T;    ///< s, temporal quantum
    double c;    ///< m/s
};

/// X = h/(2mc), T = h/(2mc^2). Throws DomainError for mass <= 0.
LatticeUnits lattice_units(double mass);

/// Velocity/position uncertainty after an observation of N iterations,
/// expressed in lattice units (c, X and X^2/T respectively).
struct UncertaintyProduct {
    double dv;      ///< c/N
    double dx;      ///< 2N X
    double product; ///< 2 X^2/T, independent of N
};

UncertaintyProduct uncertainty_product(std::int64_t iterations);

/// Same quantities in SI units (m/s, m, m^2/s).
UncertaintyProduct uncertainty_product(std::int64_t iterations, const LatticeUnits& units);

/// Momentum propensity p in [-1, 1]: the expected per-step velocity.
class MomentumPropensity {
public:
    /// Throws DomainError when |p| > 1 or p is NaN.
    explicit MomentumPropensity(double p);

    /// Clamps p into [-1, 1]; NaN maps to 0.
    static MomentumPropensity clamped(double p) noexcept;

    constexpr double value() const noexcept { return p_; }

private:
    struct Unchecked {};
    constexpr MomentumPropensity(double p, Unchecked) noexcept : p_(p) {}
    double p_;
};

/// e = (1 + p^2)/2, the expected squared step velocity.
constexpr double energy_propensity(MomentumPropensity p) noexcept {
    return 0.5 * (1.0 + p.value() * p.value());
}

/// Per-step law: a = Pr(+1), b = Pr(0), c = Pr(-1).
struct TransitionProbs {
    double a;
    double b;
    double c;
};

/// a = ((1+p)/2)^2, b = (1-p^2)/2, c = ((1-p)/2)^2.
constexpr TransitionProbs transition_probs(MomentumPropensity p) noexcept {
    const double v = p.value();
    const double up = 0.5 * (1.0 + v);
    const double down = 0.5 * (1.0 - v);
    return {up * up, 0.5 * (1.0 - v * v), down * down};
}

/// Checked overload for raw doubles.
TransitionProbs transition_probs(double p);

/// Maps a uniform u in [0,1) to a velocity: +1 if u < a, 0 if u < a+b, else -1.
constexpr int velocity_from_uniform(const TransitionProbs& t, double u) noexcept {
    if (u < t.a) {
        return 1;
    }
    return u < t.a + t.b ? 0 : -1;
}

} // namespace dsqm
