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

#include "dsqm/walker.hpp"

#include <cstdint>
#include <span>
#include <vector>

/// Probability densities of the Schrodinger equation for the same scenarios,
/// expressed in lattice units (m X^2 / h T = 1/2).
namespace dsqm::qm {

/// Free particle from a point source: 1/(2tau), independent of xi.
double qm_single_source(double xi, double tau);

/// Superposition sqrt(P1) psi1 + sqrt(P2) psi2 of two sources delta apart:
/// (1 + 2 sqrt(P1 P2) cos(2 pi delta xi/(2tau))) / (2tau).
double qm_two_source(double xi, double tau, double P1, double P2, double delta);

/// N sources at arbitrary sites: pairwise cosine sum over |x_i - x_j|.
double qm_multi_source(double xi, double tau, std::span<const Source> sources);

/// N equally probable sources spaced delta apart: weights (N - j)/N for separation j delta.
double qm_equal_spaced(double xi, double tau, std::int64_t n_sources, double delta);

/// Momenta 2n/ell, |2n/ell| <= 1, on a ring of ell sites (n = 0 included).
std::vector<double> qm_ring_momenta(std::int64_t ell);

/// Momenta n/ell, 0 < |n/ell| <= 1, in a box of ell sites (n = 0 is the null state).
std::vector<double> qm_box_momenta(std::int64_t ell);

/// Stationary box density (2/ell) sin^2(n pi x/ell) for x in [0, ell]; 0 outside.
double qm_box_density(double x, std::int64_t ell, std::int64_t n);

} // namespace dsqm::qm
