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

#include "dsqm/qm_oracle.hpp"

#include "dsqm/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace dsqm::qm {

namespace {

double base_density(double tau) {
    if (!(tau > 0.0)) {
        throw DomainError("qm oracle: tau must be positive");
    }
    return 1.0 / (2.0 * tau);
}

// cos of the phase difference between two free waves whose sources are d apart.
double fringe(double d, double xi, double tau) {
    return std::cos(2.0 * std::numbers::pi * d * xi / (2.0 * tau));
}

} // namespace

double qm_single_source(double, double tau) {
    return base_density(tau);
}

double qm_two_source(double xi, double tau, double P1, double P2, double delta) {
    return base_density(tau) * (1.0 + 2.0 * std::sqrt(P1 * P2) * fringe(delta, xi, tau));
}

double qm_multi_source(double xi, double tau, std::span<const Source> sources) {
    double s = 1.0;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        for (std::size_t j = i + 1; j < sources.size(); ++j) {
            const auto d = static_cast<double>(std::llabs(sources[i].site - sources[j].site));
            s += 2.0 * std::sqrt(sources[i].probability * sources[j].probability) * fringe(d, xi, tau);
        }
    }
    return base_density(tau) * s;
}

double qm_equal_spaced(double xi, double tau, std::int64_t n_sources, double delta) {
    if (n_sources < 1) {
        throw DomainError("qm_equal_spaced: need at least one source");
    }
    const auto n = static_cast<double>(n_sources);
    double s = 1.0;
    for (std::int64_t j = 1; j < n_sources; ++j) {
        s += 2.0 * (n - static_cast<double>(j)) / n * fringe(static_cast<double>(j) * delta, xi, tau);
    }
    return base_density(tau) * s;
}

std::vector<double> qm_ring_momenta(std::int64_t ell) {
    if (ell < 2) {
        throw DomainError("qm_ring_momenta: ell must be at least 2");
    }
    std::vector<double> out;
    for (std::int64_t n = -ell / 2; n <= ell / 2; ++n) {
        out.push_back(2.0 * static_cast<double>(n) / static_cast<double>(ell));
    }
    return out;
}

std::vector<double> qm_box_momenta(std::int64_t ell) {
    if (ell < 2) {
        throw DomainError("qm_box_momenta: ell must be at least 2");
    }
    std::vector<double> out;
    for (std::int64_t n = -ell; n <= ell; ++n) {
        if (n != 0) {
            out.push_back(static_cast<double>(n) / static_cast<double>(ell));
        }
    }
    return out;
}

double qm_box_density(double x, std::int64_t ell, std::int64_t n) {
    if (ell < 2) {
        throw DomainError("qm_box_density: ell must be at least 2");
    }
    const auto l = static_cast<double>(ell);
    if (x < 0.0 || x > l) {
        return 0.0;
    }
    const double s = std::sin(static_cast<double>(n) * std::numbers::pi * x / l);
    return 2.0 / l * s * s;
}

} // namespace dsqm::qm
