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

// Independent reference computations used only by tests. Nothing here calls
// into the library: each value is obtained by brute force, quadrature or a
// plain numeric series.

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

/// Exhaustive sum over all 3^tau step sequences of a walk starting at 0.
struct PathEnumeration {
    std::int64_t tau = 0;
    /// position[xi + tau] = Pr(X = xi)
    std::vector<long double> position;
    /// joint[{xi, sigma}] = Pr(X = xi, S = sigma), S = number of non-zero steps
    std::map<std::pair<std::int64_t, std::int64_t>, long double> joint;
    /// energy[sigma] = Pr(S = sigma)
    std::vector<long double> energy;

    long double at(std::int64_t xi) const;
    /// Pr(S = sigma | X = xi)
    long double energy_given(std::int64_t sigma, std::int64_t xi) const;
};

PathEnumeration enumerate_paths(std::int64_t tau, double p);

/// Binomial(n, theta) mass at k by a running product in long double.
long double binomial_pmf(std::int64_t n, std::int64_t k, long double theta);

/// Gauss-Legendre rule on [-1, 1] with n nodes (Newton on P_n).
struct Quadrature {
    std::vector<long double> nodes;
    std::vector<long double> weights;
};
Quadrature gauss_legendre(int n);

long double integrate(const Quadrature& rule, long double a, long double b,
                      const std::function<long double(long double)>& f);

/// Sum over n = 1..n_max of the first-return series written as
/// 2 b^(2n) (1/4 + sum_{k=2..n} (1 + 4(n-k))/4^k): {sum P(n), sum n P(n)}.
std::pair<long double, long double> return_time_series(long double b, std::int64_t n_max);

/// sin(pi x)/(pi x), 1 at x = 0.
long double sinc(long double x);

/// Products and ratios of the boosted frame evaluated from the raw definitions.
struct Boost {
    long double xi, tau, p, b;
};
Boost boost(long double p, long double beta, long double xi, long double tau);

} // namespace oracle
