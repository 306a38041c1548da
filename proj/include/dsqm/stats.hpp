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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dsqm {

/// Arrival counts over consecutive lattice sites starting at offset().
/// The support grows on demand; total() always equals the sum of counts.
class Histogram {
public:
    Histogram() = default;
    /// Empty histogram pre-sized to cover sites [lo, hi].
    Histogram(std::int64_t lo, std::int64_t hi);

    void add(std::int64_t site, std::uint64_t n = 1);

    /// Adds every count of `other` (supports are unioned).
    Histogram& merge(const Histogram& other);

    std::int64_t offset() const noexcept { return offset_; }
    /// Last covered site; offset() - 1 when empty.
    std::int64_t last() const noexcept { return offset_ + static_cast<std::int64_t>(counts_.size()) - 1; }
    std::size_t size() const noexcept { return counts_.size(); }
    std::uint64_t total() const noexcept { return total_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::uint64_t count_at(std::int64_t site) const noexcept;

    /// Extends the support to include [lo, hi] without adding counts.
    void cover(std::int64_t lo, std::int64_t hi);

    /// nu(xi) = count/total over the current support; sums to 1.
    std::vector<double> normalize() const;

    double mean() const;
    double variance() const; ///< unbiased sample variance

    friend bool operator==(const Histogram&, const Histogram&) = default;

private:
    std::int64_t offset_ = 0;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Reference probabilities over consecutive sites starting at offset.
struct Distribution {
    std::int64_t offset = 0;
    std::vector<double> p;

    std::int64_t last() const noexcept { return offset + static_cast<std::int64_t>(p.size()) - 1; }
    double sum() const noexcept;
    /// Rescales so that the values sum to one. Throws DomainError if the sum is not positive.
    Distribution& normalize();
    double at(std::int64_t site) const noexcept;
};

/// Tabulates f over [lo, hi].
template <class F>
Distribution tabulate(std::int64_t lo, std::int64_t hi, F&& f) {
    Distribution d;
    d.offset = lo;
    d.p.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (auto site = lo; site <= hi; ++site) {
        d.p.push_back(static_cast<double>(f(site)));
    }
    return d;
}

struct ComparisonReport {
    double l1 = 0.0;           ///< sum |nu - ref|
    double chi2 = 0.0;         ///< Pearson statistic over pooled bins
    std::size_t dof = 0;       ///< pooled bins - 1
    double max_abs_dev = 0.0;  ///< max |nu - ref|
    double critical = 0.0;     ///< chi-square quantile at 1 - alpha
    double p_value = 1.0;
    double alpha = 0.001;
    bool pass = false;         ///< chi2 <= critical
};

/// Expected count below which adjacent bins are pooled.
inline constexpr double kMinExpectedCount = 5.0;
inline constexpr double kDefaultAlpha = 0.001;

/// Goodness of fit of observed counts against a reference pmf on the same support.
///
/// Bins are pooled left to right until each group expects at least
/// kMinExpectedCount arrivals; a short remainder joins the last group. The
/// l1 part is symmetric in its arguments, the chi2 part is not.
/// Throws SupportMismatch when supports differ and DomainError when the
/// reference does not sum to one within 1e-6.
ComparisonReport compare(const Histogram& observed, const Distribution& ref, double alpha = kDefaultAlpha);

/// Same, from frequencies plus the number of samples they came from.
ComparisonReport compare(std::span<const double> nu, std::int64_t offset, const Distribution& ref,
                         std::uint64_t total, double alpha = kDefaultAlpha);

/// Upper quantile of chi-square with `dof` degrees of freedom.
double chi2_critical(std::size_t dof, double alpha);
double chi2_survival(double chi2, std::size_t dof);

/// Splits the support into `bins` near-equal runs of sites; site i goes to
/// bin floor(i * bins / size). Returned objects have offset 0 (bin index).
Histogram coarsen(const Histogram& h, std::size_t bins);
Distribution coarsen(const Distribution& d, std::size_t bins);

/// Moment estimate of V in a density proportional to 1 + V cos(k (xi - center)):
/// V = 2 <cos(k (xi - center))> over the arrivals. Unbiased when the
/// support spans whole periods of the cosine.
double fit_visibility(const Histogram& h, double center, double wavenumber);

/// Shortest round-trip decimal form of a double (locale-independent).
std::string format_double(double v);

/// CSV with header "xi,count,frequency,model_P,qm_oracle". model/qm are
/// looked up by site; sites outside their support are written as 0.
void write_histogram_csv(std::ostream& os, const Histogram& h, const Distribution& model,
                         const Distribution& qm);

/// JSON mirror of the CSV table.
void write_histogram_json(std::ostream& os, const Histogram& h, const Distribution& model,
                          const Distribution& qm);

} // namespace dsqm
