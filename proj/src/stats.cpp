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

#include "dsqm/stats.hpp"

#include "dsqm/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace dsqm {

Histogram::Histogram(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) {
        throw DomainError("Histogram: empty support");
    }
    offset_ = lo;
    counts_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
}

void Histogram::cover(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) {
        return;
    }
    if (counts_.empty()) {
        offset_ = lo;
        counts_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        return;
    }
    if (lo < offset_) {
        counts_.insert(counts_.begin(), static_cast<std::size_t>(offset_ - lo), 0);
        offset_ = lo;
    }
    if (hi > last()) {
        counts_.resize(static_cast<std::size_t>(hi - offset_ + 1), 0);
    }
}

void Histogram::add(std::int64_t site, std::uint64_t n) {
    cover(site, site);
    counts_[static_cast<std::size_t>(site - offset_)] += n;
    total_ += n;
}

Histogram& Histogram::merge(const Histogram& other) {
    if (other.counts_.empty()) {
        return *this;
    }
    cover(other.offset_, other.last());
    const auto shift = static_cast<std::size_t>(other.offset_ - offset_);
    for (std::size_t i = 0; i < other.counts_.size(); ++i) {
        counts_[shift + i] += other.counts_[i];
    }
    total_ += other.total_;
    return *this;
}

std::uint64_t Histogram::count_at(std::int64_t site) const noexcept {
    if (site < offset_ || site > last()) {
        return 0;
    }
    return counts_[static_cast<std::size_t>(site - offset_)];
}

std::vector<double> Histogram::normalize() const {
    std::vector<double> nu(counts_.size(), 0.0);
    if (total_ == 0) {
        return nu;
    }
    const auto n = static_cast<double>(total_);
    std::transform(counts_.begin(), counts_.end(), nu.begin(),
                   [n](std::uint64_t c) { return static_cast<double>(c) / n; });
    return nu;
}

double Histogram::mean() const {
    if (total_ == 0) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        acc += static_cast<double>(counts_[i]) * static_cast<double>(offset_ + static_cast<std::int64_t>(i));
    }
    return acc / static_cast<double>(total_);
}

double Histogram::variance() const {
    if (total_ < 2) {
        return 0.0;
    }
    const double m = mean();
    double acc = 0.0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        const double d = static_cast<double>(offset_ + static_cast<std::int64_t>(i)) - m;
        acc += static_cast<double>(counts_[i]) * d * d;
    }
    return acc / static_cast<double>(total_ - 1);
}

double Distribution::sum() const noexcept {
    double s = 0.0;
    for (double v : p) {
        s += v;
    }
    return s;
}

Distribution& Distribution::normalize() {
    const double s = sum();
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("Distribution::normalize: non-positive mass");
    }
    for (double& v : p) {
        v /= s;
    }
    return *this;
}

double Distribution::at(std::int64_t site) const noexcept {
    if (site < offset || site > last()) {
        return 0.0;
    }
    return p[static_cast<std::size_t>(site - offset)];
}

double chi2_critical(std::size_t dof, double alpha) {
    if (dof == 0) {
        return 0.0;
    }
    const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

double chi2_survival(double chi2, std::size_t dof) {
    if (dof == 0) {
        return 1.0;
    }
    const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
    return boost::math::cdf(boost::math::complement(dist, std::max(chi2, 0.0)));
}

ComparisonReport compare(std::span<const double> nu, std::int64_t offset, const Distribution& ref,
                         std::uint64_t total, double alpha) {
    if (offset != ref.offset || nu.size() != ref.p.size()) {
        throw SupportMismatch("compare: observed support [" + std::to_string(offset) + ", " +
                              std::to_string(offset + static_cast<std::int64_t>(nu.size()) - 1) +
                              "] differs from reference [" + std::to_string(ref.offset) + ", " +
                              std::to_string(ref.last()) + "]");
    }
    if (std::abs(ref.sum() - 1.0) > 1e-6) {
        throw DomainError("compare: reference sums to " + format_double(ref.sum()) + ", expected 1");
    }

    ComparisonReport r;
    r.alpha = alpha;
    const auto n = static_cast<double>(total);

    double obs = 0.0;
    double expect = 0.0;
    std::vector<std::pair<double, double>> groups;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const double dev = std::abs(nu[i] - ref.p[i]);
        r.l1 += dev;
        r.max_abs_dev = std::max(r.max_abs_dev, dev);
        obs += nu[i] * n;
        expect += ref.p[i] * n;
        if (expect >= kMinExpectedCount) {
            groups.emplace_back(obs, expect);
            obs = 0.0;
            expect = 0.0;
        }
    }
    if (obs > 0.0 || expect > 0.0) {
        if (groups.empty()) {
            groups.emplace_back(obs, expect);
        } else {
            groups.back().first += obs;
            groups.back().second += expect;
        }
    }
    for (const auto& [o, e] : groups) {
        if (e > 0.0) {
            r.chi2 += (o - e) * (o - e) / e;
        } else if (o > 0.0) {
            r.chi2 = std::numeric_limits<double>::infinity();
        }
    }
    r.dof = groups.empty() ? 0 : groups.size() - 1;
    r.critical = chi2_critical(r.dof, alpha);
    r.p_value = chi2_survival(r.chi2, r.dof);
    r.pass = r.chi2 <= r.critical;
    return r;
}

ComparisonReport compare(const Histogram& observed, const Distribution& ref, double alpha) {
    const auto nu = observed.normalize();
    return compare(nu, observed.offset(), ref, observed.total(), alpha);
}

namespace {

__extension__ using u128 = unsigned __int128;

std::size_t bin_of(std::size_t i, std::size_t size, std::size_t bins) {
    return static_cast<std::size_t>((static_cast<u128>(i) * bins) / size);
}

} // namespace

Histogram coarsen(const Histogram& h, std::size_t bins) {
    if (bins == 0 || h.size() == 0) {
        throw DomainError("coarsen: need a non-empty support and at least one bin");
    }
    Histogram out(0, static_cast<std::int64_t>(bins) - 1);
    const auto counts = h.counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] != 0) {
            out.add(static_cast<std::int64_t>(bin_of(i, counts.size(), bins)), counts[i]);
        }
    }
    return out;
}

Distribution coarsen(const Distribution& d, std::size_t bins) {
    if (bins == 0 || d.p.empty()) {
        throw DomainError("coarsen: need a non-empty support and at least one bin");
    }
    Distribution out;
    out.p.assign(bins, 0.0);
    for (std::size_t i = 0; i < d.p.size(); ++i) {
        out.p[bin_of(i, d.p.size(), bins)] += d.p[i];
    }
    return out;
}

double fit_visibility(const Histogram& h, double center, double wavenumber) {
    if (h.total() == 0) {
        return 0.0;
    }
    double acc = 0.0;
    const auto counts = h.counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double site = static_cast<double>(h.offset() + static_cast<std::int64_t>(i));
        acc += static_cast<double>(counts[i]) * std::cos(wavenumber * (site - center));
    }
    return 2.0 * acc / static_cast<double>(h.total());
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_histogram_csv(std::ostream& os, const Histogram& h, const Distribution& model,
                         const Distribution& qm) {
    os << "xi,count,frequency,model_P,qm_oracle\n";
    const auto nu = h.normalize();
    const auto counts = h.counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto site = h.offset() + static_cast<std::int64_t>(i);
        os << site << ',' << counts[i] << ',' << format_double(nu[i]) << ',' << format_double(model.at(site))
           << ',' << format_double(qm.at(site)) << '\n';
    }
}

void write_histogram_json(std::ostream& os, const Histogram& h, const Distribution& model,
                          const Distribution& qm) {
    const auto nu = h.normalize();
    const auto counts = h.counts();
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto site = h.offset() + static_cast<std::int64_t>(i);
        rows.push_back({{"xi", site},
                        {"count", counts[i]},
                        {"frequency", nu[i]},
                        {"model_P", model.at(site)},
                        {"qm_oracle", qm.at(site)}});
    }
    os << nlohmann::json{{"total", h.total()}, {"rows", std::move(rows)}}.dump() << '\n';
}

} // namespace dsqm
