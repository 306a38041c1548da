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

#include "dsqm/scenarios.hpp"

#include "dsqm/analytic.hpp"
#include "dsqm/errors.hpp"
#include "dsqm/qm_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace dsqm {

namespace {

constexpr double kProbabilityTolerance = 1e-9;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("invalid value for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
    return value;
}

std::vector<Source> parse_sources(std::string_view text) {
    std::vector<Source> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError("sources: expected site:probability, got '" + std::string(item) + "'");
        }
        out.push_back({parse_number<std::int64_t>("sources", trim(item.substr(0, colon))),
                       parse_number<double>("sources", trim(item.substr(colon + 1)))});
    }
    if (out.empty()) {
        throw ConfigError("sources: empty list");
    }
    return out;
}

// Weights of the values n*spacing hit by round(p/spacing) when p is uniform on [-1, 1].
std::vector<std::pair<double, double>> quantized_weights(double spacing) {
    std::vector<std::pair<double, double>> out;
    const auto n_max = static_cast<std::int64_t>(std::ceil(1.0 / spacing));
    for (auto n = -n_max; n <= n_max; ++n) {
        const double v = static_cast<double>(n) * spacing;
        const double lo = std::max(-1.0, v - 0.5 * spacing);
        const double hi = std::min(1.0, v + 0.5 * spacing);
        if (hi > lo) {
            out.emplace_back(v, 0.5 * (hi - lo));
        }
    }
    return out;
}

std::vector<std::pair<double, double>> momentum_mixture(const ScenarioConfig& c, double spacing) {
    if (c.p_fixed) {
        const double v = spacing * std::round(*c.p_fixed / spacing);
        return {{v, 1.0}};
    }
    return quantized_weights(spacing);
}

} // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::free: return "free";
    case ScenarioKind::two_slit: return "two-slit";
    case ScenarioKind::multi_slit: return "multi-slit";
    case ScenarioKind::ring: return "ring";
    case ScenarioKind::box: return "box";
    }
    return "free";
}

std::string_view to_string(RunMode mode) {
    return mode == RunMode::trained ? "trained" : "training";
}

ScenarioKind parse_kind(std::string_view text) {
    std::string s(text);
    std::replace(s.begin(), s.end(), '_', '-');
    for (auto k : {ScenarioKind::free, ScenarioKind::two_slit, ScenarioKind::multi_slit, ScenarioKind::ring,
                   ScenarioKind::box}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("unknown scenario '" + std::string(text) + "'");
}

RunMode parse_mode(std::string_view text) {
    if (text == "trained") {
        return RunMode::trained;
    }
    if (text == "training") {
        return RunMode::training;
    }
    throw ConfigError("unknown mode '" + std::string(text) + "'");
}

std::vector<Source> resolved_sources(const ScenarioConfig& c) {
    if (!c.sources.empty()) {
        return c.sources;
    }
    switch (c.kind) {
    case ScenarioKind::two_slit:
        return {{c.delta - c.delta / 2, c.p1}, {-(c.delta / 2), 1.0 - c.p1}};
    case ScenarioKind::box:
        return {{c.ell / 2, 1.0}};
    case ScenarioKind::multi_slit:
        throw ConfigError("multi-slit needs an explicit source list");
    default:
        return {{0, 1.0}};
    }
}

double source_centre(std::span<const Source> sources) {
    if (sources.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (const auto& src : sources) {
        s += static_cast<double>(src.site);
    }
    return s / static_cast<double>(sources.size());
}

void validate(const ScenarioConfig& c) {
    if (c.n_particles < 1) {
        throw ConfigError("np must be at least 1");
    }
    if (c.n_steps < 0) {
        throw ConfigError("nt must be non-negative");
    }
    if (c.p_fixed && !(std::fabs(*c.p_fixed) <= 1.0)) {
        throw ConfigError("p must lie in [-1, 1]");
    }
    if (c.threads < 1 || c.block_size < 1) {
        throw ConfigError("threads and block_size must be at least 1");
    }
    if (c.kind == ScenarioKind::two_slit) {
        if (c.delta < 1) {
            throw ConfigError("delta must be at least 1");
        }
        if (!(c.p1 >= 0.0 && c.p1 <= 1.0)) {
            throw ConfigError("p1 must lie in [0, 1]");
        }
    }
    const auto sources = resolved_sources(c);
    double total = 0.0;
    for (const auto& s : sources) {
        if (!(s.probability >= 0.0)) {
            throw ConfigError("source probabilities must be non-negative");
        }
        total += s.probability;
    }
    if (std::fabs(total - 1.0) > kProbabilityTolerance) {
        throw ConfigError("source probabilities sum to " + format_double(total) + ", expected 1");
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
        for (std::size_t j = i + 1; j < sources.size(); ++j) {
            if (sources[i].site == sources[j].site) {
                throw ConfigError("two sources share site " + std::to_string(sources[i].site));
            }
        }
    }
    switch (c.kind) {
    case ScenarioKind::two_slit:
        if (sources.size() != 2) {
            throw ConfigError("two-slit needs exactly two sources");
        }
        break;
    case ScenarioKind::multi_slit:
        if (sources.size() < 2) {
            throw ConfigError("multi-slit needs at least two sources");
        }
        break;
    case ScenarioKind::ring:
    case ScenarioKind::box:
        if (c.ell < 2) {
            throw ConfigError("ell must be at least 2");
        }
        if (sources.size() != 1) {
            throw ConfigError("ring and box take a single source");
        }
        if (c.windings < 2) {
            throw ConfigError("windings must be at least 2");
        }
        if (sources[0].site < 0 || sources[0].site > c.ell || (c.kind == ScenarioKind::ring && sources[0].site == c.ell)) {
            throw ConfigError("source outside the domain");
        }
        break;
    case ScenarioKind::free:
        break;
    }
}

std::string serialize(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "scenario = " << to_string(c.kind) << '\n';
    if (!c.sources.empty()) {
        os << "sources = ";
        for (std::size_t i = 0; i < c.sources.size(); ++i) {
            os << (i ? "," : "") << c.sources[i].site << ':' << format_double(c.sources[i].probability);
        }
        os << '\n';
    }
    os << "delta = " << c.delta << '\n'
       << "p1 = " << format_double(c.p1) << '\n'
       << "ell = " << c.ell << '\n'
       << "np = " << c.n_particles << '\n'
       << "nt = " << c.n_steps << '\n'
       << "p = " << (c.p_fixed ? format_double(*c.p_fixed) : std::string("uniform")) << '\n'
       << "mode = " << to_string(c.mode) << '\n'
       << "seed = " << c.seed << '\n'
       << "threads = " << c.threads << '\n'
       << "block_size = " << c.block_size << '\n'
       << "windings = " << c.windings << '\n';
    return os.str();
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig c) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "scenario") {
            c.kind = parse_kind(value);
        } else if (key == "sources") {
            c.sources = parse_sources(value);
        } else if (key == "delta") {
            c.delta = parse_number<std::int64_t>(key, value);
        } else if (key == "p1") {
            c.p1 = parse_number<double>(key, value);
        } else if (key == "ell") {
            c.ell = parse_number<std::int64_t>(key, value);
        } else if (key == "np") {
            c.n_particles = parse_number<std::uint64_t>(key, value);
        } else if (key == "nt") {
            c.n_steps = parse_number<std::int64_t>(key, value);
        } else if (key == "p") {
            if (value == "uniform") {
                c.p_fixed.reset();
            } else {
                c.p_fixed = parse_number<double>(key, value);
            }
        } else if (key == "mode") {
            c.mode = parse_mode(value);
        } else if (key == "seed") {
            c.seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "threads") {
            c.threads = parse_number<unsigned>(key, value);
        } else if (key == "block_size") {
            c.block_size = parse_number<std::uint64_t>(key, value);
        } else if (key == "windings") {
            c.windings = parse_number<std::int64_t>(key, value);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

namespace scenarios {

double two_slit_density(double xi, double tau, double P1, double P2, double delta) {
    if (!(tau > 0.0)) {
        throw DomainError("two_slit_density: tau must be positive");
    }
    return (1.0 + 2.0 * std::sqrt(P1 * P2) * std::cos(std::numbers::pi * delta * xi / tau)) / (2.0 * tau);
}

double momentum_density_two_slit(double pbar, double P1, double P2, double delta) {
    if (std::fabs(pbar) > 1.0) {
        return 0.0;
    }
    return 0.5 * (1.0 + 2.0 * std::sqrt(P1 * P2) * std::cos(std::numbers::pi * delta * pbar));
}

double multi_slit_density(double xi, double tau, std::span<const Source> sources) {
    if (!(tau > 0.0)) {
        throw DomainError("multi_slit_density: tau must be positive");
    }
    double s = 1.0;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        for (std::size_t j = i + 1; j < sources.size(); ++j) {
            const auto d = static_cast<double>(std::llabs(sources[i].site - sources[j].site));
            s += 2.0 * std::sqrt(sources[i].probability * sources[j].probability) *
                 std::cos(std::numbers::pi * d * xi / tau);
        }
    }
    return s / (2.0 * tau);
}

std::vector<MeanMotionPoint> mean_motion(double p, double P1, double P2, double delta, std::int64_t tau_max) {
    if (tau_max < 0) {
        throw DomainError("mean_motion: tau_max must be non-negative");
    }
    if (!(std::fabs(p) <= 1.0)) {
        throw DomainError("mean_motion: |p| must not exceed 1");
    }
    const double amp = 2.0 * std::sqrt(P1 * P2) / (std::numbers::pi * delta);
    std::vector<MeanMotionPoint> out;
    out.reserve(static_cast<std::size_t>(tau_max) + 1);
    double xi = 0.0;
    for (std::int64_t tau = 0; tau <= tau_max; ++tau) {
        double pbar = p;
        if (tau > 0) {
            pbar = std::clamp(p - amp * std::sin(std::numbers::pi * delta * xi / static_cast<double>(tau)), -1.0, 1.0);
        }
        out.push_back({tau, xi, pbar});
        xi += pbar;
    }
    return out;
}

double mean_motion_fixed_point(double p, double P1, double P2, double delta) {
    const double amp = 2.0 * std::sqrt(P1 * P2) / (std::numbers::pi * delta);
    // h(q) = q - p + amp sin(pi delta q) is non-decreasing when 2 sqrt(P1P2) <= 1.
    auto h = [&](double q) { return q - p + amp * std::sin(std::numbers::pi * delta * q); };
    double lo = -2.0;
    double hi = 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ring_steady_momentum(double p, std::int64_t ell) {
    if (ell < 2) {
        throw DomainError("ring_steady_momentum: ell must be at least 2");
    }
    const auto l = static_cast<double>(ell);
    return 2.0 / l * std::round(p * l / 2.0);
}

double box_steady_momentum(double p, std::int64_t ell) {
    if (ell < 2) {
        throw DomainError("box_steady_momentum: ell must be at least 2");
    }
    const auto l = static_cast<double>(ell);
    return std::round(p * l) / l;
}

double ring_limit_sum(double q, std::int64_t ell, std::int64_t n_sources) {
    if (n_sources < 2) {
        throw DomainError("ring_limit_sum: need at least two sources");
    }
    if (ell < 1) {
        throw DomainError("ring_limit_sum: ell must be positive");
    }
    // n - d pairs are d windings apart.
    const auto n = static_cast<double>(n_sources);
    const auto l = static_cast<double>(ell);
    double s = 0.0;
    for (std::int64_t d = 1; d < n_sources; ++d) {
        const double x = std::numbers::pi * static_cast<double>(d) * l;
        s += (n - static_cast<double>(d)) * std::sin(x * q) / x;
    }
    return 2.0 / n * s;
}

double ring_limit_closed(double q, std::int64_t ell) {
    const auto l = static_cast<double>(ell);
    return 1.0 / l - q + 2.0 / l * std::floor(q * l / 2.0);
}

std::int64_t ring_windings_for(double q, std::int64_t ell, double tol, std::int64_t max_sources) {
    double prev = ring_limit_sum(q, ell, 2);
    for (std::int64_t n = 3; n <= max_sources; ++n) {
        const double cur = ring_limit_sum(q, ell, n);
        if (std::fabs(cur - prev) < tol) {
            return n - 1;
        }
        prev = cur;
    }
    return max_sources;
}

Distribution model_distribution(const ScenarioConfig& c, const Histogram& h) {
    const auto sources = resolved_sources(c);
    const auto tau = c.n_steps;
    const auto dtau = static_cast<double>(tau);
    Distribution d;
    switch (c.kind) {
    case ScenarioKind::free:
        d = tabulate(h.offset(), h.last(), [&](std::int64_t xi) {
            double v = 0.0;
            for (const auto& s : sources) {
                v += s.probability * (c.p_fixed ? analytic::pmf_free(xi - s.site, tau, *c.p_fixed)
                                                : analytic::ensemble_probability(xi - s.site, tau));
            }
            return v;
        });
        break;
    case ScenarioKind::two_slit:
    case ScenarioKind::multi_slit: {
        const double centre = source_centre(sources);
        std::int64_t lo = sources.front().site;
        std::int64_t hi = lo;
        for (const auto& s : sources) {
            lo = std::min(lo, s.site);
            hi = std::max(hi, s.site);
        }
        d = tabulate(h.offset(), h.last(), [&](std::int64_t xi) {
            if (tau == 0 || xi < lo - tau || xi > hi + tau) {
                return tau == 0 ? (xi >= lo && xi <= hi ? 1.0 : 0.0) : 0.0;
            }
            return std::max(0.0, multi_slit_density(static_cast<double>(xi) - centre, dtau, sources));
        });
        break;
    }
    case ScenarioKind::ring: {
        const auto mix = momentum_mixture(c, 2.0 / static_cast<double>(c.ell));
        d = tabulate(h.offset(), h.last(), [&](std::int64_t xi) {
            double v = 0.0;
            for (const auto& [pbar, w] : mix) {
                v += w * analytic::pmf_free(xi - sources[0].site, tau, std::clamp(pbar, -1.0, 1.0));
            }
            return v;
        });
        break;
    }
    case ScenarioKind::box:
        d = tabulate(h.offset(), h.last(), [&](std::int64_t xi) { return xi >= 0 && xi <= c.ell ? 1.0 : 0.0; });
        break;
    }
    if (d.sum() > 0.0) {
        d.normalize();
    }
    return d;
}

Distribution qm_distribution(const ScenarioConfig& c, const Histogram& h) {
    const auto sources = resolved_sources(c);
    const auto tau = static_cast<double>(c.n_steps);
    if (c.n_steps == 0) {
        return tabulate(h.offset(), h.last(), [](std::int64_t) { return 0.0; });
    }
    switch (c.kind) {
    case ScenarioKind::free:
        return tabulate(h.offset(), h.last(), [&](std::int64_t xi) {
            double v = 0.0;
            for (const auto& s : sources) {
                const auto x = static_cast<double>(xi - s.site);
                if (c.p_fixed) {
                    v += s.probability * analytic::gaussian_limit(x, tau, *c.p_fixed).value_or(0.0);
                } else if (std::fabs(x) <= tau) {
                    v += s.probability * qm::qm_single_source(x, tau);
                }
            }
            return v;
        });
    case ScenarioKind::two_slit:
    case ScenarioKind::multi_slit: {
        const double centre = source_centre(sources);
        return tabulate(h.offset(), h.last(), [&](std::int64_t xi) {
            const double x = static_cast<double>(xi) - centre;
            return std::fabs(x) <= tau ? qm::qm_multi_source(x, tau, sources) : 0.0;
        });
    }
    case ScenarioKind::ring: {
        const auto mix = momentum_mixture(c, 2.0 / static_cast<double>(c.ell));
        return tabulate(h.offset(), h.last(), [&](std::int64_t xi) {
            double v = 0.0;
            for (const auto& [pbar, w] : mix) {
                v += w * analytic::gaussian_limit(static_cast<double>(xi - sources[0].site), tau,
                                                  std::clamp(pbar, -1.0, 1.0))
                             .value_or(0.0);
            }
            return v;
        });
    }
    case ScenarioKind::box: {
        const auto mix = momentum_mixture(c, 1.0 / static_cast<double>(c.ell));
        return tabulate(h.offset(), h.last(), [&](std::int64_t xi) {
            double v = 0.0;
            for (const auto& [pbar, w] : mix) {
                const auto n = std::max<std::int64_t>(1, std::llround(std::fabs(pbar) * static_cast<double>(c.ell)));
                v += w * qm::qm_box_density(static_cast<double>(xi), c.ell, n);
            }
            return v;
        });
    }
    }
    return {};
}

} // namespace scenarios
} // namespace dsqm
