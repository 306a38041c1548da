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

#include "dsqm/errors.hpp"
#include "dsqm/qm_oracle.hpp"
#include "dsqm/scenarios.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace dsqm;
using namespace dsqm::scenarios;

TEST_CASE("scenario and mode names") {
    CHECK(parse_kind("two-slit") == ScenarioKind::two_slit);
    CHECK(parse_kind("two_slit") == ScenarioKind::two_slit);
    CHECK(parse_kind("multi_slit") == ScenarioKind::multi_slit);
    CHECK(parse_kind(to_string(ScenarioKind::ring)) == ScenarioKind::ring);
    CHECK_THROWS_AS(parse_kind("torus"), ConfigError);
    CHECK(parse_mode("training") == RunMode::training);
    CHECK_THROWS_AS(parse_mode("Trained"), ConfigError);
}

TEST_CASE("serialize and parse round trip") {
    ScenarioConfig c;
    c.kind = ScenarioKind::multi_slit;
    c.sources = {{-3, 0.2}, {0, 0.3}, {5, 0.5}};
    c.ell = 17;
    c.n_particles = 123;
    c.n_steps = 45;
    c.p_fixed = -0.1;
    c.mode = RunMode::training;
    c.seed = 987654321;
    c.threads = 3;
    c.block_size = 77;
    c.windings = 9;
    CHECK(parse_config(serialize(c)) == c);

    ScenarioConfig d;
    d.kind = ScenarioKind::two_slit;
    d.p1 = 1.0 / 3.0;
    CHECK(parse_config(serialize(d)) == d);
}

TEST_CASE("parse applies keys on top of a base") {
    ScenarioConfig base;
    base.seed = 42;
    const auto c = parse_config("# comment\n\n  scenario = ring   # trailing\nell=12\r\np = 0.25\n", base);
    CHECK(c.kind == ScenarioKind::ring);
    CHECK(c.ell == 12);
    CHECK(c.p_fixed == 0.25);
    CHECK(c.seed == 42);
    CHECK_FALSE(parse_config("p = uniform", c).p_fixed.has_value());
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_config("colour = red"), ConfigError);
    CHECK_THROWS_AS(parse_config("np = many"), ConfigError);
    CHECK_THROWS_AS(parse_config("np = 10x"), ConfigError);
    CHECK_THROWS_AS(parse_config("just text"), ConfigError);
    CHECK_THROWS_AS(parse_config("sources = 1;0.5"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/config.txt"), IoError);
}

TEST_CASE("load_config reads a file") {
    const auto path = std::filesystem::temp_directory_path() / "dsqm_test_scenarios.cfg";
    {
        std::ofstream out(path);
        out << "scenario = box\nell = 8\nnp = 5\n";
    }
    const auto c = load_config(path);
    std::filesystem::remove(path);
    CHECK(c.kind == ScenarioKind::box);
    CHECK(c.ell == 8);
    CHECK(c.n_particles == 5);
}

TEST_CASE("validation") {
    ScenarioConfig ok;
    CHECK_NOTHROW(validate(ok));
    auto bad = ok;
    bad.n_particles = 0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.p_fixed = -1.5;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.sources = {{0, 0.5}, {1, 0.4}};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad.sources = {{0, 0.5}, {0, 0.5}};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.kind = ScenarioKind::multi_slit;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad.sources = {{0, 1.0}};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.kind = ScenarioKind::ring;
    bad.ell = 1;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad.ell = 10;
    bad.sources = {{10, 1.0}};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad.kind = ScenarioKind::box;
    CHECK_NOTHROW(validate(bad));
    bad.windings = 1;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.kind = ScenarioKind::two_slit;
    bad.delta = 0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("two-slit source placement") {
    ScenarioConfig c;
    c.kind = ScenarioKind::two_slit;
    c.delta = 3;
    c.p1 = 0.7;
    const auto s = resolved_sources(c);
    REQUIRE(s.size() == 2);
    CHECK(s[0].site == 2);
    CHECK(s[1].site == -1);
    CHECK(s[0].probability == 0.7);
    CHECK(s[0].site - s[1].site == 3);
    CHECK(source_centre(s) == 0.5);
    c.kind = ScenarioKind::box;
    c.ell = 9;
    CHECK(resolved_sources(c)[0].site == 4);
}

TEST_CASE("two-slit density") {
    const double tau = 400.0;
    double mass = 0.0;
    for (int xi = -400; xi <= 400; ++xi) {
        mass += two_slit_density(xi, tau, 0.5, 0.5, 4.0);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(2e-3));
    const std::vector<Source> pair{{2, 0.3}, {-2, 0.7}};
    for (const double xi : {-30.0, 0.0, 11.5}) {
        CHECK(multi_slit_density(xi, tau, pair) == doctest::Approx(two_slit_density(xi, tau, 0.3, 0.7, 4.0)));
        CHECK(two_slit_density(xi, tau, 0.3, 0.7, 4.0) == doctest::Approx(qm::qm_two_source(xi, tau, 0.3, 0.7, 4.0)));
    }
    CHECK(two_slit_density(0.0, 10.0, 0.5, 0.5, 2.0) == doctest::Approx(0.1));
    CHECK(two_slit_density(5.0, 10.0, 0.5, 0.5, 2.0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("momentum density is normalized for integer separations") {
    const auto rule = oracle::gauss_legendre(64);
    for (const double delta : {1.0, 2.0, 5.0}) {
        const auto integral = oracle::integrate(rule, -1.0L, 1.0L, [&](long double p) {
            return static_cast<long double>(momentum_density_two_slit(static_cast<double>(p), 0.25, 0.75, delta));
        });
        CHECK(static_cast<double>(integral) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(momentum_density_two_slit(1.5, 0.5, 0.5, 2.0) == 0.0);
}

TEST_CASE("mean motion converges to its fixed point") {
    const double p = 0.3;
    const double delta = 2.0;
    const double q = mean_motion_fixed_point(p, 0.5, 0.5, delta);
    CHECK(q == doctest::Approx(p - std::sin(std::numbers::pi * delta * q) / (std::numbers::pi * delta)).epsilon(1e-12));
    const auto path = mean_motion(p, 0.5, 0.5, delta, 20000);
    REQUIRE(path.size() == 20001);
    CHECK(path[0].pbar == p);
    CHECK(path[1].xi == doctest::Approx(p));
    CHECK(path.back().xi / 20000.0 == doctest::Approx(q).epsilon(1e-2));
    CHECK_THROWS_AS(mean_motion(1.5, 0.5, 0.5, 2.0, 10), DomainError);
}

TEST_CASE("quantized steady momenta") {
    CHECK(ring_steady_momentum(0.05, 10) == 0.0);
    CHECK(ring_steady_momentum(0.33, 10) == doctest::Approx(0.4));
    CHECK(ring_steady_momentum(0.61, 10) == doctest::Approx(0.6));
    CHECK(ring_steady_momentum(-0.33, 10) == doctest::Approx(-0.4));
    CHECK(box_steady_momentum(0.33, 10) == doctest::Approx(0.3));
    CHECK(box_steady_momentum(-0.87, 4) == doctest::Approx(-0.75));
    CHECK_THROWS_AS(ring_steady_momentum(0.1, 1), DomainError);
    for (int i = -100; i <= 100; ++i) {
        const double p = i / 100.0;
        const double r = ring_steady_momentum(p, 7);
        CHECK(std::fabs(r - p) <= 1.0 / 7.0 + 1e-12);
    }
}

TEST_CASE("ring image sum approaches its closed form") {
    const std::int64_t ell = 10;
    for (const double q : {0.05, 0.13, 0.33, 0.61, -0.27}) {
        const double closed = ring_limit_closed(q, ell);
        CHECK(ring_limit_sum(q, ell, 4000) == doctest::Approx(closed).epsilon(5e-3).scale(1.0));
    }
    CHECK(ring_limit_closed(0.1, ell) == doctest::Approx(0.0).scale(1.0));
    CHECK(ring_limit_sum(0.2, ell, 500) == doctest::Approx(0.0).scale(1.0));
    CHECK(ring_limit_closed(0.25, ell) == doctest::Approx(0.05));
    CHECK_THROWS_AS(ring_limit_sum(0.1, ell, 1), DomainError);
    const auto w = ring_windings_for(0.33, ell, 1e-4);
    CHECK(w >= 2);
    CHECK(std::fabs(ring_limit_sum(0.33, ell, w + 1) - ring_limit_sum(0.33, ell, w)) < 1e-4);
}

TEST_CASE("model distributions are normalized on the histogram support") {
    Histogram h(-30, 30);
    ScenarioConfig c;
    c.n_steps = 30;
    auto m = model_distribution(c, h);
    CHECK(m.sum() == doctest::Approx(1.0));
    CHECK(m.at(0) == doctest::Approx(1.0 / 61.0));
    c.p_fixed = 0.2;
    m = model_distribution(c, h);
    CHECK(m.sum() == doctest::Approx(1.0));

    c.kind = ScenarioKind::two_slit;
    c.p_fixed.reset();
    m = model_distribution(c, h);
    CHECK(m.sum() == doctest::Approx(1.0));
    for (const double v : m.p) {
        CHECK(v >= 0.0);
    }

    ScenarioConfig box;
    box.kind = ScenarioKind::box;
    box.ell = 6;
    box.n_steps = 40;
    Histogram hb(0, 6);
    const auto mb = model_distribution(box, hb);
    for (const double v : mb.p) {
        CHECK(v == doctest::Approx(1.0 / 7.0));
    }
    const auto qb = qm_distribution(box, hb);
    CHECK(qb.at(0) == doctest::Approx(0.0).scale(1.0));

    ScenarioConfig ring;
    ring.kind = ScenarioKind::ring;
    ring.n_steps = 50;
    Histogram hr(-50, 50);
    CHECK(model_distribution(ring, hr).sum() == doctest::Approx(1.0));
}

TEST_CASE("free reference densities") {
    ScenarioConfig c;
    c.n_steps = 25;
    Histogram h(-26, 26);
    const auto q = qm_distribution(c, h);
    CHECK(q.at(0) == doctest::Approx(1.0 / 50.0));
    CHECK(q.at(26) == 0.0);
}
