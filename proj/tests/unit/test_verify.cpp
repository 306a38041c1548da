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
#include "dsqm/verify.hpp"

#include <doctest.h>
#include <json.hpp>

#include <set>
#include <sstream>

using namespace dsqm;

namespace {

VerifyOptions upto(std::int64_t tau_max, std::optional<double> tolerance = std::nullopt) {
    VerifyOptions o;
    o.tau_max = tau_max;
    o.tolerance = tolerance;
    return o;
}

} // namespace

TEST_CASE("every suite passes at default tolerances") {
    for (const auto& name : verify_suites()) {
        if (name == "all") {
            continue;
        }
        const auto r = run_verify(name, upto(24));
        CHECK_MESSAGE(!r.checks.empty(), name);
        for (const auto& c : r.checks) {
            CHECK_MESSAGE(c.pass, c.suite << '.' << c.name << " value=" << c.value << " bound=" << c.tolerance);
            CHECK(c.suite == name);
        }
        CHECK(r.pass());
    }
}

TEST_CASE("all runs the union of the suites") {
    const auto all = run_verify("all", upto(12));
    std::set<std::string> suites;
    for (const auto& c : all.checks) {
        suites.insert(c.suite);
    }
    CHECK(suites.size() + 1 == verify_suites().size());
}

TEST_CASE("a tiny tolerance makes discrepancy checks fail") {
    const auto r = run_verify("pmf", upto(20, 0.0));
    bool any_failed = false;
    for (const auto& c : r.checks) {
        if (!c.lower_bound) {
            CHECK(c.tolerance == 0.0);
        }
        any_failed = any_failed || !c.pass;
    }
    // Closed form and recursion differ by rounding, so at least one check fails.
    CHECK(any_failed);
    CHECK_FALSE(r.pass());
}

TEST_CASE("bad suite names and sizes") {
    CHECK_THROWS_AS(run_verify("everything"), ConfigError);
    CHECK_THROWS_AS(run_verify("pmf", upto(0)), ConfigError);
}

TEST_CASE("text and json reports") {
    const auto r = run_verify("action", upto(10));
    std::ostringstream text;
    write_verify_text(text, r);
    CHECK(text.str().rfind("ok   action.", 0) == 0);
    CHECK(text.str().find("all checks passed\n") != std::string::npos);
    std::ostringstream js;
    write_verify_json(js, r);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["pass"].get<bool>());
    CHECK(j["checks"].size() == r.checks.size());
}
