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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsqm {

/// One identity check. Usually `value` is a discrepancy and must not exceed
/// `tolerance`; for lower-bound checks (convergence ratios) it must reach it.
struct VerifyCheck {
    std::string suite;
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool lower_bound = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool pass() const noexcept;
};

struct VerifyOptions {
    std::int64_t tau_max = 64;
    /// Replaces the default tolerance of every upper-bound check.
    std::optional<double> tolerance;
    std::uint64_t seed = 1;
};

/// Names accepted by run_verify: pmf, energy, action, dbb, matterwave, lorentz, boson, all.
const std::vector<std::string>& verify_suites();

/// Runs one suite (or all). Throws ConfigError for an unknown suite name.
VerifyReport run_verify(std::string_view suite, const VerifyOptions& options = {});

void write_verify_text(std::ostream& os, const VerifyReport& report);
void write_verify_json(std::ostream& os, const VerifyReport& report);

} // namespace dsqm
