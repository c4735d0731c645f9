/*
   Copyright 2026 The multipol authors

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

#ifndef MULTIPOL_VERIFY_HPP
#define MULTIPOL_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multipol/combinatorics.hpp"

namespace multipol {

/// Parameters of an identity-verification run. `signature` (when set)
/// overrides m/n for the signature-driven identities.
struct IdentityParams {
    int m = 2;
    int n = 2;
    int dim = 2;
    int codim = 1;
    int trials = 25;
    std::uint64_t seed = 1;
    double sparsity = 1.0;
    std::uint64_t max_signs = kDefaultMaxSigns;
    std::optional<std::vector<int>> signature;
    bool inject_defect = false;  // testing hook: perturbs one computed side
};

struct VerificationFailure {
    int trial = 0;
    std::string check;  // which comparison failed
    std::string lhs;
    std::string rhs;
    std::string input;  // serialized instance(s)
};

struct VerificationReport {
    std::string identity;
    std::vector<std::pair<std::string, std::string>> params;  // ordered
    int trials_run = 0;
    std::vector<VerificationFailure> failures;
    double elapsed_seconds = 0.0;  // never rendered into the report body

    bool pass() const { return failures.empty(); }
};

/// The identities cmd_verify knows about.
const std::vector<std::string>& identity_names();

/// Runs one identity suite. Throws std::invalid_argument for an unknown
/// identity name or parameters outside the module guards.
VerificationReport run_identity(const std::string& name, const IdentityParams& params);

std::string render_report_text(const VerificationReport& report);
std::string render_report_json(const VerificationReport& report);

}  // namespace multipol

#endif  // MULTIPOL_VERIFY_HPP
