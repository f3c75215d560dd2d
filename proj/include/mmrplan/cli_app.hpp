// Copyright 2026 The mmrplan Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMRPLAN_CLI_APP_HPP
#define MMRPLAN_CLI_APP_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mmrplan {

// Exit codes: 0 success, 2 validation failure, 3 planning failure,
// 4 simulation failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitPlanning = 3;
inline constexpr int kExitSimulation = 4;

/// key=value pairs applied onto the scenario JSON (dotted keys).
std::string apply_overrides(const std::string& scenario_text,
                            const std::vector<std::string>& overrides);

int cmd_validate(const std::string& scenario_path,
                 const std::vector<std::string>& overrides);

int cmd_plan(const std::string& scenario_path, uint64_t seed,
             const std::string& out_dir,
             const std::vector<std::string>& overrides);

int cmd_simulate(const std::string& scenario_path,
                 const std::string& plan_path, uint64_t seed,
                 const std::string& out_dir,
                 const std::vector<double>& snapshot_times,
                 const std::vector<std::string>& overrides);

}  // namespace mmrplan

#endif  // MMRPLAN_CLI_APP_HPP
