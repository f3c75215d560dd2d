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

#ifndef MMRPLAN_PLAN_IO_HPP
#define MMRPLAN_PLAN_IO_HPP

#include <cstdint>
#include <string>

#include "mmrplan/global_planner.hpp"

namespace mmrplan {

/// FNV-1a over the raw document bytes; identifies the effective scenario.
uint64_t fnv1a_hash(const std::string& text);

std::string serialize_plan(const GlobalPlan& plan);
GlobalPlan deserialize_plan(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace mmrplan

#endif  // MMRPLAN_PLAN_IO_HPP
