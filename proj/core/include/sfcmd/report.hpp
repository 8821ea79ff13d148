// Copyright 2026 The sfcmd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include "sfcmd/experiments.hpp"

namespace sfcmd {

/// Whole microseconds rendered as seconds with six decimals, no rounding.
std::string format_seconds(Micros us);

std::string results_csv(const GridReport& report);
std::string timeline_svg(const GridReport& report);

/// Writes results.csv and timeline.svg into out_dir, creating it if needed.
void emit_report(const GridReport& report, const std::filesystem::path& out_dir);

}  // namespace sfcmd
