// Copyright 2026 The SkillGraph Authors
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

#include <fstream>
#include <string>
#include <string_view>

namespace skillgraph {

// File helpers shared by the loaders. Failures throw skillgraph::Error
// with the offending path in the message.
std::ifstream open_input(const std::string& path);
std::ofstream open_output(const std::string& path);
std::string read_file(const std::string& path);

/// Warnings go to stderr unless silenced (tests and benchmarks silence them).
void log_warning(std::string_view message);
void set_warnings_enabled(bool enabled);

}  // namespace skillgraph
