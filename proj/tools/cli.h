// Copyright 2026 The wordprobe Authors.
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

#ifndef WORDPROBE_TOOLS_CLI_H_
#define WORDPROBE_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace wordprobe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Entry point of the `wordprobe` tool. `args` excludes the program name.
// Subcommands: probe, validate, tasks, synth, bundle, serve, purge.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace wordprobe::cli

#endif  // WORDPROBE_TOOLS_CLI_H_
