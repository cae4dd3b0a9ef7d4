// Copyright 2026 The hetpred Authors
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

#ifndef HETPRED_TOOLS_COMMANDS_HPP_
#define HETPRED_TOOLS_COMMANDS_HPP_

#include "hetpred/keyvalue.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hetpred::cli
{

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitData = 4,
  kExitNumeric = 5,
  kExitInternal = 70,
};

struct RunConfig
{
  std::string command;
  std::filesystem::path data;
  std::filesystem::path out;
  /// train: checkpoint to resume from; predict: model to load; eval: one
  /// entry per learned method ("" when given without a method name).
  std::map<std::string, std::filesystem::path> checkpoints;
  std::vector<std::string> modes;  // requested methods, in order
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  KeyValues values;  // config file with command-line overrides applied
};

int cmd_generate(const RunConfig & config, std::ostream & log);
int cmd_train(const RunConfig & config, std::ostream & log);
int cmd_predict(const RunConfig & config, std::ostream & log);
int cmd_eval(const RunConfig & config, std::ostream & log);

/// Parses arguments, runs the command and maps errors to exit codes.
int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

}  // namespace hetpred::cli

#endif  // HETPRED_TOOLS_COMMANDS_HPP_
