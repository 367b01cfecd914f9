// Copyright 2026 The srmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRMC_TOOLS_COMMANDS_H_
#define SRMC_TOOLS_COMMANDS_H_

#include <cstdint>
#include <ostream>
#include <string>

namespace srmc::cli {

inline constexpr int kOk = 0;
inline constexpr int kInvariantFailure = 1;
inline constexpr int kUsageError = 2;

int cmd_example_fig3(std::ostream& out);

struct ExperimentOptions {
  std::string config;
  std::string output_dir;  // overrides the config when set
  bool serial = false;
};
int cmd_experiment(const ExperimentOptions& opt, std::ostream& out);

int cmd_verify(const std::string& config, bool mutate, std::ostream& out);
int cmd_churn(const ExperimentOptions& opt, std::ostream& out);
int cmd_fail(const ExperimentOptions& opt, std::ostream& out);

struct EncodeOptions {
  std::string group;
  std::string topology = "fig3";
  std::string config;
  std::uint32_t r = 0;
  std::int64_t sender = -1;
  bool hex = false;
};
int cmd_encode(const EncodeOptions& opt, std::ostream& out);

}  // namespace srmc::cli

#endif  // SRMC_TOOLS_COMMANDS_H_
