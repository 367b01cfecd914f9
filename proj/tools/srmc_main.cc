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

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "srmc/error.h"

int main(int argc, char** argv) {
  using namespace srmc::cli;
  CLI::App app{"Source-routed multicast encoder and simulator"};
  app.require_subcommand(1);

  app.add_subcommand("example-fig3", "Encode the three-tier example group");

  ExperimentOptions exp;
  auto* experiment =
      app.add_subcommand("experiment", "Run the scenario sweep, write CSVs");
  experiment->add_option("config", exp.config, "Scenario file")->required();
  experiment->add_option("-o,--out", exp.output_dir, "Output directory");
  experiment->add_flag("--serial", exp.serial, "Use the serial reference path");

  std::string verify_cfg;
  bool mutate = false;
  auto* verify = app.add_subcommand("verify", "Check invariants exhaustively");
  verify->add_option("config", verify_cfg, "Scenario file")->required();
  verify->add_flag("--mutate", mutate,
                   "Inject an off-by-one in the shared bitmap union");

  ExperimentOptions churn_opt;
  auto* churn = app.add_subcommand("churn", "Replay membership churn");
  churn->add_option("config", churn_opt.config, "Scenario file")->required();
  churn->add_option("-o,--out", churn_opt.output_dir, "Output directory");
  churn->add_flag("--serial", churn_opt.serial, "Serial bulk install");

  ExperimentOptions fail_opt;
  auto* fail = app.add_subcommand("fail", "Single spine or core failures");
  fail->add_option("config", fail_opt.config, "Scenario file")->required();
  fail->add_option("-o,--out", fail_opt.output_dir, "Output directory");
  fail->add_flag("--serial", fail_opt.serial, "Serial reference path");

  EncodeOptions enc;
  auto* encode = app.add_subcommand("encode", "Encode one group's header");
  encode
      ->add_option("--group", enc.group,
                   "Hosts as id[:s|r|b], comma separated (default role b)")
      ->required();
  encode->add_option("--topology", enc.topology, "fig3 or fabric");
  encode->add_option("--config", enc.config, "Take topology and budget here");
  encode->add_option("--r", enc.r, "Spurious-bit bound R");
  encode->add_option("--sender", enc.sender, "Sending host");
  encode->add_flag("--hex", enc.hex, "Print the header bytes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    if (app.got_subcommand("example-fig3")) return cmd_example_fig3(std::cout);
    if (*experiment) return cmd_experiment(exp, std::cout);
    if (*verify) return cmd_verify(verify_cfg, mutate, std::cout);
    if (*churn) return cmd_churn(churn_opt, std::cout);
    if (*fail) return cmd_fail(fail_opt, std::cout);
    if (*encode) return cmd_encode(enc, std::cout);
  } catch (const srmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const srmc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariantFailure;
  }
  return kUsageError;
}
