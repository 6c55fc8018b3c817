// Copyright 2026 The Seplab Authors
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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seplab/cli/commands.h"
#include "seplab/common/error.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::string ReadConfigFile(const std::string& path) {
  if (path.empty()) return "";
  std::ifstream is(path);
  if (!is) throw seplab::ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

seplab::ExperimentConfig LoadConfig(const std::string& config_path,
                                    std::vector<std::string> overrides) {
  // the root-seed environment override wins over file and flags
  if (const char* env = std::getenv("SEPLAB_SEED")) {
    overrides.push_back(std::string("seed=") + env);
  }
  return seplab::ExperimentConfig::Parse(ReadConfigFile(config_path),
                                         overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seplab: speech separation experiments on a dual-path "
               "backbone (SIMO-only, mixed SIMO-SISO, iterative SISO)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string workdir = ".";
  std::vector<std::string> overrides;
  int jobs = 1;
  app.add_option("-c,--config", config_path, "experiment config (JSON)");
  app.add_option("-w,--workdir", workdir,
                 "directory all relative paths resolve against");
  app.add_option("-s,--set", overrides,
                 "override a config key, e.g. --set model.split=2");
  app.add_option("-j,--jobs", jobs, "worker threads for simulate/evaluate");

  auto* sim = app.add_subcommand("simulate", "generate a dataset + manifest");
  auto* train = app.add_subcommand("train", "train one model configuration");
  auto* eval =
      app.add_subcommand("evaluate", "evaluate a checkpoint on a split");
  std::string checkpoint;
  eval->add_option("--checkpoint", checkpoint,
                   "checkpoint path (default: the train output)");
  auto* paramcheck = app.add_subcommand(
      "paramcheck", "parameter parity audit across all design splits");
  auto* sweep = app.add_subcommand(
      "sweep", "train + evaluate the full design/split matrix");
  auto* report =
      app.add_subcommand("report", "render tables and plots from records");
  std::vector<std::string> record_files;
  std::string report_out = "report";
  report->add_option("records", record_files, "eval record JSONL files");
  report->add_option("--out", report_out, "report output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      // report needs no experiment config
      seplab::CmdReport(record_files, report_out, std::cout);
      return kExitOk;
    }
    seplab::ExperimentConfig cfg = LoadConfig(config_path, overrides);
    if (cfg.dataset.jobs == 1 && jobs > 1) cfg.dataset.jobs = jobs;
    if (sim->parsed()) {
      std::cout << seplab::CmdSimulate(cfg, workdir, std::cout) << "\n";
    } else if (train->parsed()) {
      seplab::CmdSimulate(cfg, workdir, std::cout);
      auto out = seplab::CmdTrain(cfg, workdir, std::cout);
      std::cout << out.checkpoint_path << "\n" << out.log_path << "\n";
    } else if (eval->parsed()) {
      auto out = seplab::CmdEvaluate(cfg, workdir, checkpoint, jobs,
                                     std::cout);
      std::cout << out.records_path << "\n";
    } else if (paramcheck->parsed()) {
      auto res = seplab::CmdParamCheck(cfg, std::cout);
      return res.within_tolerance ? kExitOk : kExitRuntimeError;
    } else if (sweep->parsed()) {
      std::cout << seplab::CmdSweep(cfg, workdir, jobs, std::cout) << "\n";
    }
    return kExitOk;
  } catch (const seplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
