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

#ifndef SEPLAB_CLI_COMMANDS_H_
#define SEPLAB_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "seplab/cli/experiment_config.h"

namespace seplab {

// All paths inside cfg are resolved against workdir. Commands are
// idempotent: rerunning with identical config and seeds either reproduces
// identical artifacts or detects and reuses the existing ones.

// Generates the dataset; returns the manifest path.
std::string CmdSimulate(const ExperimentConfig& cfg,
                        const std::string& workdir, std::ostream& log);

struct TrainOutputs {
  std::string checkpoint_path;
  std::string log_path;
  bool reused_existing = false;
};
TrainOutputs CmdTrain(const ExperimentConfig& cfg, const std::string& workdir,
                      std::ostream& log);

struct EvaluateOutputs {
  std::string records_path;
  std::string table_text_path;
  std::string table_markdown_path;
  std::string csv_path;
  double average_si_sdr_db = 0.0;
};
EvaluateOutputs CmdEvaluate(const ExperimentConfig& cfg,
                            const std::string& workdir,
                            const std::string& checkpoint, int jobs,
                            std::ostream& log);

struct ParamCheckResult {
  double table1_max_rel_diff = 0.0;
  double table2_max_rel_diff = 0.0;
  double overall_max_rel_diff = 0.0;
  bool within_tolerance = false;  // < 5%
};
// Parameter parity audit over the 7 Table-1 splits and 5 Table-2 splits.
ParamCheckResult CmdParamCheck(const ExperimentConfig& cfg, std::ostream& log);

// Full design/split matrix at the configured scale: train + evaluate every
// split, then render both tables next to the paper-reported ones.
// Returns the report directory.
std::string CmdSweep(const ExperimentConfig& cfg, const std::string& workdir,
                     int jobs, std::ostream& log);

// Re-renders table + plots from stored eval records.
std::string CmdReport(const std::vector<std::string>& record_files,
                      const std::string& out_dir, std::ostream& log);

}  // namespace seplab

#endif  // SEPLAB_CLI_COMMANDS_H_
