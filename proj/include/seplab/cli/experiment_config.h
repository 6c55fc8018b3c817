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

#ifndef SEPLAB_CLI_EXPERIMENT_CONFIG_H_
#define SEPLAB_CLI_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "seplab/models/model_config.h"
#include "seplab/scene/dataset.h"
#include "seplab/train/trainer.h"

namespace seplab {

struct EvalSection {
  std::string manifest = "data/manifest.jsonl";
  std::string split = "test";
  std::string report_dir = "report";
  std::string checkpoint;  // default: train output
};

// Declarative experiment description. Parsed from a JSON file with strict
// schema validation (unknown keys are rejected with their path); individual
// keys can be overridden with --set dotted.path=value.
struct ExperimentConfig {
  uint64_t seed = 1234;
  DatasetConfig dataset;
  ModelConfig model;
  TrainConfig train;
  std::string train_out_dir = "runs";
  EvalSection eval;

  // file_text empty = all defaults. overrides are "dotted.path=value".
  static ExperimentConfig Parse(const std::string& file_text,
                                const std::vector<std::string>& overrides);

  std::string ConfigId() const;  // e.g. mixed_k2
  void Validate() const;
  std::string ToJson() const;
};

}  // namespace seplab

#endif  // SEPLAB_CLI_EXPERIMENT_CONFIG_H_
