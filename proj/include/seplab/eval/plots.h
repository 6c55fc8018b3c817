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

#ifndef SEPLAB_EVAL_PLOTS_H_
#define SEPLAB_EVAL_PLOTS_H_

#include <string>
#include <utility>
#include <vector>

#include "seplab/eval/evaluate.h"

namespace seplab {

struct PlotFiles {
  std::string scatter_svg;
  std::string bars_svg;
  std::string values_csv;
};

// SI-SDR vs overlap scatter with bucket means, a per-config average bar
// chart, and a CSV of every plotted value.
PlotFiles EmitPlots(
    const std::vector<std::pair<std::string, std::vector<EvalRecord>>>&
        per_config,
    const std::string& out_dir);

}  // namespace seplab

#endif  // SEPLAB_EVAL_PLOTS_H_
