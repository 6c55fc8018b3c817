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

#ifndef SEPLAB_EVAL_EVALUATE_H_
#define SEPLAB_EVAL_EVALUATE_H_

#include <functional>
#include <string>
#include <vector>

#include "seplab/scene/dataset.h"
#include "seplab/scene/types.h"

namespace seplab {

struct EvalRecord {
  std::string id;
  double overlap = 0.0;
  std::vector<double> per_source_si_sdr_db;  // PIT-aligned
  double si_sdr_db = 0.0;                    // mean over sources
  double mixture_si_sdr_db = 0.0;            // unprocessed baseline
  double improvement_db = 0.0;

  std::string ToJsonLine() const;
  static EvalRecord FromJsonLine(const std::string& line);
};

// Type-erased separator: one waveform in, C waveforms out.
using SeparateFn = std::function<std::vector<WaveF>(const WaveF&)>;

// PIT-aligned SI-SDR per manifest utterance. Deterministic; when jobs > 1
// utterances are processed in a pool and collected in manifest order.
std::vector<EvalRecord> Evaluate(const SeparateFn& separate,
                                 const std::string& manifest_dir,
                                 const std::vector<ManifestEntry>& entries,
                                 int jobs = 1);

void WriteRecords(const std::vector<EvalRecord>& records,
                  const std::string& path);
std::vector<EvalRecord> ReadRecords(const std::string& path);

}  // namespace seplab

#endif  // SEPLAB_EVAL_EVALUATE_H_
