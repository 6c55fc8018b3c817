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

#ifndef SEPLAB_SCENE_DATASET_H_
#define SEPLAB_SCENE_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "seplab/scene/mix.h"
#include "seplab/scene/types.h"

namespace seplab {

struct DatasetConfig {
  std::string out_dir;
  int train_count = 200;
  int valid_count = 50;
  int test_count = 50;
  double utterance_seconds = 4.0;
  int sample_rate = 16000;
  std::string source_mode = "synth";  // synth | wav_dir
  std::string wav_dir;
  std::string noise_mode = "synth";  // synth | wav_dir
  std::string noise_dir;
  uint64_t seed = 0;
  int jobs = 1;

  void Validate() const;
  int utterance_samples() const;
};

struct ManifestEntry {
  std::string id;
  uint64_t seed = 0;
  std::string mixture_path;               // relative to the manifest dir
  std::vector<std::string> target_paths;
  std::string noise_path;
  double overlap = 0.0;
  double rel_snr_db = 0.0;
  double noise_snr_db = 0.0;
  double room_l = 0.0, room_w = 0.0, room_h = 0.0, room_t60 = 0.0;
  std::string split;  // train | valid | test

  std::string ToJsonLine() const;
  static ManifestEntry FromJsonLine(const std::string& line);
};

std::vector<ManifestEntry> ReadManifest(const std::string& path);
// Entries of one split, or all entries when split is empty.
std::vector<ManifestEntry> ReadManifest(const std::string& path,
                                        const std::string& split);

// Simulates one utterance from its manifest seed. Bit-exact with respect to
// the files generate_dataset wrote for the same seed.
MixtureExample SimulateUtterance(uint64_t seed, const DatasetConfig& cfg,
                                 MixDiagnostics* diag = nullptr);

// Writes WAVs plus one manifest line per utterance under cfg.out_dir.
// Infeasible scenes are resampled (fresh derived seed) up to 100 times.
// Returns the manifest path.
std::string GenerateDataset(const DatasetConfig& cfg);

}  // namespace seplab

#endif  // SEPLAB_SCENE_DATASET_H_
