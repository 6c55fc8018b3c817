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

#ifndef SEPLAB_SCENE_TYPES_H_
#define SEPLAB_SCENE_TYPES_H_

#include <array>
#include <cstdint>
#include <vector>

namespace seplab {

// Scene waveforms are float32: the on-disk sample format, in which the
// mixture identity (mixture == sum of targets + noise, fixed order) is
// exact.
using WaveF = std::vector<float>;

struct Position {
  double x = 0, y = 0, z = 0;
};

struct RoomSpec {
  double length = 5, width = 5, height = 3;  // meters
  double t60 = 0.3;                          // seconds
  std::array<Position, 2> src_positions;
  Position noise_position;
  Position mic_position;
};

struct SceneSpec {
  uint64_t seed = 0;
  double overlap_ratio_target = 0.5;  // [0, 1]
  double rel_snr_db = 2.5;            // [0, 5], speaker 1 over speaker 2
  double noise_snr_db = 15.0;         // [10, 20], speech sum over noise
  RoomSpec room;
  int utterance_len = 64000;  // samples
  int sample_rate = 16000;
};

struct MixtureExample {
  WaveF mixture;
  std::vector<WaveF> targets;  // reverberant source images at the mic
  WaveF noise_image;
  SceneSpec scene;
  double measured_overlap = 0.0;
};

}  // namespace seplab

#endif  // SEPLAB_SCENE_TYPES_H_
