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

#ifndef SEPLAB_SCENE_VAD_H_
#define SEPLAB_SCENE_VAD_H_

#include <cstdint>
#include <vector>

namespace seplab {

// Energy-threshold VAD: 10 ms frames, a frame is active when its energy is
// within 40 dB of the loudest frame of the same signal. The sample-level
// mask repeats each frame decision.
std::vector<uint8_t> ActivityMask(const std::vector<double>& wave,
                                  int sample_rate,
                                  double threshold_db = -40.0,
                                  double frame_ms = 10.0);

// Fraction of the full mask length during which both signals are active.
double MeasureOverlap(const std::vector<uint8_t>& a1,
                      const std::vector<uint8_t>& a2);

}  // namespace seplab

#endif  // SEPLAB_SCENE_VAD_H_
