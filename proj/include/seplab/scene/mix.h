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

#ifndef SEPLAB_SCENE_MIX_H_
#define SEPLAB_SCENE_MIX_H_

#include <cstdint>
#include <vector>

#include "seplab/scene/types.h"

namespace seplab {

struct SceneParams {
  int utterance_len = 64000;  // 4 s at 16 kHz
  int sample_rate = 16000;
};

// Uniformly sampled scene, deterministic per seed: room between 3x3x2.5 and
// 10x10x4 meters, T60 in [0.1, 0.5] s, overlap target in [0, 1], relative
// SNR in [0, 5] dB, noise SNR in [10, 20] dB. Positions keep 0.3 m from
// every wall and sources/noise keep 0.5 m from the microphone.
SceneSpec SampleScene(uint64_t seed, const SceneParams& params = {});

// How many dry samples each speaker needs for the given overlap target:
// both speakers span (T + overlap)/2 samples, placed at the opposite ends
// of the utterance window.
int SpeakerSpanSamples(double overlap_ratio_target, int utterance_len);

// Extra per-mixture state the tests use to verify the SNR and overlap
// post-conditions.
struct MixDiagnostics {
  int shift = 0;                      // speaker 2 start sample
  double speaker2_gain = 1.0;
  double noise_gain = 1.0;
  double rel_snr_check_db = 0.0;      // measured over the overlap region
  double noise_snr_check_db = 0.0;    // measured over the full utterance
  std::vector<double> dry_tracks[2];  // placed, scaled dry speech
};

// Builds one noisy reverberant two-speaker mixture: crops and places the
// speakers to hit the overlap target (fine-tuned against the VAD-measured
// overlap), scales speaker 2 to the relative SNR over the overlap region,
// convolves everything with image-method RIRs, scales the noise to the
// utterance-level noise SNR and sums. The float32 mixture equals
// (target1 + target2) + noise exactly, in that order.
MixtureExample MixScene(const SceneSpec& scene,
                        const std::vector<double>& speech1,
                        const std::vector<double>& speech2,
                        const std::vector<double>& noise,
                        MixDiagnostics* diag = nullptr);

}  // namespace seplab

#endif  // SEPLAB_SCENE_MIX_H_
