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

#ifndef SEPLAB_SCENE_SYNTH_H_
#define SEPLAB_SCENE_SYNTH_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "seplab/scene/types.h"

namespace seplab {

// Procedural speech-like signal: harmonic carrier with a drifting
// fundamental in 80-300 Hz, 2-8 Hz syllabic amplitude modulation and a few
// short inserted silences. Deterministic per seed, peak-normalized.
std::vector<double> SynthSpeechlike(uint64_t seed, int num_samples,
                                    int sample_rate);

// Procedural noise: low-pass filtered Gaussian noise with slow level
// modulation. Deterministic per seed, peak-normalized.
std::vector<double> SynthNoise(uint64_t seed, int num_samples,
                               int sample_rate);

// Source of dry signals for dataset generation. Both the procedural
// generators and a directory of mono WAV files sit behind this interface.
class SignalSource {
 public:
  virtual ~SignalSource() = default;
  virtual std::vector<double> Draw(uint64_t seed, int num_samples,
                                   int sample_rate) const = 0;
};

std::unique_ptr<SignalSource> MakeSpeechlikeSource();
std::unique_ptr<SignalSource> MakeNoiseSource();
// Draws a random file (and a random offset within it) from a directory of
// mono WAVs at the requested sample rate.
std::unique_ptr<SignalSource> MakeWavDirSource(const std::string& dir);

}  // namespace seplab

#endif  // SEPLAB_SCENE_SYNTH_H_
