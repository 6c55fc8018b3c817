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

#ifndef SEPLAB_SCENE_WAV_IO_H_
#define SEPLAB_SCENE_WAV_IO_H_

#include <string>

#include "seplab/scene/types.h"

namespace seplab {

// Mono WAV, 16-bit PCM on read; IEEE float32 on read and write. Datasets
// are written as float32 so stored waveforms round-trip bit-exactly.
void WriteWavFloat32(const std::string& path, const WaveF& wave,
                     int sample_rate);

struct WavData {
  WaveF samples;
  int sample_rate = 0;
};

WavData ReadWav(const std::string& path);

}  // namespace seplab

#endif  // SEPLAB_SCENE_WAV_IO_H_
