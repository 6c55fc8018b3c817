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

#ifndef SEPLAB_SCENE_RIR_H_
#define SEPLAB_SCENE_RIR_H_

#include <optional>
#include <vector>

#include "seplab/scene/types.h"

namespace seplab {

constexpr double kSpeedOfSound = 343.0;  // m/s

// Uniform wall absorption from Sabine's formula,
// alpha = 0.161 V / (S_total * T60). Throws InfeasibleScene when the room
// cannot decay that slowly (alpha > 1).
double SabineAbsorption(const RoomSpec& room);

// Shoebox image-method impulse response of length ceil(t60 * fs). Taps are
// placed at round(d * fs / c) with amplitude beta^reflections / (4 pi d).
// absorption_override replaces the Sabine value (1.0 = anechoic: only the
// direct path survives).
std::vector<double> SimulateRir(
    const RoomSpec& room, const Position& src, const Position& mic, int fs,
    std::optional<double> absorption_override = std::nullopt);

}  // namespace seplab

#endif  // SEPLAB_SCENE_RIR_H_
