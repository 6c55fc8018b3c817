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

#ifndef SEPLAB_SCENE_CONVOLVE_H_
#define SEPLAB_SCENE_CONVOLVE_H_

#include <vector>

namespace seplab {

// Full linear convolution (length a + b - 1) via FFT.
std::vector<double> FftConvolve(const std::vector<double>& a,
                                const std::vector<double>& b);

// Peak of the normalized cross-correlation over all lags, in [0, 1].
double NormalizedXcorrPeak(const std::vector<double>& a,
                           const std::vector<double>& b);

}  // namespace seplab

#endif  // SEPLAB_SCENE_CONVOLVE_H_
