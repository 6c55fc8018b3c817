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

#include "seplab/scene/vad.h"

#include <algorithm>
#include <cmath>

#include "seplab/common/error.h"

namespace seplab {

std::vector<uint8_t> ActivityMask(const std::vector<double>& wave,
                                  int sample_rate, double threshold_db,
                                  double frame_ms) {
  const size_t n = wave.size();
  std::vector<uint8_t> mask(n, 0);
  if (n == 0) return mask;
  const size_t frame =
      std::max<size_t>(1, static_cast<size_t>(
                              std::lround(frame_ms * sample_rate / 1000.0)));
  const size_t num_frames = (n + frame - 1) / frame;
  std::vector<double> energy(num_frames, 0.0);
  double peak = 0.0;
  for (size_t f = 0; f < num_frames; ++f) {
    size_t lo = f * frame, hi = std::min(n, lo + frame);
    double e = 0.0;
    for (size_t i = lo; i < hi; ++i) e += wave[i] * wave[i];
    energy[f] = e / static_cast<double>(hi - lo);
    peak = std::max(peak, energy[f]);
  }
  if (peak <= 0.0) return mask;  // all silent
  const double thresh = peak * std::pow(10.0, threshold_db / 10.0);
  for (size_t f = 0; f < num_frames; ++f) {
    if (energy[f] > thresh) {
      size_t lo = f * frame, hi = std::min(n, lo + frame);
      std::fill(mask.begin() + lo, mask.begin() + hi, uint8_t{1});
    }
  }
  return mask;
}

double MeasureOverlap(const std::vector<uint8_t>& a1,
                      const std::vector<uint8_t>& a2) {
  if (a1.size() != a2.size() || a1.empty())
    throw InvalidInput("measure_overlap: masks must be equal non-zero length");
  size_t both = 0;
  for (size_t i = 0; i < a1.size(); ++i) both += (a1[i] && a2[i]) ? 1 : 0;
  return static_cast<double>(both) / static_cast<double>(a1.size());
}

}  // namespace seplab
