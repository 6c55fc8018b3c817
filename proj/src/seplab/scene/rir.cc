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

#include "seplab/scene/rir.h"

#include <cmath>

#include "seplab/common/error.h"

namespace seplab {

namespace {

bool Inside(const Position& p, const RoomSpec& r) {
  return p.x > 0 && p.x < r.length && p.y > 0 && p.y < r.width && p.z > 0 &&
         p.z < r.height;
}

// One axis of the image expansion: mirrored coordinate offsets plus the
// number of wall reflections each image accumulates along this axis.
struct AxisImage {
  double coord;
  int reflections;
};

void AxisImages(double src, double room_dim, double mic, double dmax,
                std::vector<AxisImage>* out) {
  out->clear();
  int nmax = static_cast<int>(std::ceil((dmax + room_dim) / (2 * room_dim)));
  for (int n = -nmax; n <= nmax; ++n) {
    // even image: 2 n L + src, |2n| reflections
    double even = 2.0 * n * room_dim + src;
    if (std::abs(even - mic) <= dmax)
      out->push_back({even, std::abs(2 * n)});
    // odd image: 2 n L - src, |2n - 1| reflections
    double odd = 2.0 * n * room_dim - src;
    if (std::abs(odd - mic) <= dmax)
      out->push_back({odd, std::abs(2 * n - 1)});
  }
}

}  // namespace

double SabineAbsorption(const RoomSpec& room) {
  double v = room.length * room.width * room.height;
  double s = 2.0 * (room.length * room.width + room.length * room.height +
                    room.width * room.height);
  double alpha = 0.161 * v / (s * room.t60);
  if (alpha > 1.0)
    throw InfeasibleScene(
        "t60 too small for the room (Sabine absorption " +
        std::to_string(alpha) + " > 1)");
  return alpha;
}

std::vector<double> SimulateRir(const RoomSpec& room, const Position& src,
                                const Position& mic, int fs,
                                std::optional<double> absorption_override) {
  if (room.t60 <= 0) throw InvalidInput("rir: t60 must be positive");
  if (!Inside(src, room) || !Inside(mic, room))
    throw InvalidInput("rir: source and microphone must be inside the room");

  double alpha =
      absorption_override ? *absorption_override : SabineAbsorption(room);
  if (alpha < 0.0 || alpha > 1.0)
    throw InvalidInput("rir: absorption must be in [0, 1]");
  const double beta = std::sqrt(1.0 - alpha);

  const int len = static_cast<int>(std::ceil(room.t60 * fs));
  const double dmax = (len - 0.5) * kSpeedOfSound / fs;
  std::vector<double> h(len, 0.0);

  std::vector<AxisImage> xs, ys, zs;
  AxisImages(src.x, room.length, mic.x, dmax, &xs);
  AxisImages(src.y, room.width, mic.y, dmax, &ys);
  AxisImages(src.z, room.height, mic.z, dmax, &zs);

  // beta^r lookup; reflections beyond the audible budget contribute less
  // than machine epsilon and keep the table short.
  int max_r = 1;
  if (beta > 0.0) {
    for (const auto& v : {xs, ys, zs})
      for (const auto& im : v) max_r = std::max(max_r, im.reflections);
  }
  std::vector<double> beta_pow(3 * max_r + 1);
  beta_pow[0] = 1.0;
  for (size_t r = 1; r < beta_pow.size(); ++r)
    beta_pow[r] = beta_pow[r - 1] * beta;

  const double dmax_sq = dmax * dmax;
  for (const AxisImage& ix : xs) {
    const double dx = ix.coord - mic.x;
    const double dx2 = dx * dx;
    if (dx2 > dmax_sq) continue;
    for (const AxisImage& iy : ys) {
      const double dy = iy.coord - mic.y;
      const double dxy2 = dx2 + dy * dy;
      if (dxy2 > dmax_sq) continue;
      for (const AxisImage& iz : zs) {
        const double dz = iz.coord - mic.z;
        const double d2 = dxy2 + dz * dz;
        if (d2 > dmax_sq) continue;
        const int r = ix.reflections + iy.reflections + iz.reflections;
        const double gain = beta_pow[r];
        if (gain == 0.0 && r > 0) continue;
        const double d = std::sqrt(d2);
        if (d <= 0.0)
          throw InvalidInput("rir: source coincides with the microphone");
        const int idx =
            static_cast<int>(std::lround(d * fs / kSpeedOfSound));
        if (idx >= len) continue;
        h[idx] += gain / (4.0 * M_PI * d);
      }
    }
  }
  return h;
}

}  // namespace seplab
