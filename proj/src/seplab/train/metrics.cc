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

#include "seplab/train/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seplab/common/error.h"

namespace seplab {

namespace {

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Clamp(double x) {
  return std::min(kMetricCapDb, std::max(-kMetricCapDb, x));
}

}  // namespace

double SnrDb(const std::vector<double>& est, const std::vector<double>& ref) {
  if (est.size() != ref.size())
    throw InvalidInput("snr: estimate and reference lengths differ");
  double ref_pow = Dot(ref, ref);
  if (ref_pow <= 0.0) throw InvalidInput("snr: reference is all zero");
  double err = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    double d = ref[i] - est[i];
    err += d * d;
  }
  double eps = 1e-8 * ref_pow;
  return Clamp(10.0 * std::log10(ref_pow / (err + eps)));
}

double SiSdrDb(const std::vector<double>& est,
               const std::vector<double>& ref) {
  if (est.size() != ref.size())
    throw InvalidInput("si_sdr: estimate and reference lengths differ");
  double ref_pow = Dot(ref, ref);
  double est_pow = Dot(est, est);
  if (ref_pow <= 0.0) throw InvalidInput("si_sdr: reference is all zero");
  if (est_pow <= 0.0) throw InvalidInput("si_sdr: estimate is all zero");
  double alpha = Dot(est, ref) / ref_pow;
  double target_pow = 0.0, noise_pow = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    double s = alpha * ref[i];
    double e = est[i] - s;
    target_pow += s * s;
    noise_pow += e * e;
  }
  // Scale-invariant epsilon realizes the +/- 80 dB caps for the degenerate
  // projections (est parallel or orthogonal to ref).
  double eps = 1e-8 * (target_pow + noise_pow);
  return Clamp(10.0 * std::log10((target_pow + eps) / (noise_pow + eps)));
}

PitResult PitAssign(const std::vector<std::vector<double>>& ests,
                    const std::vector<std::vector<double>>& refs,
                    const PairLossFn& loss) {
  if (ests.size() != refs.size() || ests.empty())
    throw InvalidInput("pit: need equal non-zero estimate/reference counts");
  const int c = static_cast<int>(ests.size());
  if (c > 8) throw InvalidInput("pit: exhaustive search limited to C <= 8");

  std::vector<std::vector<double>> pair_loss(c, std::vector<double>(c));
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) pair_loss[i][j] = loss(ests[j], refs[i]);

  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  PitResult best;
  bool first = true;
  do {
    double total = 0.0;
    for (int i = 0; i < c; ++i) total += pair_loss[i][perm[i]];
    if (first || total < best.total_loss) {
      best.perm = perm;
      best.total_loss = total;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double PitSiSdrDb(const std::vector<std::vector<double>>& ests,
                  const std::vector<std::vector<double>>& refs) {
  PitResult r = PitAssign(ests, refs, [](const std::vector<double>& e,
                                         const std::vector<double>& t) {
    return -SiSdrDb(e, t);
  });
  return -r.total_loss / static_cast<double>(refs.size());
}

}  // namespace seplab
