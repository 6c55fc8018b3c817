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

#ifndef SEPLAB_TRAIN_METRICS_H_
#define SEPLAB_TRAIN_METRICS_H_

#include <functional>
#include <utility>
#include <vector>

namespace seplab {

// Metrics are capped at +/- kMetricCapDb so losses stay finite; the SNR
// epsilon of 1e-8 * ||ref||^2 realizes the +80 dB cap for a perfect match.
constexpr double kMetricCapDb = 80.0;

// 10 log10(||ref||^2 / (||ref - est||^2 + 1e-8 ||ref||^2)).
// Throws InvalidInput on length mismatch or an all-zero reference.
double SnrDb(const std::vector<double>& est, const std::vector<double>& ref);

// Scale-invariant SDR: project est onto ref, s = (<est,ref>/||ref||^2) ref,
// return 10 log10(||s||^2 / ||est - s||^2), capped at +/- 80 dB.
// Invariant to rescaling of ref; throws on zero est or zero ref.
double SiSdrDb(const std::vector<double>& est,
               const std::vector<double>& ref);

using PairLossFn =
    std::function<double(const std::vector<double>&, const std::vector<double>&)>;

struct PitResult {
  // perm[i] is the estimate index assigned to reference i.
  std::vector<int> perm;
  double total_loss = 0.0;
};

// Exhaustive search over all C! assignments of estimates to references,
// minimizing the summed pairwise loss. Ties break to the lexicographically
// smallest permutation.
PitResult PitAssign(const std::vector<std::vector<double>>& ests,
                    const std::vector<std::vector<double>>& refs,
                    const PairLossFn& loss);

// Mean PIT-aligned SI-SDR of the estimates against the references.
double PitSiSdrDb(const std::vector<std::vector<double>>& ests,
                  const std::vector<std::vector<double>>& refs);

}  // namespace seplab

#endif  // SEPLAB_TRAIN_METRICS_H_
