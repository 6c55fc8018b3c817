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

#ifndef SEPLAB_TRAIN_LOSSES_H_
#define SEPLAB_TRAIN_LOSSES_H_

#include <cmath>
#include <vector>

#include "seplab/autodiff/tape.h"
#include "seplab/common/error.h"
#include "seplab/models/separation_model.h"
#include "seplab/train/metrics.h"

namespace seplab {

// Differentiable negative-SNR loss between an estimate on the tape and a
// constant reference: -10 log10(||ref||^2 / (||ref-est||^2 + eps)) with
// eps = 1e-8 ||ref||^2, written as a log of the error power so only the
// estimate carries gradient.
template <typename S>
typename Tape<S>::Var NegSnrLoss(Tape<S>* tape, typename Tape<S>::Var est,
                                 const std::vector<S>& ref) {
  using Mat = typename Tape<S>::Mat;
  SEPLAB_CHECK(tape->value(est).cols() == 1);
  SEPLAB_CHECK(tape->value(est).rows() ==
               static_cast<Eigen::Index>(ref.size()));
  Mat ref_mat(ref.size(), 1);
  double ref_pow = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    ref_mat(i, 0) = ref[i];
    ref_pow += static_cast<double>(ref[i]) * ref[i];
  }
  if (ref_pow <= 0.0) throw InvalidInput("snr loss: reference is all zero");
  auto ref_var = tape->Constant(std::move(ref_mat));
  auto diff = tape->Sub(ref_var, est);
  auto err_pow = tape->Dot(diff, diff);
  const S eps = static_cast<S>(1e-8 * ref_pow);
  auto log_err = tape->Log(tape->AddScalar(err_pow, eps));
  const S k = static_cast<S>(10.0 / std::log(10.0));
  auto scaled = tape->Scale(log_err, k);
  return tape->AddScalar(scaled,
                         static_cast<S>(-10.0 * std::log10(ref_pow)));
}

template <typename S>
struct PitLoss {
  typename Tape<S>::Var loss;   // mean per-source negative SNR
  std::vector<int> perm;        // estimate index assigned to reference i
};

// Utterance-level permutation-invariant negative-SNR loss. The assignment
// is chosen on loss values; gradient flows through the selected pairs only.
template <typename S>
PitLoss<S> BuildPitSnrLoss(Tape<S>* tape,
                           const std::vector<typename Tape<S>::Var>& ests,
                           const std::vector<std::vector<S>>& refs) {
  const int c = static_cast<int>(refs.size());
  SEPLAB_CHECK(static_cast<int>(ests.size()) == c && c >= 1);
  std::vector<std::vector<typename Tape<S>::Var>> pair(c);
  std::vector<std::vector<double>> pair_val(c, std::vector<double>(c));
  for (int i = 0; i < c; ++i) {
    pair[i].resize(c);
    for (int j = 0; j < c; ++j) {
      pair[i][j] = NegSnrLoss(tape, ests[j], refs[i]);
      pair_val[i][j] = static_cast<double>(tape->value(pair[i][j])(0, 0));
    }
  }
  std::vector<int> perm(c);
  for (int i = 0; i < c; ++i) perm[i] = i;
  std::vector<int> best = perm;
  double best_total = 0.0;
  bool first = true;
  do {
    double total = 0.0;
    for (int i = 0; i < c; ++i) total += pair_val[i][perm[i]];
    if (first || total < best_total) {
      best = perm;
      best_total = total;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  typename Tape<S>::Var total = pair[0][best[0]];
  for (int i = 1; i < c; ++i) total = tape->Add(total, pair[i][best[i]]);
  PitLoss<S> out;
  out.loss = tape->Scale(total, static_cast<S>(1.0 / c));
  out.perm = best;
  return out;
}

// Auxiliary autoencoding loss: feed each source image alone as the mixture
// and require the best-matching output head to reconstruct it.
template <typename S>
typename Tape<S>::Var BuildA2tLoss(
    Tape<S>* tape, const SeparationModel<S>& model,
    const std::vector<typename Tape<S>::Var>& bound,
    const std::vector<std::vector<S>>& targets) {
  const int c = static_cast<int>(targets.size());
  SEPLAB_CHECK(c >= 1);
  typename Tape<S>::Var total;
  for (int i = 0; i < c; ++i) {
    auto out = model.BuildForward(tape, bound, targets[i]);
    typename Tape<S>::Var best;
    double best_val = 0.0;
    for (size_t j = 0; j < out.waves.size(); ++j) {
      auto l = NegSnrLoss(tape, out.waves[j], targets[i]);
      double v = static_cast<double>(tape->value(l)(0, 0));
      if (j == 0 || v < best_val) {
        best = l;
        best_val = v;
      }
    }
    total = (i == 0) ? best : tape->Add(total, best);
  }
  return tape->Scale(total, static_cast<S>(1.0 / c));
}

// Non-tape A2T value, the module-level operation: mean over sources of the
// negative best-head SNR when the model autoencodes each source alone.
template <typename S>
double A2tLossValue(const SeparationModel<S>& model,
                    const std::vector<std::vector<S>>& targets) {
  double total = 0.0;
  for (const auto& target : targets) {
    auto outs = model.Forward(target);
    std::vector<double> ref(target.begin(), target.end());
    double best = 0.0;
    for (size_t j = 0; j < outs.size(); ++j) {
      std::vector<double> est(outs[j].begin(), outs[j].end());
      double snr = SnrDb(est, ref);
      if (j == 0 || snr > best) best = snr;
    }
    total += -best;
  }
  return total / static_cast<double>(targets.size());
}

}  // namespace seplab

#endif  // SEPLAB_TRAIN_LOSSES_H_
