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

#ifndef SEPLAB_TRAIN_TRAINER_H_
#define SEPLAB_TRAIN_TRAINER_H_

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "seplab/common/error.h"
#include "seplab/common/rng.h"
#include "seplab/models/separation_model.h"
#include "seplab/train/losses.h"
#include "seplab/train/metrics.h"
#include "seplab/train/optimizer.h"

namespace seplab {

struct TrainConfig {
  double lr0 = 1e-3;
  double decay = 0.98;
  int decay_every = 2;  // epochs
  double clip_norm = 5.0;
  int max_epochs = 100;
  int patience = 10;  // epochs without a new best validation loss
  double a2t_weight = 0.0;
  int batch_size = 1;
  uint64_t seed = 0;
  int max_steps = 0;  // 0 = no step budget (overfit harness uses this)

  void Validate() const {
    if (lr0 <= 0) throw ConfigError("train.lr0: must be positive");
    if (decay <= 0 || decay > 1)
      throw ConfigError("train.decay: must be in (0, 1]");
    if (decay_every < 1)
      throw ConfigError("train.decay_every: must be >= 1");
    if (clip_norm <= 0) throw ConfigError("train.clip_norm: must be positive");
    if (max_epochs < 1) throw ConfigError("train.max_epochs: must be >= 1");
    if (patience < 1 || patience > max_epochs)
      throw ConfigError("train.patience: must be in [1, max_epochs]");
    if (a2t_weight < 0)
      throw ConfigError("train.a2t_weight: must be >= 0");
    if (batch_size < 1) throw ConfigError("train.batch_size: must be >= 1");
    if (max_steps < 0) throw ConfigError("train.max_steps: must be >= 0");
  }
};

// lr0 * decay^floor(epoch / decay_every), epochs 0-indexed.
inline double LrSchedule(int epoch, const TrainConfig& cfg) {
  return cfg.lr0 * std::pow(cfg.decay, epoch / cfg.decay_every);
}

// Stops after `patience` consecutive epochs without a new best.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}

  // Returns true if this epoch set a new best.
  bool Update(double val_loss, int epoch) {
    if (best_epoch_ < 0 || val_loss < best_) {
      best_ = val_loss;
      best_epoch_ = epoch;
      since_best_ = 0;
      return true;
    }
    ++since_best_;
    return false;
  }

  bool ShouldStop() const { return since_best_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best() const { return best_; }

 private:
  int patience_;
  double best_ = 0.0;
  int best_epoch_ = -1;
  int since_best_ = 0;
};

template <typename S>
struct TrainExample {
  std::vector<S> mixture;
  std::vector<std::vector<S>> targets;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  int best_epoch = -1;
  int steps = 0;
  bool stopped_early = false;
};

// Per-step hook; return true to stop training (used by the overfit probe).
using StepCallback = std::function<bool(int step, double loss)>;

// Negative mean PIT-SNR over a split, the validation metric.
template <typename S>
double EvalNegPitSnr(const SeparationModel<S>& model,
                     const std::vector<TrainExample<S>>& split) {
  SEPLAB_CHECK(!split.empty());
  double total = 0.0;
  for (const auto& ex : split) {
    auto outs = model.Forward(ex.mixture);
    std::vector<std::vector<double>> ests, refs;
    for (const auto& o : outs) ests.emplace_back(o.begin(), o.end());
    for (const auto& r : ex.targets) refs.emplace_back(r.begin(), r.end());
    PitResult pr = PitAssign(ests, refs, [](const std::vector<double>& e,
                                            const std::vector<double>& t) {
      return -SnrDb(e, t);
    });
    total += pr.total_loss / static_cast<double>(refs.size());
  }
  return total / static_cast<double>(split.size());
}

// The full recipe: Adam, lr decay, global-norm clipping, per-epoch
// validation, best-checkpoint tracking and patience-based early stopping.
// Deterministic for a fixed seed (single threaded).
template <typename S>
TrainLog Train(SeparationModel<S>* model,
               const std::vector<TrainExample<S>>& train_set,
               const std::vector<TrainExample<S>>& valid_set,
               const TrainConfig& cfg, const StepCallback& on_step = {}) {
  cfg.Validate();
  SEPLAB_CHECK_MSG(!train_set.empty(), "train: empty training set");
  AdamOptimizer<S> opt(model->params());
  EarlyStopper stopper(cfg.patience);
  TrainLog log;
  std::vector<typename ParamStore<S>::Mat> best_params;
  int step = 0;
  bool stop_requested = false;

  for (int epoch = 0; epoch < cfg.max_epochs && !stop_requested; ++epoch) {
    auto epoch_start = std::chrono::steady_clock::now();
    double lr = LrSchedule(epoch, cfg);
    std::vector<int> order(train_set.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    Rng shuffle_rng(MixSeed(cfg.seed, static_cast<uint64_t>(epoch) + 1));
    shuffle_rng.Shuffle(&order);

    double epoch_loss = 0.0;
    int batches = 0;
    for (size_t at = 0; at < order.size() && !stop_requested;
         at += cfg.batch_size) {
      size_t end = std::min(order.size(), at + cfg.batch_size);
      int batch_n = static_cast<int>(end - at);
      model->params().ZeroGrads();
      double batch_loss = 0.0;
      for (size_t k = at; k < end; ++k) {
        const TrainExample<S>& ex = train_set[order[k]];
        Tape<S> tape;
        auto bound = model->BindParams(&tape);
        auto fwd = model->BuildForward(&tape, bound, ex.mixture);
        PitLoss<S> pit = BuildPitSnrLoss(&tape, fwd.waves, ex.targets);
        typename Tape<S>::Var loss = pit.loss;
        if (cfg.a2t_weight > 0.0) {
          auto a2t = BuildA2tLoss(&tape, *model, bound, ex.targets);
          loss = tape.Add(loss, tape.Scale(a2t,
                                           static_cast<S>(cfg.a2t_weight)));
        }
        double loss_val = static_cast<double>(tape.value(loss)(0, 0));
        if (!std::isfinite(loss_val)) {
          throw InvalidInput("train: non-finite loss at epoch " +
                             std::to_string(epoch) + " batch " +
                             std::to_string(batches) + " example " +
                             std::to_string(order[k]));
        }
        batch_loss += loss_val;
        tape.Backward(loss);
        model->AccumulateGrads(tape, bound);
      }
      // mean gradient over the batch
      if (batch_n > 1) {
        S inv = static_cast<S>(1.0 / batch_n);
        for (int i = 0; i < model->params().size(); ++i)
          model->params().at(i).grad *= inv;
      }
      ClipGradNorm(&model->params(), cfg.clip_norm);
      opt.Step(&model->params(), lr);
      epoch_loss += batch_loss / batch_n;
      ++batches;
      ++step;
      if (on_step && on_step(step, batch_loss / batch_n))
        stop_requested = true;
      if (cfg.max_steps > 0 && step >= cfg.max_steps) stop_requested = true;
    }

    double val_loss = valid_set.empty()
                          ? epoch_loss / std::max(1, batches)
                          : EvalNegPitSnr(*model, valid_set);
    bool is_best = stopper.Update(val_loss, epoch);
    if (is_best) {
      best_params.clear();
      for (int i = 0; i < model->params().size(); ++i)
        best_params.push_back(model->params().at(i).value);
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - epoch_start)
                      .count();
    log.epochs.push_back(EpochLog{epoch, epoch_loss / std::max(1, batches),
                                  val_loss, lr, secs});
    if (stopper.ShouldStop()) {
      log.stopped_early = true;
      break;
    }
  }

  log.best_epoch = stopper.best_epoch();
  log.steps = step;
  if (!best_params.empty()) {
    for (int i = 0; i < model->params().size(); ++i)
      model->params().at(i).value = best_params[i];
  }
  return log;
}

}  // namespace seplab

#endif  // SEPLAB_TRAIN_TRAINER_H_
