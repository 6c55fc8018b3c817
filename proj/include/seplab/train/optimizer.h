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

#ifndef SEPLAB_TRAIN_OPTIMIZER_H_
#define SEPLAB_TRAIN_OPTIMIZER_H_

#include <cmath>
#include <vector>

#include "seplab/models/param_store.h"

namespace seplab {

template <typename S>
double GlobalGradNorm(const ParamStore<S>& params) {
  double sq = 0.0;
  for (int i = 0; i < params.size(); ++i) {
    const auto& g = params.at(i).grad;
    sq += static_cast<double>(
        g.template cast<double>().squaredNorm());
  }
  return std::sqrt(sq);
}

// Scales gradients so the global norm is at most max_norm; returns the
// pre-clip norm.
template <typename S>
double ClipGradNorm(ParamStore<S>* params, double max_norm) {
  double norm = GlobalGradNorm(*params);
  if (norm > max_norm && norm > 0.0) {
    S factor = static_cast<S>(max_norm / norm);
    for (int i = 0; i < params->size(); ++i) params->at(i).grad *= factor;
  }
  return norm;
}

// Adam with bias correction.
template <typename S>
class AdamOptimizer {
 public:
  using Mat = typename ParamStore<S>::Mat;

  explicit AdamOptimizer(const ParamStore<S>& params, double beta1 = 0.9,
                         double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (int i = 0; i < params.size(); ++i) {
      const auto& v = params.at(i).value;
      m_.push_back(Mat::Zero(v.rows(), v.cols()));
      v_.push_back(Mat::Zero(v.rows(), v.cols()));
    }
  }

  void Step(ParamStore<S>* params, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (int i = 0; i < params->size(); ++i) {
      auto& p = params->at(i);
      m_[i] = static_cast<S>(beta1_) * m_[i] +
              static_cast<S>(1.0 - beta1_) * p.grad;
      v_[i] = (static_cast<S>(beta2_) * v_[i].array() +
               static_cast<S>(1.0 - beta2_) * p.grad.array().square())
                  .matrix();
      auto m_hat = m_[i].array() / static_cast<S>(bc1);
      auto v_hat = v_[i].array() / static_cast<S>(bc2);
      p.value.array() -=
          static_cast<S>(lr) * m_hat / (v_hat.sqrt() + static_cast<S>(eps_));
    }
  }

  int64_t step_count() const { return t_; }

 private:
  double beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<Mat> m_, v_;
};

}  // namespace seplab

#endif  // SEPLAB_TRAIN_OPTIMIZER_H_
