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

#ifndef SEPLAB_MODELS_PARAM_STORE_H_
#define SEPLAB_MODELS_PARAM_STORE_H_

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seplab/common/error.h"
#include "seplab/common/rng.h"

namespace seplab {

// Named trainable tensors plus their gradient accumulators. Tensor order is
// the creation order, which the model builder keeps deterministic so that
// seeded initialization and checkpoints are stable.
template <typename S>
class ParamStore {
 public:
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

  struct Tensor {
    std::string name;
    Mat value;
    Mat grad;
  };

  int Add(const std::string& name, int rows, int cols) {
    SEPLAB_CHECK_MSG(index_.find(name) == index_.end(),
                     "duplicate parameter name " << name);
    Tensor t;
    t.name = name;
    t.value = Mat::Zero(rows, cols);
    t.grad = Mat::Zero(rows, cols);
    tensors_.push_back(std::move(t));
    index_[name] = static_cast<int>(tensors_.size()) - 1;
    return static_cast<int>(tensors_.size()) - 1;
  }

  int size() const { return static_cast<int>(tensors_.size()); }
  Tensor& at(int i) { return tensors_[i]; }
  const Tensor& at(int i) const { return tensors_[i]; }

  Tensor& by_name(const std::string& name) {
    auto it = index_.find(name);
    SEPLAB_CHECK_MSG(it != index_.end(), "no parameter named " << name);
    return tensors_[it->second];
  }
  const Tensor& by_name(const std::string& name) const {
    auto it = index_.find(name);
    SEPLAB_CHECK_MSG(it != index_.end(), "no parameter named " << name);
    return tensors_[it->second];
  }
  bool contains(const std::string& name) const {
    return index_.find(name) != index_.end();
  }

  int64_t TotalParams() const {
    int64_t n = 0;
    for (const auto& t : tensors_) n += t.value.size();
    return n;
  }

  void ZeroGrads() {
    for (auto& t : tensors_) t.grad.setZero();
  }

  // Uniform(-bound, bound) fill; the per-tensor stream is derived from the
  // root seed and the tensor ordinal so builds are reproducible.
  void InitUniform(int i, uint64_t root_seed, double bound) {
    Rng rng(MixSeed(root_seed, static_cast<uint64_t>(i)));
    Mat& v = tensors_[i].value;
    for (Eigen::Index c = 0; c < v.cols(); ++c)
      for (Eigen::Index r = 0; r < v.rows(); ++r)
        v(r, c) = static_cast<S>(rng.Uniform(-bound, bound));
  }

  void SetConstant(int i, S value) { tensors_[i].value.setConstant(value); }

 private:
  std::vector<Tensor> tensors_;
  std::map<std::string, int> index_;
};

}  // namespace seplab

#endif  // SEPLAB_MODELS_PARAM_STORE_H_
