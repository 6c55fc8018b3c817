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

#ifndef SEPLAB_TESTS_TEST_UTIL_H_
#define SEPLAB_TESTS_TEST_UTIL_H_

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "seplab/common/rng.h"

namespace seplab {
namespace test {

using Matd = Eigen::MatrixXd;

inline Matd RandomMat(int rows, int cols, uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Matd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = scale * rng.Normal();
  return m;
}

inline std::vector<double> RandomWave(int n, uint64_t seed,
                                      double scale = 0.5) {
  Rng rng(seed);
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = scale * rng.Normal();
  return w;
}

// Central finite differences of a scalar function against an analytic
// gradient, elementwise over one tensor. Relative error uses a floor so
// near-zero coordinates compare against FD noise sensibly.
struct GradCheckResult {
  double max_rel_err = 0.0;
  int checked = 0;
};

inline GradCheckResult CheckGradient(
    Eigen::MatrixXd* theta, const Eigen::MatrixXd& analytic,
    const std::function<double()>& eval, double step = 1e-5,
    double floor = 1e-5) {
  GradCheckResult res;
  for (Eigen::Index c = 0; c < theta->cols(); ++c) {
    for (Eigen::Index r = 0; r < theta->rows(); ++r) {
      double orig = (*theta)(r, c);
      (*theta)(r, c) = orig + step;
      double fp = eval();
      (*theta)(r, c) = orig - step;
      double fm = eval();
      (*theta)(r, c) = orig;
      double fd = (fp - fm) / (2.0 * step);
      double a = analytic(r, c);
      double denom = std::max(std::max(std::abs(a), std::abs(fd)), floor);
      double rel = std::abs(a - fd) / denom;
      if (rel > res.max_rel_err) res.max_rel_err = rel;
      ++res.checked;
    }
  }
  return res;
}

}  // namespace test
}  // namespace seplab

#endif  // SEPLAB_TESTS_TEST_UTIL_H_
