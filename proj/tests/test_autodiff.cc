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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "seplab/autodiff/tape.h"
#include "test_util.h"

using seplab::LstmSpec;
using seplab::ScanOrder;
using seplab::Tape;
using seplab::test::CheckGradient;
using seplab::test::Matd;
using seplab::test::RandomMat;

namespace {

// Builds a scalar probe sum(R .* f(inputs)) and checks d/d(inputs[k])
// against central differences.
void CheckOp(std::vector<Matd> inputs,
             const std::function<Tape<double>::Var(
                 Tape<double>*, const std::vector<Tape<double>::Var>&)>& op,
             double tol = 5e-7, uint64_t probe_seed = 99) {
  auto run = [&](Matd* grad_out, int wrt) {
    Tape<double> tape;
    std::vector<Tape<double>::Var> vars;
    for (const auto& m : inputs) vars.push_back(tape.Input(m, true));
    auto out = op(&tape, vars);
    Matd probe = RandomMat(static_cast<int>(tape.value(out).rows()),
                           static_cast<int>(tape.value(out).cols()),
                           probe_seed);
    auto loss = tape.Dot(out, tape.Constant(probe));
    if (grad_out) {
      tape.Backward(loss);
      *grad_out = tape.grad(vars[wrt]);
    }
    return tape.value(loss)(0, 0);
  };
  for (size_t k = 0; k < inputs.size(); ++k) {
    Matd analytic;
    run(&analytic, static_cast<int>(k));
    auto eval = [&]() { return run(nullptr, 0); };
    auto res = CheckGradient(&inputs[k], analytic, eval, 1e-6, 1e-6);
    INFO("input ", k, " max rel err ", res.max_rel_err);
    CHECK(res.max_rel_err < tol);
  }
}

}  // namespace

TEST_CASE("matmul add sub cmul gradients") {
  CheckOp({RandomMat(3, 4, 1), RandomMat(4, 5, 2)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->MatMul(v[0], v[1]);
          });
  CheckOp({RandomMat(3, 4, 3), RandomMat(3, 4, 4)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->Add(v[0], v[1]);
          });
  CheckOp({RandomMat(3, 4, 5), RandomMat(3, 4, 6)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->Sub(v[0], v[1]);
          });
  CheckOp({RandomMat(3, 4, 7), RandomMat(3, 4, 8)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->CMul(v[0], v[1]);
          });
}

TEST_CASE("bias, scale, relu, log, reductions") {
  CheckOp({RandomMat(3, 5, 10), RandomMat(3, 1, 11)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->AddColVec(v[0], v[1]);
          });
  CheckOp({RandomMat(4, 4, 12)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->Scale(v[0], 2.5);
          });
  CheckOp({RandomMat(4, 4, 13)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->Relu(v[0]);
          });
  Matd pos = RandomMat(4, 4, 14).array().abs().matrix() +
             Matd::Constant(4, 4, 0.5);
  CheckOp({pos},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->Log(v[0]);
          },
          1e-6);
  CheckOp({RandomMat(4, 6, 15)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->Sum(v[0]);
          });
  CheckOp({RandomMat(4, 6, 16), RandomMat(4, 6, 17)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->Dot(v[0], v[1]);
          });
}

TEST_CASE("structure ops gradients") {
  CheckOp({RandomMat(3, 4, 20), RandomMat(2, 4, 21)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->ConcatRows({v[0], v[1]});
          });
  CheckOp({RandomMat(6, 4, 22)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->SliceRows(v[0], 2, 3);
          });
  CheckOp({RandomMat(3, 5, 23)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->GatherCols(v[0], {4, -1, 0, 0, 2});
          });
  CheckOp({RandomMat(3, 6, 24)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->ScatterMeanCols(v[0], {0, 1, 1, 2, -1, 0}, {2, 2, 1});
          });
  CheckOp({RandomMat(12, 1, 25)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->FrameGather(v[0], 4, 2, 5);
          });
  CheckOp({RandomMat(4, 5, 26)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->OverlapAdd(v[0], 2, 12);
          });
}

TEST_CASE("global layer norm gradient") {
  Matd gamma = RandomMat(5, 1, 31).array().abs().matrix() +
               Matd::Constant(5, 1, 0.5);
  CheckOp({RandomMat(5, 7, 30), gamma, RandomMat(5, 1, 32)},
          [](Tape<double>* t, const std::vector<Tape<double>::Var>& v) {
            return t->GlobalLayerNorm(v[0], v[1], v[2], 1e-8);
          },
          1e-5);
}

TEST_CASE("lstm gradient, both scan orders and directions") {
  const int d = 3, h = 4, seq = 5, batch = 2;
  for (ScanOrder order :
       {ScanOrder::kWithinChunk, ScanOrder::kAcrossChunks}) {
    for (bool reverse : {false, true}) {
      LstmSpec spec{seq, batch, order, reverse};
      CheckOp({RandomMat(d, seq * batch, 40, 0.5),
               RandomMat(4 * h, d, 41, 0.3), RandomMat(4 * h, h, 42, 0.3),
               RandomMat(4 * h, 1, 43, 0.3)},
              [spec](Tape<double>* t,
                     const std::vector<Tape<double>::Var>& v) {
                return t->Lstm(v[0], v[1], v[2], v[3], spec);
              },
              2e-5);
    }
  }
}

TEST_CASE("lstm matches a per-step reference implementation") {
  const int d = 2, h = 3, seq = 4, batch = 2;
  Matd x = RandomMat(d, seq * batch, 50, 0.7);
  Matd wx = RandomMat(4 * h, d, 51, 0.4);
  Matd wh = RandomMat(4 * h, h, 52, 0.4);
  Matd b = RandomMat(4 * h, 1, 53, 0.4);

  Tape<double> tape;
  auto vx = tape.Input(x, false);
  auto vwx = tape.Input(wx, false);
  auto vwh = tape.Input(wh, false);
  auto vb = tape.Input(b, false);
  LstmSpec spec{seq, batch, ScanOrder::kWithinChunk, false};
  auto out = tape.Lstm(vx, vwx, vwh, vb, spec);

  auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  for (int s = 0; s < batch; ++s) {
    Eigen::VectorXd hprev = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd cprev = Eigen::VectorXd::Zero(h);
    for (int t = 0; t < seq; ++t) {
      Eigen::VectorXd z = wx * x.col(s * seq + t) + wh * hprev + b;
      Eigen::VectorXd hv(h);
      for (int i = 0; i < h; ++i) {
        double gi = sigmoid(z(i));
        double gf = sigmoid(z(h + i));
        double gg = std::tanh(z(2 * h + i));
        double go = sigmoid(z(3 * h + i));
        cprev(i) = gf * cprev(i) + gi * gg;
        hv(i) = go * std::tanh(cprev(i));
      }
      hprev = hv;
      for (int i = 0; i < h; ++i)
        CHECK(tape.value(out)(i, s * seq + t) ==
              doctest::Approx(hv(i)).epsilon(1e-12));
    }
  }
}
