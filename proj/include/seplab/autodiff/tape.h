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

#ifndef SEPLAB_AUTODIFF_TAPE_H_
#define SEPLAB_AUTODIFF_TAPE_H_

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "seplab/common/error.h"

namespace seplab {

// Column layout of a recurrent scan over a chunked feature matrix
// [D x (seq_len * batch)].
//   kWithinChunk:  column(b, t) = b * seq_len + t   (intra-chunk pass)
//   kAcrossChunks: column(b, t) = t * batch + b     (inter-chunk pass)
enum class ScanOrder { kWithinChunk, kAcrossChunks };

struct LstmSpec {
  int seq_len = 0;
  int batch = 0;
  ScanOrder order = ScanOrder::kWithinChunk;
  bool reverse = false;
};

// Reverse-mode autodiff over dense matrices. A Tape is built per forward
// pass; parameters enter as leaf nodes and their gradients are read back
// after Backward(). Not thread safe; use one Tape per thread.
template <typename S>
class Tape {
 public:
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
  };

  Var Input(Mat value, bool needs_grad) {
    nodes_.push_back(Node{std::move(value), Mat(), needs_grad});
    return Var{static_cast<int>(nodes_.size()) - 1};
  }

  Var Constant(Mat value) { return Input(std::move(value), false); }

  const Mat& value(Var v) const { return nodes_[v.id].value; }
  const Mat& grad(Var v) const { return nodes_[v.id].grad; }
  bool needs_grad(Var v) const { return nodes_[v.id].needs_grad; }

  // ---- elementary ops ----

  Var MatMul(Var a, Var b) {
    const Mat& A = val(a);
    const Mat& B = val(b);
    SEPLAB_CHECK_MSG(A.cols() == B.rows(), "matmul shape mismatch");
    Var out = Alloc(A * B, Needs(a) || Needs(b));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, b, out]() {
        const Mat& g = nodes_[out.id].grad;
        if (Needs(a)) GradOf(a) += g * val(b).transpose();
        if (Needs(b)) GradOf(b) += val(a).transpose() * g;
      });
    }
    return out;
  }

  Var Add(Var a, Var b) {
    SEPLAB_CHECK(SameShape(a, b));
    Var out = Alloc(val(a) + val(b), Needs(a) || Needs(b));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, b, out]() {
        const Mat& g = nodes_[out.id].grad;
        if (Needs(a)) GradOf(a) += g;
        if (Needs(b)) GradOf(b) += g;
      });
    }
    return out;
  }

  Var Sub(Var a, Var b) {
    SEPLAB_CHECK(SameShape(a, b));
    Var out = Alloc(val(a) - val(b), Needs(a) || Needs(b));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, b, out]() {
        const Mat& g = nodes_[out.id].grad;
        if (Needs(a)) GradOf(a) += g;
        if (Needs(b)) GradOf(b) -= g;
      });
    }
    return out;
  }

  // Elementwise (Hadamard) product.
  Var CMul(Var a, Var b) {
    SEPLAB_CHECK(SameShape(a, b));
    Var out = Alloc(val(a).cwiseProduct(val(b)), Needs(a) || Needs(b));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, b, out]() {
        const Mat& g = nodes_[out.id].grad;
        if (Needs(a)) GradOf(a) += g.cwiseProduct(val(b));
        if (Needs(b)) GradOf(b) += g.cwiseProduct(val(a));
      });
    }
    return out;
  }

  // a + v broadcast over columns, v is [rows x 1].
  Var AddColVec(Var a, Var v) {
    const Mat& A = val(a);
    SEPLAB_CHECK(val(v).rows() == A.rows() && val(v).cols() == 1);
    Mat r = A.colwise() + Vec(val(v).col(0));
    Var out = Alloc(std::move(r), Needs(a) || Needs(v));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, v, out]() {
        const Mat& g = nodes_[out.id].grad;
        if (Needs(a)) GradOf(a) += g;
        if (Needs(v)) GradOf(v) += g.rowwise().sum();
      });
    }
    return out;
  }

  Var Scale(Var a, S k) {
    Var out = Alloc(val(a) * k, Needs(a));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, k, out]() { GradOf(a) += nodes_[out.id].grad * k; });
    }
    return out;
  }

  Var AddScalar(Var a, S k) {
    Var out = Alloc((val(a).array() + k).matrix(), Needs(a));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, out]() { GradOf(a) += nodes_[out.id].grad; });
    }
    return out;
  }

  Var Relu(Var a) {
    Var out = Alloc(val(a).cwiseMax(S(0)), Needs(a));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, out]() {
        const Mat& g = nodes_[out.id].grad;
        GradOf(a).array() +=
            g.array() * (val(a).array() > S(0)).template cast<S>();
      });
    }
    return out;
  }

  // Elementwise natural log; caller guarantees positive entries.
  Var Log(Var a) {
    Var out = Alloc(val(a).array().log().matrix(), Needs(a));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, out]() {
        GradOf(a).array() +=
            nodes_[out.id].grad.array() / val(a).array();
      });
    }
    return out;
  }

  // Sum of all entries, [1x1].
  Var Sum(Var a) {
    Mat r(1, 1);
    r(0, 0) = val(a).sum();
    Var out = Alloc(std::move(r), Needs(a));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, out]() {
        GradOf(a).array() += nodes_[out.id].grad(0, 0);
      });
    }
    return out;
  }

  // sum(a .* b), [1x1].
  Var Dot(Var a, Var b) {
    SEPLAB_CHECK(SameShape(a, b));
    Mat r(1, 1);
    r(0, 0) = val(a).cwiseProduct(val(b)).sum();
    Var out = Alloc(std::move(r), Needs(a) || Needs(b));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, b, out]() {
        S g = nodes_[out.id].grad(0, 0);
        if (Needs(a)) GradOf(a) += g * val(b);
        if (Needs(b)) GradOf(b) += g * val(a);
      });
    }
    return out;
  }

  Var ConcatRows(const std::vector<Var>& parts) {
    SEPLAB_CHECK(!parts.empty());
    Eigen::Index cols = val(parts[0]).cols();
    Eigen::Index rows = 0;
    bool needs = false;
    for (Var p : parts) {
      SEPLAB_CHECK(val(p).cols() == cols);
      rows += val(p).rows();
      needs = needs || Needs(p);
    }
    Mat r(rows, cols);
    Eigen::Index at = 0;
    for (Var p : parts) {
      r.middleRows(at, val(p).rows()) = val(p);
      at += val(p).rows();
    }
    Var out = Alloc(std::move(r), needs);
    if (nodes_[out.id].needs_grad) {
      std::vector<Var> ps = parts;
      Record([this, ps, out]() {
        const Mat& g = nodes_[out.id].grad;
        Eigen::Index at = 0;
        for (Var p : ps) {
          if (Needs(p)) GradOf(p) += g.middleRows(at, val(p).rows());
          at += val(p).rows();
        }
      });
    }
    return out;
  }

  Var SliceRows(Var a, int r0, int rows) {
    const Mat& A = val(a);
    SEPLAB_CHECK(r0 >= 0 && r0 + rows <= A.rows());
    Var out = Alloc(A.middleRows(r0, rows), Needs(a));
    if (nodes_[out.id].needs_grad) {
      Record([this, a, r0, rows, out]() {
        GradOf(a).middleRows(r0, rows) += nodes_[out.id].grad;
      });
    }
    return out;
  }

  // out col j = x col idx[j], or zeros when idx[j] < 0.
  Var GatherCols(Var a, std::vector<int> idx) {
    const Mat& A = val(a);
    Mat r = Mat::Zero(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) {
      if (idx[j] >= 0) {
        SEPLAB_CHECK(idx[j] < A.cols());
        r.col(static_cast<Eigen::Index>(j)) = A.col(idx[j]);
      }
    }
    Var out = Alloc(std::move(r), Needs(a));
    if (nodes_[out.id].needs_grad) {
      auto ix = std::make_shared<std::vector<int>>(std::move(idx));
      Record([this, a, ix, out]() {
        const Mat& g = nodes_[out.id].grad;
        Mat& da = GradOf(a);
        for (size_t j = 0; j < ix->size(); ++j) {
          int c = (*ix)[j];
          if (c >= 0) da.col(c) += g.col(static_cast<Eigen::Index>(j));
        }
      });
    }
    return out;
  }

  // Overlap-add of chunk columns back to a frame sequence, normalized by
  // the per-frame overlap count: out col c = sum_{j: idx[j]==c} x col j,
  // divided by counts[c]. idx[j] < 0 drops the (padding) column.
  Var ScatterMeanCols(Var a, std::vector<int> idx, std::vector<int> counts) {
    const Mat& A = val(a);
    SEPLAB_CHECK(static_cast<Eigen::Index>(idx.size()) == A.cols());
    Mat r = Mat::Zero(A.rows(), static_cast<Eigen::Index>(counts.size()));
    for (size_t j = 0; j < idx.size(); ++j) {
      if (idx[j] >= 0) r.col(idx[j]) += A.col(static_cast<Eigen::Index>(j));
    }
    for (size_t c = 0; c < counts.size(); ++c) {
      SEPLAB_CHECK_MSG(counts[c] > 0, "uncovered frame in merge");
      r.col(static_cast<Eigen::Index>(c)) /= static_cast<S>(counts[c]);
    }
    Var out = Alloc(std::move(r), Needs(a));
    if (nodes_[out.id].needs_grad) {
      auto ix = std::make_shared<std::vector<int>>(std::move(idx));
      auto cn = std::make_shared<std::vector<int>>(std::move(counts));
      Record([this, a, ix, cn, out]() {
        const Mat& g = nodes_[out.id].grad;
        Mat& da = GradOf(a);
        for (size_t j = 0; j < ix->size(); ++j) {
          int c = (*ix)[j];
          if (c >= 0)
            da.col(static_cast<Eigen::Index>(j)) +=
                g.col(c) / static_cast<S>((*cn)[c]);
        }
      });
    }
    return out;
  }

  // Waveform [t x 1] to framed matrix [window x num_frames] with the given
  // hop. Samples beyond (num_frames-1)*hop + window are dropped.
  Var FrameGather(Var wave, int window, int hop, int num_frames) {
    const Mat& w = val(wave);
    SEPLAB_CHECK(w.cols() == 1);
    SEPLAB_CHECK(num_frames >= 1 &&
                 (num_frames - 1) * hop + window <= w.rows());
    Mat r(window, num_frames);
    for (int l = 0; l < num_frames; ++l)
      r.col(l) = w.col(0).segment(l * hop, window);
    Var out = Alloc(std::move(r), Needs(wave));
    if (nodes_[out.id].needs_grad) {
      Record([this, wave, window, hop, num_frames, out]() {
        const Mat& g = nodes_[out.id].grad;
        Mat& dw = GradOf(wave);
        for (int l = 0; l < num_frames; ++l)
          dw.col(0).segment(l * hop, window) += g.col(l);
      });
    }
    return out;
  }

  // Overlap-add synthesis of framed matrix [window x num_frames] into a
  // waveform [t_out x 1]. Frame samples falling beyond t_out are dropped;
  // uncovered tail samples stay zero.
  Var OverlapAdd(Var frames, int hop, int t_out) {
    const Mat& F = val(frames);
    int window = static_cast<int>(F.rows());
    int num_frames = static_cast<int>(F.cols());
    Mat r = Mat::Zero(t_out, 1);
    for (int l = 0; l < num_frames; ++l) {
      int start = l * hop;
      int n = std::min(window, t_out - start);
      if (n <= 0) break;
      r.col(0).segment(start, n) += F.col(l).head(n);
    }
    Var out = Alloc(std::move(r), Needs(frames));
    if (nodes_[out.id].needs_grad) {
      Record([this, frames, hop, t_out, window, num_frames, out]() {
        const Mat& g = nodes_[out.id].grad;
        Mat& df = GradOf(frames);
        for (int l = 0; l < num_frames; ++l) {
          int start = l * hop;
          int n = std::min(window, t_out - start);
          if (n <= 0) break;
          df.col(l).head(n) += g.col(0).segment(start, n);
        }
      });
    }
    return out;
  }

  // Global layer normalization: statistics over all channels and frames,
  // per-channel affine (gamma, beta are [rows x 1]).
  Var GlobalLayerNorm(Var x, Var gamma, Var beta, S eps) {
    const Mat& X = val(x);
    SEPLAB_CHECK(val(gamma).rows() == X.rows() && val(gamma).cols() == 1);
    SEPLAB_CHECK(val(beta).rows() == X.rows() && val(beta).cols() == 1);
    S m = static_cast<S>(X.size());
    S mu = X.sum() / m;
    S var = (X.array() - mu).square().sum() / m;
    S inv_std = S(1) / std::sqrt(var + eps);
    auto xhat = std::make_shared<Mat>(((X.array() - mu) * inv_std).matrix());
    Mat r = (xhat->array().colwise() * val(gamma).col(0).array()).matrix();
    r.colwise() += Vec(val(beta).col(0));
    Var out = Alloc(std::move(r), Needs(x) || Needs(gamma) || Needs(beta));
    if (nodes_[out.id].needs_grad) {
      Record([this, x, gamma, beta, xhat, inv_std, m, out]() {
        const Mat& g = nodes_[out.id].grad;
        if (Needs(beta)) GradOf(beta) += g.rowwise().sum();
        if (Needs(gamma)) GradOf(gamma) += g.cwiseProduct(*xhat).rowwise().sum();
        if (Needs(x)) {
          Mat dxhat =
              (g.array().colwise() * val(gamma).col(0).array()).matrix();
          S mean_dxhat = dxhat.sum() / m;
          S mean_dxhat_xhat = dxhat.cwiseProduct(*xhat).sum() / m;
          GradOf(x).array() +=
              inv_std * (dxhat.array() - mean_dxhat -
                         xhat->array() * mean_dxhat_xhat);
        }
      });
    }
    return out;
  }

  // Fused single-direction LSTM scan. x is [D x (seq_len*batch)] in the
  // layout named by spec.order; output is [H x same]. Weights: wx [4H x D],
  // wh [4H x H], b [4H x 1]; gate row order i, f, g, o.
  Var Lstm(Var x, Var wx, Var wh, Var b, const LstmSpec& spec) {
    const Mat& X = val(x);
    const Mat& Wx = val(wx);
    const Mat& Wh = val(wh);
    const int T = spec.seq_len, B = spec.batch;
    SEPLAB_CHECK(X.cols() == static_cast<Eigen::Index>(T) * B);
    SEPLAB_CHECK(Wx.rows() % 4 == 0 && Wx.cols() == X.rows());
    const int H = static_cast<int>(Wx.rows()) / 4;
    SEPLAB_CHECK(Wh.rows() == 4 * H && Wh.cols() == H);
    SEPLAB_CHECK(val(b).rows() == 4 * H && val(b).cols() == 1);

    auto st = std::make_shared<LstmState>();
    st->gates = Mat(4 * H, X.cols());   // post-activation i,f,g,o
    st->cell = Mat(H, X.cols());
    st->tanh_cell = Mat(H, X.cols());
    st->pre = Wx * X;                   // input contribution, all steps

    Mat out_val = Mat::Zero(H, X.cols());
    Mat h = Mat::Zero(H, B), c = Mat::Zero(H, B);
    Mat z(4 * H, B);
    for (int s = 0; s < T; ++s) {
      int tau = spec.reverse ? T - 1 - s : s;
      GatherStep(st->pre, spec, tau, &z);
      z.noalias() += Wh * h;
      z.colwise() += Vec(val(b).col(0));
      auto zi = z.topRows(H).array();
      auto zf = z.middleRows(H, H).array();
      auto zg = z.middleRows(2 * H, H).array();
      auto zo = z.bottomRows(H).array();
      Mat gi = (S(1) / (S(1) + (-zi).exp())).matrix();
      Mat gf = (S(1) / (S(1) + (-zf).exp())).matrix();
      Mat gg = zg.tanh().matrix();
      Mat go = (S(1) / (S(1) + (-zo).exp())).matrix();
      c = gf.cwiseProduct(c) + gi.cwiseProduct(gg);
      Mat tc = c.array().tanh().matrix();
      h = go.cwiseProduct(tc);
      ScatterStep(gi, spec, tau, 0, &st->gates);
      ScatterStep(gf, spec, tau, H, &st->gates);
      ScatterStep(gg, spec, tau, 2 * H, &st->gates);
      ScatterStep(go, spec, tau, 3 * H, &st->gates);
      ScatterStep(c, spec, tau, 0, &st->cell);
      ScatterStep(tc, spec, tau, 0, &st->tanh_cell);
      ScatterStep(h, spec, tau, 0, &out_val);
    }

    bool needs = Needs(x) || Needs(wx) || Needs(wh) || Needs(b);
    Var out = Alloc(std::move(out_val), needs);
    if (nodes_[out.id].needs_grad) {
      LstmSpec sp = spec;
      Record([this, x, wx, wh, b, sp, st, H, T, B, out]() {
        const Mat& gout = nodes_[out.id].grad;
        const Mat& Wx = val(wx);
        const Mat& Wh = val(wh);
        Mat dpre = Mat::Zero(4 * H, val(x).cols());
        Mat dh_carry = Mat::Zero(H, B), dc_carry = Mat::Zero(H, B);
        Mat gi(H, B), gf(H, B), gg(H, B), go(H, B), tc(H, B);
        Mat cprev(H, B), hprev(H, B), dz(4 * H, B), dh(H, B);
        for (int s = T - 1; s >= 0; --s) {
          int tau = sp.reverse ? T - 1 - s : s;
          int tau_prev = sp.reverse ? tau + 1 : tau - 1;
          GatherStep(gout, sp, tau, &dh);
          dh += dh_carry;
          GatherStep(st->gates, sp, tau, &gi, 0, H);
          GatherStep(st->gates, sp, tau, &gf, H, H);
          GatherStep(st->gates, sp, tau, &gg, 2 * H, H);
          GatherStep(st->gates, sp, tau, &go, 3 * H, H);
          GatherStep(st->tanh_cell, sp, tau, &tc);
          if (s == 0) {
            cprev.setZero();
            hprev.setZero();
          } else {
            GatherStep(st->cell, sp, tau_prev, &cprev);
            GatherStep(nodes_[out.id].value, sp, tau_prev, &hprev);
          }
          Mat do_ = dh.cwiseProduct(tc);
          Mat dc = dc_carry +
                   (dh.array() * go.array() * (S(1) - tc.array().square()))
                       .matrix();
          dz.topRows(H) = (dc.array() * gg.array() * gi.array() *
                           (S(1) - gi.array()))
                              .matrix();
          dz.middleRows(H, H) = (dc.array() * cprev.array() * gf.array() *
                                 (S(1) - gf.array()))
                                    .matrix();
          dz.middleRows(2 * H, H) =
              (dc.array() * gi.array() * (S(1) - gg.array().square()))
                  .matrix();
          dz.bottomRows(H) =
              (do_.array() * go.array() * (S(1) - go.array())).matrix();
          if (Needs(b)) GradOf(b) += dz.rowwise().sum();
          if (Needs(wh)) GradOf(wh).noalias() += dz * hprev.transpose();
          dh_carry.noalias() = Wh.transpose() * dz;
          dc_carry = dc.cwiseProduct(gf);
          ScatterStep(dz, sp, tau, 0, &dpre);
        }
        if (Needs(wx)) GradOf(wx).noalias() += dpre * val(x).transpose();
        if (Needs(x)) GradOf(x).noalias() += Wx.transpose() * dpre;
      });
    }
    return out;
  }

  // Seeds the root (a [1x1] scalar) with gradient 1 and propagates.
  void Backward(Var root) {
    SEPLAB_CHECK(val(root).rows() == 1 && val(root).cols() == 1);
    for (Node& n : nodes_) {
      if (n.needs_grad) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
    }
    SEPLAB_CHECK_MSG(nodes_[root.id].needs_grad,
                     "backward from a constant graph");
    nodes_[root.id].grad(0, 0) = S(1);
    for (auto it = backward_.rbegin(); it != backward_.rend(); ++it) (*it)();
  }

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool needs_grad = false;
  };

  struct LstmState {
    Mat pre;        // Wx * x for all columns
    Mat gates;      // activations i,f,g,o stacked [4H x cols]
    Mat cell;       // c_t
    Mat tanh_cell;  // tanh(c_t)
  };

  const Mat& val(Var v) const { return nodes_[v.id].value; }
  Mat& GradOf(Var v) { return nodes_[v.id].grad; }
  bool Needs(Var v) const { return nodes_[v.id].needs_grad; }
  bool SameShape(Var a, Var b) const {
    return val(a).rows() == val(b).rows() && val(a).cols() == val(b).cols();
  }

  Var Alloc(Mat value, bool needs_grad) {
    nodes_.push_back(Node{std::move(value), Mat(), needs_grad});
    return Var{static_cast<int>(nodes_.size()) - 1};
  }

  void Record(std::function<void()> fn) { backward_.push_back(std::move(fn)); }

  static int StepColumn(const LstmSpec& spec, int tau, int b) {
    return spec.order == ScanOrder::kWithinChunk ? b * spec.seq_len + tau
                                                 : tau * spec.batch + b;
  }

  // Copies the batch columns of step tau out of src (rows [r0, r0+rows))
  // into dst [rows x batch].
  static void GatherStep(const Mat& src, const LstmSpec& spec, int tau,
                         Mat* dst, int r0 = 0, int rows = -1) {
    if (rows < 0) rows = static_cast<int>(dst->rows());
    if (spec.order == ScanOrder::kAcrossChunks) {
      *dst = src.block(r0, static_cast<Eigen::Index>(tau) * spec.batch, rows,
                       spec.batch);
      return;
    }
    for (int b = 0; b < spec.batch; ++b)
      dst->col(b) = src.col(StepColumn(spec, tau, b)).segment(r0, rows);
  }

  static void ScatterStep(const Mat& src, const LstmSpec& spec, int tau,
                          int r0, Mat* dst) {
    if (spec.order == ScanOrder::kAcrossChunks) {
      dst->block(r0, static_cast<Eigen::Index>(tau) * spec.batch, src.rows(),
                 spec.batch) = src;
      return;
    }
    for (int b = 0; b < spec.batch; ++b)
      dst->col(StepColumn(spec, tau, b)).segment(r0, src.rows()) = src.col(b);
  }

  std::vector<Node> nodes_;
  std::vector<std::function<void()>> backward_;
};

}  // namespace seplab

#endif  // SEPLAB_AUTODIFF_TAPE_H_
