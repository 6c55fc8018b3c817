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

#ifndef SEPLAB_MODELS_SEPARATION_MODEL_H_
#define SEPLAB_MODELS_SEPARATION_MODEL_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "seplab/autodiff/tape.h"
#include "seplab/codec/codec.h"
#include "seplab/common/error.h"
#include "seplab/dprnn/dprnn.h"
#include "seplab/models/model_config.h"
#include "seplab/models/param_store.h"

namespace seplab {

// One separation network: a learned waveform codec around an M-block
// dual-path backbone, assembled as one of three designs:
//   simo_only      — M blocks, C-head rectified mask layer on the output.
//   mixed          — K SIMO blocks emit C intermediate features; a shared
//                    (M-K)-block SISO tail maps each feature to a source.
//   siso_iterative — K encoder blocks run once; an (M-K)-block decoder tail
//                    runs per source, biased by the encoded residual of the
//                    sources separated so far.
template <typename S>
class SeparationModel {
 public:
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Wave = std::vector<S>;
  using Var = typename Tape<S>::Var;

  static SeparationModel Build(const ModelConfig& cfg, uint64_t seed) {
    cfg.Validate();
    SeparationModel m;
    m.cfg_ = cfg;
    m.seed_ = seed;
    const int w = cfg.window_samples();
    const int n = cfg.encoder_filters;
    const int d = cfg.block_channels;
    const int h = cfg.hidden_size;
    const int c = cfg.num_sources;
    auto& ps = m.params_;

    auto add_uniform = [&](const std::string& name, int rows, int cols,
                           double bound) {
      int id = ps.Add(name, rows, cols);
      ps.InitUniform(id, seed, bound);
      return id;
    };

    m.encoder_ = add_uniform("encoder.basis", n, w, 1.0 / std::sqrt(w));
    m.decoder_ = add_uniform("decoder.basis", w, n, 1.0 / std::sqrt(n));
    m.bn_in_ = add_uniform("bottleneck_in.w", d, n, 1.0 / std::sqrt(n));

    auto add_lstm = [&](const std::string& prefix) {
      LstmIds ids;
      double bound = 1.0 / std::sqrt(h);
      ids.wx = add_uniform(prefix + ".wx", 4 * h, d, bound);
      ids.wh = add_uniform(prefix + ".wh", 4 * h, h, bound);
      ids.b = add_uniform(prefix + ".b", 4 * h, 1, bound);
      return ids;
    };
    auto add_rnn = [&](const std::string& prefix, bool bidir) {
      RnnIds ids;
      ids.bidir = bidir;
      ids.fwd = add_lstm(prefix + ".fwd");
      if (bidir) ids.bwd = add_lstm(prefix + ".bwd");
      int proj_in = bidir ? 2 * h : h;
      double bound = 1.0 / std::sqrt(proj_in);
      ids.proj_w = add_uniform(prefix + ".proj.w", d, proj_in, bound);
      ids.proj_b = add_uniform(prefix + ".proj.b", d, 1, bound);
      ids.gamma = ps.Add(prefix + ".norm.gamma", d, 1);
      ps.SetConstant(ids.gamma, S(1));
      ids.beta = ps.Add(prefix + ".norm.beta", d, 1);
      return ids;
    };
    for (int i = 0; i < cfg.num_blocks; ++i) {
      std::string prefix = "block" + std::to_string(i);
      BlockIds b;
      b.intra = add_rnn(prefix + ".intra", true);
      b.inter = add_rnn(prefix + ".inter", cfg.bidir_inter);
      m.blocks_.push_back(b);
    }
    SEPLAB_CHECK_MSG(static_cast<int>(m.blocks_.size()) == cfg.num_blocks,
                     "backbone block count must equal M");

    const int n_fused =
        static_cast<int>(cfg.EffectiveFusionInputs().size());
    switch (cfg.design) {
      case Design::kSimoOnly:
        m.head_w_ = add_uniform("head.w", c * n, d, 1.0 / std::sqrt(d));
        m.head_b_ = add_uniform("head.b", c * n, 1, 1.0 / std::sqrt(d));
        break;
      case Design::kMixed:
        m.head_w_ = add_uniform("head.w", c * n, d, 1.0 / std::sqrt(d));
        m.head_b_ = add_uniform("head.b", c * n, 1, 1.0 / std::sqrt(d));
        m.fuse_w_ = add_uniform("fuse.w", d, n_fused * n,
                                1.0 / std::sqrt(n_fused * n));
        m.out_w_ = add_uniform("out.w", n, d, 1.0 / std::sqrt(d));
        m.out_b_ = add_uniform("out.b", n, 1, 1.0 / std::sqrt(d));
        break;
      case Design::kSisoIterative:
        m.bn_out_ =
            add_uniform("bottleneck_out.w", n, d, 1.0 / std::sqrt(d));
        m.fuse_w_ = add_uniform("fuse.w", d, n_fused * n,
                                1.0 / std::sqrt(n_fused * n));
        m.out_w_ = add_uniform("out.w", n, d, 1.0 / std::sqrt(d));
        m.out_b_ = add_uniform("out.b", n, 1, 1.0 / std::sqrt(d));
        break;
    }
    return m;
  }

  const ModelConfig& config() const { return cfg_; }
  uint64_t seed() const { return seed_; }
  ParamStore<S>& params() { return params_; }
  const ParamStore<S>& params() const { return params_; }

  int64_t CountParameters() const { return params_.TotalParams(); }

  struct ForwardTrace {
    std::vector<Mat> bias_features;         // iterative, per iteration
    std::vector<Wave> residual_waves;       // iterative, iterations j >= 2
    std::vector<Mat> intermediate_features; // mixed F_i / iterative H
    std::vector<Mat> masks;                 // simo_only / mask_variant
  };

  struct ForwardOptions {
    // Iterative only: substitute these waveforms for the model's estimates
    // (both as returned outputs and in the residual). Test hook.
    const std::vector<Wave>* forced_outputs = nullptr;
    // Iterative only: separate this many sources instead of config C.
    int num_sources_override = 0;
  };

  struct GraphOutputs {
    std::vector<Var> waves;
    ForwardTrace trace;
  };

  // Builds the forward graph on the caller's tape. `bound` maps parameter
  // ordinals to tape vars; pass BindParams(tape) (trainable) or bind
  // constants for inference.
  GraphOutputs BuildForward(Tape<S>* tape, const std::vector<Var>& bound,
                            const Wave& mixture,
                            const ForwardOptions& opts = {}) const {
    Mat wmat(mixture.size(), 1);
    for (size_t i = 0; i < mixture.size(); ++i) wmat(i, 0) = mixture[i];
    Var mix = tape->Constant(std::move(wmat));
    switch (cfg_.design) {
      case Design::kSimoOnly:
        return BuildSimo(tape, bound, mix);
      case Design::kMixed:
        return BuildMixed(tape, bound, mix, nullptr);
      case Design::kSisoIterative:
        return BuildIterative(tape, bound, mix, opts);
    }
    throw InvariantViolation("unknown design");
  }

  std::vector<Var> BindParams(Tape<S>* tape) const {
    std::vector<Var> bound(params_.size());
    for (int i = 0; i < params_.size(); ++i)
      bound[i] = tape->Input(params_.at(i).value, true);
    return bound;
  }

  std::vector<Var> BindParamsConstant(Tape<S>* tape) const {
    std::vector<Var> bound(params_.size());
    for (int i = 0; i < params_.size(); ++i)
      bound[i] = tape->Constant(params_.at(i).value);
    return bound;
  }

  // Accumulates tape gradients back into the parameter store.
  void AccumulateGrads(const Tape<S>& tape, const std::vector<Var>& bound) {
    for (int i = 0; i < params_.size(); ++i)
      params_.at(i).grad += tape.grad(bound[i]);
  }

  // Value-level forward pass: C waveforms, each of the mixture's length.
  std::vector<Wave> Forward(const Wave& mixture,
                            const ForwardOptions& opts = {},
                            ForwardTrace* trace = nullptr) const {
    Tape<S> tape;
    auto bound = BindParamsConstant(&tape);
    GraphOutputs out = BuildForward(&tape, bound, mixture, opts);
    std::vector<Wave> waves;
    for (Var v : out.waves) waves.push_back(ToWave(tape.value(v)));
    if (trace) *trace = std::move(out.trace);
    return waves;
  }

  std::vector<Wave> ForwardSimoOnly(const Wave& y) const {
    SEPLAB_CHECK(cfg_.design == Design::kSimoOnly);
    return Forward(y);
  }

  std::vector<Wave> ForwardMixed(const Wave& y) const {
    SEPLAB_CHECK(cfg_.design == Design::kMixed);
    return Forward(y);
  }

  std::vector<Wave> ForwardSisoIterative(const Wave& y, int num_sources = 0,
                                         ForwardTrace* trace = nullptr) const {
    SEPLAB_CHECK(cfg_.design == Design::kSisoIterative);
    ForwardOptions opts;
    opts.num_sources_override = num_sources;
    return Forward(y, opts, trace);
  }

  // Test hook for the shared-SISO equivariance property: run the mixed tail
  // on caller-supplied intermediate features.
  std::vector<Wave> ForwardMixedFromFeatures(
      const Wave& y, const std::vector<Mat>& features) const {
    SEPLAB_CHECK(cfg_.design == Design::kMixed);
    Tape<S> tape;
    auto bound = BindParamsConstant(&tape);
    Mat wmat(y.size(), 1);
    for (size_t i = 0; i < y.size(); ++i) wmat(i, 0) = y[i];
    Var mix = tape.Constant(std::move(wmat));
    GraphOutputs out = BuildMixed(&tape, bound, mix, &features);
    std::vector<Wave> waves;
    for (Var v : out.waves) waves.push_back(ToWave(tape.value(v)));
    return waves;
  }

  int SimoBlockCount() const {
    return cfg_.design == Design::kSimoOnly ? cfg_.num_blocks : cfg_.split;
  }
  int SisoBlockCount() const { return cfg_.num_blocks - SimoBlockCount(); }

 private:
  struct LstmIds {
    int wx = -1, wh = -1, b = -1;
  };
  struct RnnIds {
    LstmIds fwd, bwd;
    int proj_w = -1, proj_b = -1, gamma = -1, beta = -1;
    bool bidir = true;
  };
  struct BlockIds {
    RnnIds intra, inter;
  };

  static Wave ToWave(const Mat& m) {
    Wave w(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) w[i] = m(i, 0);
    return w;
  }

  typename DprnnBlockVars<S>::Rnn BindRnn(const std::vector<Var>& bound,
                                          const RnnIds& ids) const {
    typename DprnnBlockVars<S>::Rnn r;
    r.bidirectional = ids.bidir;
    r.fwd_wx = bound[ids.fwd.wx];
    r.fwd_wh = bound[ids.fwd.wh];
    r.fwd_b = bound[ids.fwd.b];
    if (ids.bidir) {
      r.bwd_wx = bound[ids.bwd.wx];
      r.bwd_wh = bound[ids.bwd.wh];
      r.bwd_b = bound[ids.bwd.b];
    }
    r.proj_w = bound[ids.proj_w];
    r.proj_b = bound[ids.proj_b];
    r.gamma = bound[ids.gamma];
    r.beta = bound[ids.beta];
    return r;
  }

  std::vector<DprnnBlockVars<S>> BindBlocks(const std::vector<Var>& bound,
                                            int first, int count) const {
    std::vector<DprnnBlockVars<S>> out;
    for (int i = first; i < first + count; ++i) {
      DprnnBlockVars<S> b;
      b.intra = BindRnn(bound, blocks_[i].intra);
      b.inter = BindRnn(bound, blocks_[i].inter);
      out.push_back(b);
    }
    return out;
  }

  Var EncodeMix(Tape<S>* tape, const std::vector<Var>& bound,
                Var wave) const {
    return Encode(tape, wave, bound[encoder_], cfg_.codec(),
                  cfg_.encoder_relu);
  }

  Var DecodeLatent(Tape<S>* tape, const std::vector<Var>& bound, Var latent,
                   int t_out) const {
    return Decode(tape, latent, bound[decoder_], cfg_.codec(), t_out);
  }

  Var FuseFeatures(Tape<S>* tape, const std::vector<Var>& bound,
                   const std::vector<Var>& parts) const {
    Var cat = tape->ConcatRows(parts);
    return tape->MatMul(bound[fuse_w_], cat);
  }

  GraphOutputs BuildSimo(Tape<S>* tape, const std::vector<Var>& bound,
                         Var mix) const {
    const int t = static_cast<int>(tape->value(mix).rows());
    const int n = cfg_.encoder_filters;
    GraphOutputs out;
    Var enc = EncodeMix(tape, bound, mix);
    Var z = tape->MatMul(bound[bn_in_], enc);
    Var y = RunStack(tape, z, BindBlocks(bound, 0, cfg_.num_blocks),
                     cfg_.chunk_len);
    Var masks = tape->Relu(
        tape->AddColVec(tape->MatMul(bound[head_w_], y), bound[head_b_]));
    for (int i = 0; i < cfg_.num_sources; ++i) {
      Var m_i = tape->SliceRows(masks, i * n, n);
      out.trace.masks.push_back(tape->value(m_i));
      Var masked = tape->CMul(m_i, enc);
      out.waves.push_back(DecodeLatent(tape, bound, masked, t));
    }
    return out;
  }

  GraphOutputs BuildMixed(Tape<S>* tape, const std::vector<Var>& bound,
                          Var mix,
                          const std::vector<Mat>* injected_features) const {
    const int t = static_cast<int>(tape->value(mix).rows());
    const int n = cfg_.encoder_filters;
    GraphOutputs out;
    Var enc = EncodeMix(tape, bound, mix);

    std::vector<Var> features;
    if (injected_features) {
      SEPLAB_CHECK(static_cast<int>(injected_features->size()) ==
                   cfg_.num_sources);
      for (const Mat& f : *injected_features)
        features.push_back(tape->Constant(f));
    } else {
      Var z = tape->MatMul(bound[bn_in_], enc);
      Var y = RunStack(tape, z, BindBlocks(bound, 0, cfg_.split),
                       cfg_.chunk_len);
      Var heads =
          tape->AddColVec(tape->MatMul(bound[head_w_], y), bound[head_b_]);
      if (cfg_.mask_variant) heads = tape->Relu(heads);
      for (int i = 0; i < cfg_.num_sources; ++i) {
        Var f_i = tape->SliceRows(heads, i * n, n);
        if (cfg_.mask_variant) {
          out.trace.masks.push_back(tape->value(f_i));
          f_i = tape->CMul(f_i, enc);
        }
        features.push_back(f_i);
      }
    }

    auto siso_blocks =
        BindBlocks(bound, cfg_.split, cfg_.num_blocks - cfg_.split);
    for (int i = 0; i < cfg_.num_sources; ++i) {
      out.trace.intermediate_features.push_back(tape->value(features[i]));
      std::vector<Var> parts;
      for (FusionInput f : cfg_.EffectiveFusionInputs()) {
        if (f == FusionInput::kIntermediate) parts.push_back(features[i]);
        if (f == FusionInput::kMixtureEncoding) parts.push_back(enc);
      }
      Var fused = FuseFeatures(tape, bound, parts);
      Var s_i = RunStack(tape, fused, siso_blocks, cfg_.chunk_len);
      Var lat =
          tape->AddColVec(tape->MatMul(bound[out_w_], s_i), bound[out_b_]);
      if (cfg_.mask_variant) lat = tape->Add(lat, features[i]);
      out.waves.push_back(DecodeLatent(tape, bound, lat, t));
    }
    return out;
  }

  GraphOutputs BuildIterative(Tape<S>* tape, const std::vector<Var>& bound,
                              Var mix, const ForwardOptions& opts) const {
    const int t = static_cast<int>(tape->value(mix).rows());
    const int n = cfg_.encoder_filters;
    const int c = opts.num_sources_override > 0 ? opts.num_sources_override
                                                : cfg_.num_sources;
    if (c < 1) throw InvalidInput("siso_iterative: need at least one source");
    if (opts.forced_outputs)
      SEPLAB_CHECK(static_cast<int>(opts.forced_outputs->size()) >=
                   static_cast<int>(c));
    GraphOutputs out;
    Var enc = EncodeMix(tape, bound, mix);
    const int frames = static_cast<int>(tape->value(enc).cols());
    Var z = tape->MatMul(bound[bn_in_], enc);
    Var h64 =
        RunStack(tape, z, BindBlocks(bound, 0, cfg_.split), cfg_.chunk_len);
    Var latent_rep = tape->MatMul(bound[bn_out_], h64);
    out.trace.intermediate_features.push_back(tape->value(latent_rep));

    auto dec_blocks =
        BindBlocks(bound, cfg_.split, cfg_.num_blocks - cfg_.split);
    Var sum_wave;
    for (int j = 0; j < c; ++j) {
      Var bias;
      if (j == 0) {
        bias = tape->Constant(Mat::Zero(n, frames));
      } else {
        Var residual = tape->Sub(mix, sum_wave);
        out.trace.residual_waves.push_back(ToWave(tape->value(residual)));
        bias = EncodeMix(tape, bound, residual);
      }
      out.trace.bias_features.push_back(tape->value(bias));
      std::vector<Var> parts;
      for (FusionInput f : cfg_.EffectiveFusionInputs()) {
        if (f == FusionInput::kIntermediate) parts.push_back(latent_rep);
        if (f == FusionInput::kMixtureEncoding) parts.push_back(enc);
        if (f == FusionInput::kBiasEncoding) parts.push_back(bias);
      }
      Var fused = FuseFeatures(tape, bound, parts);
      Var s_j = RunStack(tape, fused, dec_blocks, cfg_.chunk_len);
      Var lat =
          tape->AddColVec(tape->MatMul(bound[out_w_], s_j), bound[out_b_]);
      Var wave_j = DecodeLatent(tape, bound, lat, t);
      if (opts.forced_outputs) {
        Mat forced(t, 1);
        const Wave& fw = (*opts.forced_outputs)[j];
        SEPLAB_CHECK(static_cast<int>(fw.size()) == t);
        for (int i = 0; i < t; ++i) forced(i, 0) = fw[i];
        wave_j = tape->Constant(std::move(forced));
      }
      out.waves.push_back(wave_j);
      sum_wave = (j == 0) ? wave_j : tape->Add(sum_wave, wave_j);
    }
    return out;
  }

  ModelConfig cfg_;
  uint64_t seed_ = 0;
  ParamStore<S> params_;

  int encoder_ = -1, decoder_ = -1, bn_in_ = -1, bn_out_ = -1;
  std::vector<BlockIds> blocks_;
  int head_w_ = -1, head_b_ = -1, fuse_w_ = -1, out_w_ = -1, out_b_ = -1;
};

}  // namespace seplab

#endif  // SEPLAB_MODELS_SEPARATION_MODEL_H_
