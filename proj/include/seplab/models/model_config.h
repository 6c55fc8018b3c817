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

#ifndef SEPLAB_MODELS_MODEL_CONFIG_H_
#define SEPLAB_MODELS_MODEL_CONFIG_H_

#include <string>
#include <vector>

#include "seplab/codec/codec.h"

namespace seplab {

enum class Design { kSimoOnly, kMixed, kSisoIterative };

enum class FusionInput { kIntermediate, kMixtureEncoding, kBiasEncoding };

std::string DesignName(Design d);
Design DesignFromName(const std::string& name);
std::string FusionInputName(FusionInput f);
FusionInput FusionInputFromName(const std::string& name);

// Architecture selector for one separation model. `split` is the design's
// block split K: SIMO blocks for the mixed design, encoder blocks for the
// iterative design, and equal to num_blocks for the SIMO-only design.
struct ModelConfig {
  Design design = Design::kSimoOnly;
  int num_blocks = 6;  // M
  int split = 6;       // K
  int num_sources = 2; // C

  int sample_rate = 16000;
  double window_ms = 2.0;
  int hop_samples = 0;  // 0 = window/2
  int encoder_filters = 128;  // N
  bool encoder_relu = false;

  int block_channels = 64;  // D, LSTM input size
  int hidden_size = 128;    // LSTM hidden size per direction
  int chunk_len = 100;      // K_c frames
  bool bidir_inter = true;

  bool mask_variant = false;  // mixed design: SIMO heads emit masks
  std::vector<FusionInput> fusion_inputs;  // empty = design default

  int window_samples() const;
  int hop() const;
  CodecSpec codec() const;
  // Fusion inputs actually in effect, in canonical order.
  std::vector<FusionInput> EffectiveFusionInputs() const;

  // Throws ConfigError naming the violated constraint.
  void Validate() const;

  std::string ToJson() const;
  static ModelConfig FromJson(const std::string& json_text);
};

}  // namespace seplab

#endif  // SEPLAB_MODELS_MODEL_CONFIG_H_
