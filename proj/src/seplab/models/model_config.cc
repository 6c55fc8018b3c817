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

#include "seplab/models/model_config.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "seplab/common/error.h"

namespace seplab {

using nlohmann::json;

std::string DesignName(Design d) {
  switch (d) {
    case Design::kSimoOnly: return "simo_only";
    case Design::kMixed: return "mixed";
    case Design::kSisoIterative: return "siso_iterative";
  }
  throw InvariantViolation("unknown design");
}

Design DesignFromName(const std::string& name) {
  if (name == "simo_only") return Design::kSimoOnly;
  if (name == "mixed") return Design::kMixed;
  if (name == "siso_iterative") return Design::kSisoIterative;
  throw ConfigError("model.design: unknown design '" + name +
                    "' (expected simo_only|mixed|siso_iterative)");
}

std::string FusionInputName(FusionInput f) {
  switch (f) {
    case FusionInput::kIntermediate: return "intermediate";
    case FusionInput::kMixtureEncoding: return "mixture_encoding";
    case FusionInput::kBiasEncoding: return "bias_encoding";
  }
  throw InvariantViolation("unknown fusion input");
}

FusionInput FusionInputFromName(const std::string& name) {
  if (name == "intermediate") return FusionInput::kIntermediate;
  if (name == "mixture_encoding") return FusionInput::kMixtureEncoding;
  if (name == "bias_encoding") return FusionInput::kBiasEncoding;
  throw ConfigError("model.fusion_inputs: unknown input '" + name + "'");
}

int ModelConfig::window_samples() const {
  double w = window_ms * sample_rate / 1000.0;
  double rounded = std::round(w);
  if (std::abs(w - rounded) > 1e-9 || rounded < 2)
    throw ConfigError(
        "model.window_ms: window must be a whole number of samples >= 2");
  return static_cast<int>(rounded);
}

int ModelConfig::hop() const {
  int w = window_samples();
  return hop_samples > 0 ? hop_samples : w / 2;
}

CodecSpec ModelConfig::codec() const {
  CodecSpec spec;
  spec.window = window_samples();
  spec.hop = hop();
  spec.filters = encoder_filters;
  return spec;
}

std::vector<FusionInput> ModelConfig::EffectiveFusionInputs() const {
  std::vector<FusionInput> def;
  if (fusion_inputs.empty()) {
    def = {FusionInput::kIntermediate, FusionInput::kMixtureEncoding};
    if (design == Design::kSisoIterative)
      def.push_back(FusionInput::kBiasEncoding);
  } else {
    def = fusion_inputs;
  }
  // canonical order, duplicates removed
  std::vector<FusionInput> out;
  for (FusionInput f : {FusionInput::kIntermediate,
                        FusionInput::kMixtureEncoding,
                        FusionInput::kBiasEncoding}) {
    if (std::find(def.begin(), def.end(), f) != def.end()) out.push_back(f);
  }
  return out;
}

void ModelConfig::Validate() const {
  if (num_blocks < 1) throw ConfigError("model.num_blocks: M must be >= 1");
  if (num_sources < 1)
    throw ConfigError("model.num_sources: C must be >= 1");
  switch (design) {
    case Design::kSimoOnly:
      if (split != num_blocks)
        throw ConfigError(
            "model.split: simo_only requires K == M (all blocks in the SIMO "
            "module), got K=" + std::to_string(split) +
            " M=" + std::to_string(num_blocks));
      break;
    case Design::kMixed:
      if (split < 0 || split > num_blocks - 1)
        throw ConfigError(
            "model.split: mixed requires 0 <= K <= M-1, got K=" +
            std::to_string(split) + " M=" + std::to_string(num_blocks));
      break;
    case Design::kSisoIterative:
      if (split < 1 || split > num_blocks - 1)
        throw ConfigError(
            "model.split: siso_iterative requires 1 <= K <= M-1, got K=" +
            std::to_string(split) + " M=" + std::to_string(num_blocks));
      break;
  }
  int w = window_samples();
  if (w % 2 != 0)
    throw ConfigError("model.window_ms: window must be an even sample count");
  if (hop() < 1 || w % hop() != 0)
    throw ConfigError("model.hop_samples: hop must divide the window");
  if (encoder_filters < 1)
    throw ConfigError("model.encoder_filters: must be >= 1");
  if (block_channels < 1)
    throw ConfigError("model.block_channels: must be >= 1");
  if (hidden_size < 1) throw ConfigError("model.hidden_size: must be >= 1");
  if (chunk_len < 2 || chunk_len % 2 != 0)
    throw ConfigError("model.chunk_len: must be an even integer >= 2");
  if (mask_variant && design != Design::kMixed)
    throw ConfigError("model.mask_variant: only valid for the mixed design");
  for (FusionInput f : fusion_inputs) {
    if (f == FusionInput::kBiasEncoding && design != Design::kSisoIterative)
      throw ConfigError(
          "model.fusion_inputs: bias_encoding is only valid for "
          "siso_iterative");
  }
  if (design != Design::kSimoOnly && EffectiveFusionInputs().empty())
    throw ConfigError("model.fusion_inputs: must not be empty");
}

std::string ModelConfig::ToJson() const {
  json j;
  j["design"] = DesignName(design);
  j["num_blocks"] = num_blocks;
  j["split"] = split;
  j["num_sources"] = num_sources;
  j["sample_rate"] = sample_rate;
  j["window_ms"] = window_ms;
  j["hop_samples"] = hop_samples;
  j["encoder_filters"] = encoder_filters;
  j["encoder_relu"] = encoder_relu;
  j["block_channels"] = block_channels;
  j["hidden_size"] = hidden_size;
  j["chunk_len"] = chunk_len;
  j["bidir_inter"] = bidir_inter;
  j["mask_variant"] = mask_variant;
  json fins = json::array();
  for (FusionInput f : fusion_inputs) fins.push_back(FusionInputName(f));
  j["fusion_inputs"] = fins;
  return j.dump();
}

ModelConfig ModelConfig::FromJson(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model config: invalid JSON: ") + e.what());
  }
  ModelConfig c;
  try {
    c.design = DesignFromName(j.at("design").get<std::string>());
    c.num_blocks = j.at("num_blocks").get<int>();
    c.split = j.at("split").get<int>();
    c.num_sources = j.at("num_sources").get<int>();
    c.sample_rate = j.at("sample_rate").get<int>();
    c.window_ms = j.at("window_ms").get<double>();
    c.hop_samples = j.at("hop_samples").get<int>();
    c.encoder_filters = j.at("encoder_filters").get<int>();
    c.encoder_relu = j.at("encoder_relu").get<bool>();
    c.block_channels = j.at("block_channels").get<int>();
    c.hidden_size = j.at("hidden_size").get<int>();
    c.chunk_len = j.at("chunk_len").get<int>();
    c.bidir_inter = j.at("bidir_inter").get<bool>();
    c.mask_variant = j.at("mask_variant").get<bool>();
    for (const auto& f : j.at("fusion_inputs"))
      c.fusion_inputs.push_back(FusionInputFromName(f.get<std::string>()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model config: missing or bad field: ") +
                      e.what());
  }
  return c;
}

}  // namespace seplab
