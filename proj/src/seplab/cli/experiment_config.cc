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

#include "seplab/cli/experiment_config.h"

#include <set>

#include "json.hpp"
#include "seplab/common/error.h"

namespace seplab {

using nlohmann::json;

namespace {

void RejectUnknownKeys(const json& j, const std::set<std::string>& known,
                       const std::string& prefix) {
  if (!j.is_object())
    throw ConfigError(prefix.empty() ? "config root must be an object"
                                     : prefix + ": must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (known.find(it.key()) == known.end())
      throw ConfigError("unknown config key: " +
                        (prefix.empty() ? it.key() : prefix + "." + it.key()));
  }
}

template <typename T>
void Get(const json& j, const std::string& key, const std::string& prefix,
         T* out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value type for " +
                      (prefix.empty() ? key : prefix + "." + key));
  }
}

void ParseDataset(const json& j, DatasetConfig* d) {
  RejectUnknownKeys(j,
                    {"out_dir", "train", "valid", "test", "utterance_seconds",
                     "sample_rate", "source", "wav_dir", "noise", "noise_dir",
                     "jobs"},
                    "dataset");
  Get(j, "out_dir", "dataset", &d->out_dir);
  Get(j, "train", "dataset", &d->train_count);
  Get(j, "valid", "dataset", &d->valid_count);
  Get(j, "test", "dataset", &d->test_count);
  Get(j, "utterance_seconds", "dataset", &d->utterance_seconds);
  Get(j, "sample_rate", "dataset", &d->sample_rate);
  Get(j, "source", "dataset", &d->source_mode);
  Get(j, "wav_dir", "dataset", &d->wav_dir);
  Get(j, "noise", "dataset", &d->noise_mode);
  Get(j, "noise_dir", "dataset", &d->noise_dir);
  Get(j, "jobs", "dataset", &d->jobs);
}

void ParseModel(const json& j, ModelConfig* m) {
  RejectUnknownKeys(
      j,
      {"design", "num_blocks", "split", "num_sources", "sample_rate",
       "window_ms", "hop_samples", "encoder_filters", "encoder_relu",
       "block_channels", "hidden_size", "chunk_len", "bidir_inter",
       "mask_variant", "fusion_inputs"},
      "model");
  if (j.contains("design"))
    m->design = DesignFromName(j.at("design").get<std::string>());
  Get(j, "num_blocks", "model", &m->num_blocks);
  Get(j, "split", "model", &m->split);
  Get(j, "num_sources", "model", &m->num_sources);
  Get(j, "sample_rate", "model", &m->sample_rate);
  Get(j, "window_ms", "model", &m->window_ms);
  Get(j, "hop_samples", "model", &m->hop_samples);
  Get(j, "encoder_filters", "model", &m->encoder_filters);
  Get(j, "encoder_relu", "model", &m->encoder_relu);
  Get(j, "block_channels", "model", &m->block_channels);
  Get(j, "hidden_size", "model", &m->hidden_size);
  Get(j, "chunk_len", "model", &m->chunk_len);
  Get(j, "bidir_inter", "model", &m->bidir_inter);
  Get(j, "mask_variant", "model", &m->mask_variant);
  if (j.contains("fusion_inputs")) {
    m->fusion_inputs.clear();
    for (const auto& f : j.at("fusion_inputs"))
      m->fusion_inputs.push_back(FusionInputFromName(f.get<std::string>()));
  }
}

void ParseTrain(const json& j, TrainConfig* t, std::string* out_dir) {
  RejectUnknownKeys(j,
                    {"lr0", "decay", "decay_every", "clip_norm", "max_epochs",
                     "patience", "a2t_weight", "batch_size", "max_steps",
                     "out_dir"},
                    "train");
  Get(j, "lr0", "train", &t->lr0);
  Get(j, "decay", "train", &t->decay);
  Get(j, "decay_every", "train", &t->decay_every);
  Get(j, "clip_norm", "train", &t->clip_norm);
  Get(j, "max_epochs", "train", &t->max_epochs);
  Get(j, "patience", "train", &t->patience);
  Get(j, "a2t_weight", "train", &t->a2t_weight);
  Get(j, "batch_size", "train", &t->batch_size);
  Get(j, "max_steps", "train", &t->max_steps);
  Get(j, "out_dir", "train", out_dir);
}

void ParseEval(const json& j, EvalSection* e) {
  RejectUnknownKeys(j, {"manifest", "split", "report_dir", "checkpoint"},
                    "eval");
  Get(j, "manifest", "eval", &e->manifest);
  Get(j, "split", "eval", &e->split);
  Get(j, "report_dir", "eval", &e->report_dir);
  Get(j, "checkpoint", "eval", &e->checkpoint);
}

// "a.b.c=value" applied onto the JSON tree; the value is parsed as JSON
// when possible, otherwise taken as a string.
void ApplyOverride(json* root, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects dotted.path=value, got: " + kv);
  std::string path = kv.substr(0, eq);
  std::string value = kv.substr(eq + 1);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // bare string
  }
  json* at = root;
  size_t pos = 0;
  while (true) {
    size_t dot = path.find('.', pos);
    std::string key = path.substr(pos, dot - pos);
    if (key.empty()) throw ConfigError("--set: empty key segment in " + path);
    if (dot == std::string::npos) {
      (*at)[key] = parsed;
      return;
    }
    at = &(*at)[key];
    pos = dot + 1;
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::Parse(
    const std::string& file_text, const std::vector<std::string>& overrides) {
  json j = json::object();
  if (!file_text.empty()) {
    try {
      j = json::parse(file_text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
  }
  for (const auto& kv : overrides) ApplyOverride(&j, kv);

  RejectUnknownKeys(j, {"seed", "dataset", "model", "train", "eval"}, "");
  ExperimentConfig c;
  // default splits fit the default design
  Get(j, "seed", "", &c.seed);
  if (j.contains("dataset")) ParseDataset(j.at("dataset"), &c.dataset);
  if (j.contains("model")) {
    ParseModel(j.at("model"), &c.model);
    if (!j.at("model").contains("split")) {
      // design-appropriate default split
      switch (c.model.design) {
        case Design::kSimoOnly: c.model.split = c.model.num_blocks; break;
        case Design::kMixed: c.model.split = 2; break;
        case Design::kSisoIterative: c.model.split = 1; break;
      }
    }
  }
  if (j.contains("train")) ParseTrain(j.at("train"), &c.train, &c.train_out_dir);
  if (j.contains("eval")) ParseEval(j.at("eval"), &c.eval);
  if (c.dataset.out_dir.empty()) c.dataset.out_dir = "data";
  c.dataset.seed = c.seed;
  c.train.seed = c.seed;
  c.Validate();
  return c;
}

std::string ExperimentConfig::ConfigId() const {
  switch (model.design) {
    case Design::kSimoOnly:
      return "simo_only";
    case Design::kMixed:
      return "mixed_k" + std::to_string(model.split);
    case Design::kSisoIterative:
      return "siso_k" + std::to_string(model.split);
  }
  return "unknown";
}

void ExperimentConfig::Validate() const {
  model.Validate();
  train.Validate();
  if (model.sample_rate != dataset.sample_rate)
    throw ConfigError("model.sample_rate must match dataset.sample_rate");
}

std::string ExperimentConfig::ToJson() const {
  json j;
  j["seed"] = seed;
  j["dataset"] = {{"out_dir", dataset.out_dir},
                  {"train", dataset.train_count},
                  {"valid", dataset.valid_count},
                  {"test", dataset.test_count},
                  {"utterance_seconds", dataset.utterance_seconds},
                  {"sample_rate", dataset.sample_rate},
                  {"source", dataset.source_mode},
                  {"wav_dir", dataset.wav_dir},
                  {"noise", dataset.noise_mode},
                  {"noise_dir", dataset.noise_dir},
                  {"jobs", dataset.jobs}};
  j["model"] = json::parse(model.ToJson());
  j["train"] = {{"lr0", train.lr0},
                {"decay", train.decay},
                {"decay_every", train.decay_every},
                {"clip_norm", train.clip_norm},
                {"max_epochs", train.max_epochs},
                {"patience", train.patience},
                {"a2t_weight", train.a2t_weight},
                {"batch_size", train.batch_size},
                {"max_steps", train.max_steps},
                {"out_dir", train_out_dir}};
  j["eval"] = {{"manifest", eval.manifest},
               {"split", eval.split},
               {"report_dir", eval.report_dir},
               {"checkpoint", eval.checkpoint}};
  return j.dump(2);
}

}  // namespace seplab
