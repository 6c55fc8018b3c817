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

#include "seplab/scene/dataset.h"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "seplab/common/error.h"
#include "seplab/common/rng.h"
#include "seplab/scene/synth.h"
#include "seplab/scene/wav_io.h"

namespace seplab {

namespace fs = std::filesystem;
using nlohmann::json;

void DatasetConfig::Validate() const {
  if (out_dir.empty()) throw ConfigError("dataset.out_dir: required");
  if (train_count < 0 || valid_count < 0 || test_count < 0)
    throw ConfigError("dataset counts must be non-negative");
  if (train_count + valid_count + test_count < 1)
    throw ConfigError("dataset: need at least one utterance");
  if (utterance_seconds <= 0)
    throw ConfigError("dataset.utterance_seconds: must be positive");
  if (sample_rate < 1000)
    throw ConfigError("dataset.sample_rate: implausible value");
  if (source_mode != "synth" && source_mode != "wav_dir")
    throw ConfigError("dataset.source_mode: expected synth|wav_dir");
  if (source_mode == "wav_dir" && wav_dir.empty())
    throw ConfigError("dataset.wav_dir: required for source_mode=wav_dir");
  if (noise_mode != "synth" && noise_mode != "wav_dir")
    throw ConfigError("dataset.noise_mode: expected synth|wav_dir");
  if (noise_mode == "wav_dir" && noise_dir.empty())
    throw ConfigError("dataset.noise_dir: required for noise_mode=wav_dir");
  if (jobs < 1) throw ConfigError("dataset.jobs: must be >= 1");
}

int DatasetConfig::utterance_samples() const {
  return static_cast<int>(std::lround(utterance_seconds * sample_rate));
}

std::string ManifestEntry::ToJsonLine() const {
  json j;
  j["id"] = id;
  j["seed"] = seed;
  j["mixture_path"] = mixture_path;
  j["target_paths"] = target_paths;
  j["noise_path"] = noise_path;
  j["overlap"] = overlap;
  j["rel_snr_db"] = rel_snr_db;
  j["noise_snr_db"] = noise_snr_db;
  j["room"] = {{"l", room_l}, {"w", room_w}, {"h", room_h},
               {"t60", room_t60}};
  j["split"] = split;
  return j.dump();
}

ManifestEntry ManifestEntry::FromJsonLine(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest: bad JSON line: ") + e.what());
  }
  ManifestEntry m;
  try {
    m.id = j.at("id").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.mixture_path = j.at("mixture_path").get<std::string>();
    m.target_paths = j.at("target_paths").get<std::vector<std::string>>();
    m.noise_path = j.at("noise_path").get<std::string>();
    m.overlap = j.at("overlap").get<double>();
    m.rel_snr_db = j.at("rel_snr_db").get<double>();
    m.noise_snr_db = j.at("noise_snr_db").get<double>();
    m.room_l = j.at("room").at("l").get<double>();
    m.room_w = j.at("room").at("w").get<double>();
    m.room_h = j.at("room").at("h").get<double>();
    m.room_t60 = j.at("room").at("t60").get<double>();
    m.split = j.at("split").get<std::string>();
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest: missing field: ") + e.what());
  }
  return m;
}

std::vector<ManifestEntry> ReadManifest(const std::string& path) {
  return ReadManifest(path, "");
}

std::vector<ManifestEntry> ReadManifest(const std::string& path,
                                        const std::string& split) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest: " + path);
  std::vector<ManifestEntry> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ManifestEntry m = ManifestEntry::FromJsonLine(line);
    if (split.empty() || m.split == split) out.push_back(std::move(m));
  }
  return out;
}

namespace {

struct Sources {
  std::unique_ptr<SignalSource> speech;
  std::unique_ptr<SignalSource> noise;
};

Sources MakeSources(const DatasetConfig& cfg) {
  Sources s;
  s.speech = cfg.source_mode == "synth" ? MakeSpeechlikeSource()
                                        : MakeWavDirSource(cfg.wav_dir);
  s.noise = cfg.noise_mode == "synth" ? MakeNoiseSource()
                                      : MakeWavDirSource(cfg.noise_dir);
  return s;
}

MixtureExample SimulateWithSources(uint64_t seed, const DatasetConfig& cfg,
                                   const Sources& sources,
                                   MixDiagnostics* diag) {
  SceneParams params;
  params.utterance_len = cfg.utterance_samples();
  params.sample_rate = cfg.sample_rate;
  SceneSpec scene = SampleScene(MixSeed(seed, 1), params);
  int span = SpeakerSpanSamples(scene.overlap_ratio_target,
                                params.utterance_len);
  std::vector<double> s1 =
      sources.speech->Draw(MixSeed(seed, 2), span, cfg.sample_rate);
  std::vector<double> s2 =
      sources.speech->Draw(MixSeed(seed, 3), span, cfg.sample_rate);
  std::vector<double> n = sources.noise->Draw(
      MixSeed(seed, 4), params.utterance_len, cfg.sample_rate);
  return MixScene(scene, s1, s2, n, diag);
}

}  // namespace

MixtureExample SimulateUtterance(uint64_t seed, const DatasetConfig& cfg,
                                 MixDiagnostics* diag) {
  Sources sources = MakeSources(cfg);
  return SimulateWithSources(seed, cfg, sources, diag);
}

std::string GenerateDataset(const DatasetConfig& cfg) {
  cfg.Validate();
  std::error_code ec;
  fs::create_directories(fs::path(cfg.out_dir) / "audio", ec);
  if (ec)
    throw IoError("cannot create output directory " + cfg.out_dir + ": " +
                  ec.message());

  struct Task {
    std::string split;
    int index = 0;
    uint64_t stream = 0;
  };
  std::vector<Task> tasks;
  uint64_t stream = 0;
  for (const auto& [split, count] :
       {std::pair<std::string, int>{"train", cfg.train_count},
        {"valid", cfg.valid_count},
        {"test", cfg.test_count}}) {
    for (int i = 0; i < count; ++i) tasks.push_back({split, i, stream++});
  }

  Sources sources = MakeSources(cfg);
  std::vector<ManifestEntry> entries(tasks.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    while (!failed.load()) {
      size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      const Task& task = tasks[k];
      try {
        uint64_t utt_seed = MixSeed(cfg.seed, task.stream);
        MixtureExample ex;
        uint64_t used_seed = 0;
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
          used_seed = MixSeed(utt_seed, static_cast<uint64_t>(attempt));
          try {
            ex = SimulateWithSources(used_seed, cfg, sources, nullptr);
            if (std::abs(ex.measured_overlap -
                         ex.scene.overlap_ratio_target) > 0.02)
              continue;  // resample; pathological source activity
            ok = true;
          } catch (const InfeasibleScene&) {
            // resample with the next derived seed
          }
        }
        if (!ok)
          throw InvalidInput("dataset: no feasible scene after 100 attempts "
                             "for utterance " + task.split + "_" +
                             std::to_string(task.index));

        std::string id = task.split + "_" + std::to_string(task.index);
        std::string base = "audio/" + id;
        WriteWavFloat32((fs::path(cfg.out_dir) / (base + "_mix.wav")).string(),
                        ex.mixture, cfg.sample_rate);
        WriteWavFloat32((fs::path(cfg.out_dir) / (base + "_s1.wav")).string(),
                        ex.targets[0], cfg.sample_rate);
        WriteWavFloat32((fs::path(cfg.out_dir) / (base + "_s2.wav")).string(),
                        ex.targets[1], cfg.sample_rate);
        WriteWavFloat32(
            (fs::path(cfg.out_dir) / (base + "_noise.wav")).string(),
            ex.noise_image, cfg.sample_rate);

        ManifestEntry m;
        m.id = id;
        m.seed = used_seed;
        m.mixture_path = base + "_mix.wav";
        m.target_paths = {base + "_s1.wav", base + "_s2.wav"};
        m.noise_path = base + "_noise.wav";
        m.overlap = ex.measured_overlap;
        m.rel_snr_db = ex.scene.rel_snr_db;
        m.noise_snr_db = ex.scene.noise_snr_db;
        m.room_l = ex.scene.room.length;
        m.room_w = ex.scene.room.width;
        m.room_h = ex.scene.room.height;
        m.room_t60 = ex.scene.room.t60;
        m.split = task.split;
        entries[k] = std::move(m);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure = e.what();
      }
    }
  };

  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw InvalidInput("dataset generation failed: " + failure);

  std::string manifest_path =
      (fs::path(cfg.out_dir) / "manifest.jsonl").string();
  std::ofstream os(manifest_path, std::ios::trunc);
  if (!os) throw IoError("cannot write manifest: " + manifest_path);
  for (const auto& m : entries) os << m.ToJsonLine() << "\n";
  if (!os) throw IoError("short write: " + manifest_path);
  return manifest_path;
}

}  // namespace seplab
