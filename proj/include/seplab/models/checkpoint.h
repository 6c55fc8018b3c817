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

#ifndef SEPLAB_MODELS_CHECKPOINT_H_
#define SEPLAB_MODELS_CHECKPOINT_H_

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "seplab/common/error.h"
#include "seplab/models/separation_model.h"

namespace seplab {

// Single-file checkpoint: config echo plus named parameter arrays, stored
// as raw little-endian scalars so a save/load/save cycle is bit-exact.
namespace checkpoint_internal {

constexpr char kMagic[8] = {'S', 'E', 'P', 'C', 'K', 'P', 'T', '1'};

inline void WriteU32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
inline void WriteU64(std::ostream& os, uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
inline uint32_t ReadU32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
inline uint64_t ReadU64(std::istream& is) {
  uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace checkpoint_internal

template <typename S>
void SaveCheckpoint(const SeparationModel<S>& model,
                    const std::string& path) {
  namespace ci = checkpoint_internal;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);
  os.write(ci::kMagic, sizeof(ci::kMagic));
  ci::WriteU32(os, 1);                      // version
  ci::WriteU32(os, sizeof(S));              // scalar width
  ci::WriteU64(os, model.seed());
  std::string cfg = model.config().ToJson();
  ci::WriteU64(os, cfg.size());
  os.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
  const auto& ps = model.params();
  ci::WriteU64(os, static_cast<uint64_t>(ps.size()));
  for (int i = 0; i < ps.size(); ++i) {
    const auto& t = ps.at(i);
    ci::WriteU32(os, static_cast<uint32_t>(t.name.size()));
    os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    ci::WriteU64(os, static_cast<uint64_t>(t.value.rows()));
    ci::WriteU64(os, static_cast<uint64_t>(t.value.cols()));
    os.write(reinterpret_cast<const char*>(t.value.data()),
             static_cast<std::streamsize>(t.value.size() * sizeof(S)));
  }
  if (!os) throw IoError("short write while saving checkpoint: " + path);
}

template <typename S>
SeparationModel<S> LoadCheckpoint(const std::string& path) {
  namespace ci = checkpoint_internal;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, ci::kMagic, sizeof(magic)) != 0)
    throw IoError("not a seplab checkpoint: " + path);
  uint32_t version = ci::ReadU32(is);
  if (version != 1)
    throw IoError("unsupported checkpoint version " +
                  std::to_string(version));
  uint32_t scalar = ci::ReadU32(is);
  if (scalar != sizeof(S))
    throw IoError("checkpoint scalar width " + std::to_string(scalar) +
                  " does not match build (" + std::to_string(sizeof(S)) +
                  ")");
  uint64_t seed = ci::ReadU64(is);
  uint64_t cfg_len = ci::ReadU64(is);
  std::string cfg_text(cfg_len, '\0');
  is.read(cfg_text.data(), static_cast<std::streamsize>(cfg_len));
  ModelConfig cfg = ModelConfig::FromJson(cfg_text);
  SeparationModel<S> model = SeparationModel<S>::Build(cfg, seed);
  uint64_t count = ci::ReadU64(is);
  if (count != static_cast<uint64_t>(model.params().size()))
    throw IoError("checkpoint tensor count mismatch");
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t name_len = ci::ReadU32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    uint64_t rows = ci::ReadU64(is);
    uint64_t cols = ci::ReadU64(is);
    auto& t = model.params().by_name(name);
    if (static_cast<uint64_t>(t.value.rows()) != rows ||
        static_cast<uint64_t>(t.value.cols()) != cols)
      throw IoError("checkpoint tensor shape mismatch for " + name);
    is.read(reinterpret_cast<char*>(t.value.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(S)));
  }
  if (!is) throw IoError("truncated checkpoint: " + path);
  return model;
}

}  // namespace seplab

#endif  // SEPLAB_MODELS_CHECKPOINT_H_
