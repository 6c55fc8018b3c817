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

#include "seplab/scene/wav_io.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "seplab/common/error.h"

namespace seplab {

namespace {

void PutU32(std::vector<char>* out, uint32_t v) {
  const char* p = reinterpret_cast<const char*>(&v);
  out->insert(out->end(), p, p + 4);
}

void PutU16(std::vector<char>* out, uint16_t v) {
  const char* p = reinterpret_cast<const char*>(&v);
  out->insert(out->end(), p, p + 2);
}

uint32_t GetU32(const char* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

uint16_t GetU16(const char* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

}  // namespace

void WriteWavFloat32(const std::string& path, const WaveF& wave,
                     int sample_rate) {
  const uint32_t data_bytes = static_cast<uint32_t>(wave.size() * 4);
  std::vector<char> buf;
  buf.reserve(58 + data_bytes);
  buf.insert(buf.end(), {'R', 'I', 'F', 'F'});
  PutU32(&buf, 50 + data_bytes);  // riff payload after this field
  buf.insert(buf.end(), {'W', 'A', 'V', 'E'});
  buf.insert(buf.end(), {'f', 'm', 't', ' '});
  PutU32(&buf, 18);
  PutU16(&buf, 3);  // IEEE float
  PutU16(&buf, 1);  // mono
  PutU32(&buf, static_cast<uint32_t>(sample_rate));
  PutU32(&buf, static_cast<uint32_t>(sample_rate) * 4);
  PutU16(&buf, 4);
  PutU16(&buf, 32);
  PutU16(&buf, 0);  // cbSize
  buf.insert(buf.end(), {'f', 'a', 'c', 't'});
  PutU32(&buf, 4);
  PutU32(&buf, static_cast<uint32_t>(wave.size()));
  buf.insert(buf.end(), {'d', 'a', 't', 'a'});
  PutU32(&buf, data_bytes);
  const char* p = reinterpret_cast<const char*>(wave.data());
  buf.insert(buf.end(), p, p + data_bytes);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw IoError("short write: " + path);
}

WavData ReadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  std::vector<char> buf((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < 44 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw IoError("not a WAV file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  size_t data_at = 0, data_len = 0;
  size_t at = 12;
  while (at + 8 <= buf.size()) {
    uint32_t chunk_len = GetU32(buf.data() + at + 4);
    if (std::memcmp(buf.data() + at, "fmt ", 4) == 0) {
      if (at + 8 + 16 > buf.size()) throw IoError("truncated fmt: " + path);
      format = GetU16(buf.data() + at + 8);
      channels = GetU16(buf.data() + at + 10);
      sample_rate = GetU32(buf.data() + at + 12);
      bits = GetU16(buf.data() + at + 22);
      if (format == 0xFFFE && chunk_len >= 40)  // extensible: subformat tag
        format = GetU16(buf.data() + at + 32);
    } else if (std::memcmp(buf.data() + at, "data", 4) == 0) {
      data_at = at + 8;
      data_len = chunk_len;
    }
    at += 8 + chunk_len + (chunk_len & 1);
  }
  if (data_at == 0 || data_at + data_len > buf.size())
    throw IoError("missing or truncated data chunk: " + path);
  if (channels != 1)
    throw InvalidInput("expected mono WAV, got " +
                       std::to_string(channels) + " channels: " + path);

  WavData out;
  out.sample_rate = static_cast<int>(sample_rate);
  if (format == 3 && bits == 32) {
    size_t n = data_len / 4;
    out.samples.resize(n);
    std::memcpy(out.samples.data(), buf.data() + data_at, n * 4);
  } else if (format == 1 && bits == 16) {
    size_t n = data_len / 2;
    out.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      int16_t s;
      std::memcpy(&s, buf.data() + data_at + 2 * i, 2);
      out.samples[i] = static_cast<float>(s) / 32768.0f;
    }
  } else {
    throw InvalidInput("unsupported WAV encoding (format " +
                       std::to_string(format) + ", " + std::to_string(bits) +
                       " bits): " + path);
  }
  return out;
}

}  // namespace seplab
