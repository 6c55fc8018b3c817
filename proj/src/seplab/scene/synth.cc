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

#include "seplab/scene/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "seplab/common/error.h"
#include "seplab/common/rng.h"
#include "seplab/scene/wav_io.h"

namespace seplab {

namespace {

void PeakNormalize(std::vector<double>* w, double peak = 0.95) {
  double m = 0.0;
  for (double v : *w) m = std::max(m, std::abs(v));
  if (m > 0.0)
    for (double& v : *w) v *= peak / m;
}

}  // namespace

std::vector<double> SynthSpeechlike(uint64_t seed, int num_samples,
                                    int sample_rate) {
  SEPLAB_CHECK_MSG(num_samples > 0, "synth: need a positive duration");
  Rng rng(seed);
  const double fs = sample_rate;

  // Piecewise-linear fundamental trajectory, new target every 250 ms.
  const int seg = std::max(1, static_cast<int>(0.25 * fs));
  const int num_targets = num_samples / seg + 2;
  std::vector<double> f0_targets(num_targets);
  for (int i = 0; i < num_targets; ++i) f0_targets[i] = rng.Uniform(80, 300);

  // Syllabic envelope with a floor so modulation troughs stay above the
  // -40 dB activity threshold.
  const double syllable_hz = rng.Uniform(2, 8);
  const double syllable_phase = rng.Uniform(0, 2 * M_PI);
  const double env_floor = 0.08;

  const int num_harmonics = 8;
  std::vector<double> harm_amp(num_harmonics);
  for (int k = 0; k < num_harmonics; ++k)
    harm_amp[k] = rng.Uniform(0.5, 1.0) / (k + 1);

  std::vector<double> wave(num_samples, 0.0);
  double phase = rng.Uniform(0, 2 * M_PI);
  for (int i = 0; i < num_samples; ++i) {
    int s = i / seg;
    double frac = static_cast<double>(i - s * seg) / seg;
    double f0 = f0_targets[s] * (1 - frac) + f0_targets[s + 1] * frac;
    phase += 2 * M_PI * f0 / fs;
    double carrier = 0.0;
    for (int k = 0; k < num_harmonics; ++k)
      carrier += harm_amp[k] * std::sin((k + 1) * phase);
    double t = i / fs;
    double syl = 0.5 * (1 + std::sin(2 * M_PI * syllable_hz * t +
                                     syllable_phase));
    wave[i] = carrier * (env_floor + (1 - env_floor) * syl);
  }

  // Up to two short silences (~15 ms) with 2 ms cosine edges; total gap
  // stays under 1% of the duration so targets near full overlap remain
  // reachable by the mixer.
  const int num_sil = static_cast<int>(rng.UniformInt(3));
  const int ramp = static_cast<int>(0.002 * fs);
  for (int g = 0; g < num_sil; ++g) {
    int len = static_cast<int>(rng.Uniform(0.010, 0.015) * fs);
    if (len + 2 * ramp >= num_samples) break;
    int start = static_cast<int>(
        rng.UniformInt(static_cast<uint64_t>(num_samples - len - 2 * ramp)));
    for (int i = 0; i < ramp; ++i) {
      double w = 0.5 * (1 + std::cos(M_PI * i / ramp));
      wave[start + i] *= w;
      wave[start + len + 2 * ramp - 1 - i] *= w;
    }
    std::fill(wave.begin() + start + ramp,
              wave.begin() + start + ramp + len, 0.0);
  }

  PeakNormalize(&wave);
  return wave;
}

std::vector<double> SynthNoise(uint64_t seed, int num_samples,
                               int sample_rate) {
  SEPLAB_CHECK_MSG(num_samples > 0, "synth: need a positive duration");
  Rng rng(seed);
  const double pole = rng.Uniform(0.8, 0.99);
  const double mod_hz = rng.Uniform(0.3, 1.0);
  const double mod_depth = rng.Uniform(0.0, 0.5);
  const double mod_phase = rng.Uniform(0, 2 * M_PI);
  std::vector<double> wave(num_samples);
  double state = 0.0;
  for (int i = 0; i < num_samples; ++i) {
    state = pole * state + (1 - pole) * rng.Normal();
    double t = i / static_cast<double>(sample_rate);
    double mod =
        1.0 - mod_depth * 0.5 * (1 + std::sin(2 * M_PI * mod_hz * t +
                                              mod_phase));
    wave[i] = state * mod;
  }
  PeakNormalize(&wave);
  return wave;
}

namespace {

class SpeechlikeSource : public SignalSource {
 public:
  std::vector<double> Draw(uint64_t seed, int num_samples,
                           int sample_rate) const override {
    return SynthSpeechlike(seed, num_samples, sample_rate);
  }
};

class NoiseSource : public SignalSource {
 public:
  std::vector<double> Draw(uint64_t seed, int num_samples,
                           int sample_rate) const override {
    return SynthNoise(seed, num_samples, sample_rate);
  }
};

class WavDirSource : public SignalSource {
 public:
  explicit WavDirSource(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
      throw IoError("wav source: not a directory: " + dir);
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".wav")
        files_.push_back(e.path().string());
    }
    std::sort(files_.begin(), files_.end());
    if (files_.empty())
      throw IoError("wav source: no .wav files in " + dir);
  }

  std::vector<double> Draw(uint64_t seed, int num_samples,
                           int sample_rate) const override {
    Rng rng(seed);
    for (int attempt = 0; attempt < 10; ++attempt) {
      const std::string& path =
          files_[rng.UniformInt(files_.size())];
      WavData wav = ReadWav(path);
      if (wav.sample_rate != sample_rate)
        throw InvalidInput("wav source: " + path + " is " +
                           std::to_string(wav.sample_rate) +
                           " Hz, expected " + std::to_string(sample_rate));
      if (static_cast<int>(wav.samples.size()) < num_samples) continue;
      int max_off = static_cast<int>(wav.samples.size()) - num_samples;
      int off = max_off > 0
                    ? static_cast<int>(rng.UniformInt(
                          static_cast<uint64_t>(max_off) + 1))
                    : 0;
      std::vector<double> out(num_samples);
      for (int i = 0; i < num_samples; ++i)
        out[i] = wav.samples[off + i];
      return out;
    }
    throw InvalidInput(
        "wav source: no file long enough after 10 draws (need " +
        std::to_string(num_samples) + " samples)");
  }

 private:
  std::vector<std::string> files_;
};

}  // namespace

std::unique_ptr<SignalSource> MakeSpeechlikeSource() {
  return std::make_unique<SpeechlikeSource>();
}
std::unique_ptr<SignalSource> MakeNoiseSource() {
  return std::make_unique<NoiseSource>();
}
std::unique_ptr<SignalSource> MakeWavDirSource(const std::string& dir) {
  return std::make_unique<WavDirSource>(dir);
}

}  // namespace seplab
