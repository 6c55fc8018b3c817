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

#include "seplab/scene/mix.h"

#include <algorithm>
#include <cmath>

#include "seplab/common/error.h"
#include "seplab/common/rng.h"
#include "seplab/scene/convolve.h"
#include "seplab/scene/rir.h"
#include "seplab/scene/vad.h"

namespace seplab {

namespace {

constexpr double kWallMargin = 0.3;
constexpr double kMicMargin = 0.5;

Position SamplePosition(Rng* rng, const RoomSpec& room) {
  Position p;
  p.x = rng->Uniform(kWallMargin, room.length - kWallMargin);
  p.y = rng->Uniform(kWallMargin, room.width - kWallMargin);
  p.z = rng->Uniform(kWallMargin, room.height - kWallMargin);
  return p;
}

double Distance(const Position& a, const Position& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

double MeanPower(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return w.empty() ? 0.0 : s / static_cast<double>(w.size());
}

// Reverberant image of a dry track: convolve and truncate to track length.
std::vector<double> Reverberate(const std::vector<double>& track,
                                const std::vector<double>& rir) {
  std::vector<double> full = FftConvolve(track, rir);
  full.resize(track.size());
  return full;
}

}  // namespace

SceneSpec SampleScene(uint64_t seed, const SceneParams& params) {
  Rng rng(seed);
  SceneSpec s;
  s.seed = seed;
  s.utterance_len = params.utterance_len;
  s.sample_rate = params.sample_rate;
  s.room.length = rng.Uniform(3.0, 10.0);
  s.room.width = rng.Uniform(3.0, 10.0);
  s.room.height = rng.Uniform(2.5, 4.0);
  s.room.t60 = rng.Uniform(0.1, 0.5);
  s.overlap_ratio_target = rng.Uniform(0.0, 1.0);
  s.rel_snr_db = rng.Uniform(0.0, 5.0);
  s.noise_snr_db = rng.Uniform(10.0, 20.0);
  s.room.mic_position = SamplePosition(&rng, s.room);
  auto sample_away_from_mic = [&]() {
    for (int i = 0; i < 1000; ++i) {
      Position p = SamplePosition(&rng, s.room);
      if (Distance(p, s.room.mic_position) >= kMicMargin) return p;
    }
    throw InfeasibleScene("could not place a source away from the mic");
  };
  s.room.src_positions[0] = sample_away_from_mic();
  s.room.src_positions[1] = sample_away_from_mic();
  s.room.noise_position = sample_away_from_mic();
  return s;
}

int SpeakerSpanSamples(double overlap_ratio_target, int utterance_len) {
  double ov = overlap_ratio_target * utterance_len;
  int span = static_cast<int>(std::ceil((utterance_len + ov) / 2.0));
  return std::min(span, utterance_len);
}

MixtureExample MixScene(const SceneSpec& scene,
                        const std::vector<double>& speech1,
                        const std::vector<double>& speech2,
                        const std::vector<double>& noise,
                        MixDiagnostics* diag) {
  const int t = scene.utterance_len;
  const int fs = scene.sample_rate;
  const int span = SpeakerSpanSamples(scene.overlap_ratio_target, t);
  if (static_cast<int>(speech1.size()) < span ||
      static_cast<int>(speech2.size()) < span)
    throw InvalidInput("mix: source waveforms shorter than the needed span");
  if (static_cast<int>(noise.size()) < t)
    throw InvalidInput("mix: noise waveform shorter than the utterance");

  // Speaker 1 sits at the start, speaker 2 ends at the window end; the
  // exact speaker-2 start is tuned against the VAD-measured overlap.
  std::vector<double> track1(t, 0.0);
  std::copy(speech1.begin(), speech1.begin() + span, track1.begin());
  if (MeanPower(track1) <= 0.0)
    throw InvalidInput("mix: speaker 1 is silent");
  std::vector<double> seg2(speech2.begin(), speech2.begin() + span);
  if (MeanPower(seg2) <= 0.0) throw InvalidInput("mix: speaker 2 is silent");

  std::vector<uint8_t> a1 = ActivityMask(track1, fs);
  std::vector<uint8_t> a2_seg = ActivityMask(seg2, fs);
  const int frame = std::max(1, fs / 100);  // 10 ms search resolution
  auto overlap_at = [&](int shift) {
    size_t both = 0;
    for (int i = 0; i < span && shift + i < t; ++i)
      both += (a2_seg[i] && a1[shift + i]) ? 1 : 0;
    return static_cast<double>(both) / t;
  };
  int best_shift = t - span;
  double best_err =
      std::abs(overlap_at(best_shift) - scene.overlap_ratio_target);
  for (int shift = 0; shift <= t - span; shift += frame) {
    double err = std::abs(overlap_at(shift) - scene.overlap_ratio_target);
    if (err < best_err - 1e-12) {
      best_err = err;
      best_shift = shift;
    }
  }

  std::vector<double> track2(t, 0.0);
  for (int i = 0; i < span && best_shift + i < t; ++i)
    track2[best_shift + i] = seg2[i];

  // Relative SNR over the overlap region (samples where both are active).
  std::vector<uint8_t> a2 = ActivityMask(track2, fs);
  double p1 = 0.0, p2 = 0.0;
  size_t region = 0;
  for (int i = 0; i < t; ++i) {
    if (a1[i] && a2[i]) {
      p1 += track1[i] * track1[i];
      p2 += track2[i] * track2[i];
      ++region;
    }
  }
  double gain2 = 1.0;
  if (region > 0 && p2 > 0.0)
    gain2 = std::sqrt(p1 / (p2 * std::pow(10.0, scene.rel_snr_db / 10.0)));
  for (double& v : track2) v *= gain2;
  double measured = MeasureOverlap(a1, a2);

  // Reverberate everything.
  std::vector<double> rir1 = SimulateRir(scene.room,
                                         scene.room.src_positions[0],
                                         scene.room.mic_position, fs);
  std::vector<double> rir2 = SimulateRir(scene.room,
                                         scene.room.src_positions[1],
                                         scene.room.mic_position, fs);
  std::vector<double> rir_n = SimulateRir(scene.room, scene.room.noise_position,
                                          scene.room.mic_position, fs);
  std::vector<double> img1 = Reverberate(track1, rir1);
  std::vector<double> img2 = Reverberate(track2, rir2);
  std::vector<double> noise_track(noise.begin(), noise.begin() + t);
  std::vector<double> img_n = Reverberate(noise_track, rir_n);

  // Noise SNR between the summed reverberant speech and the noise image.
  std::vector<double> speech_sum(t);
  for (int i = 0; i < t; ++i) speech_sum[i] = img1[i] + img2[i];
  double p_speech = MeanPower(speech_sum);
  double p_noise = MeanPower(img_n);
  if (p_noise <= 0.0) throw InvalidInput("mix: noise image is silent");
  double gain_n =
      std::sqrt(p_speech / (p_noise * std::pow(10.0, scene.noise_snr_db / 10.0)));
  for (double& v : img_n) v *= gain_n;

  MixtureExample ex;
  ex.scene = scene;
  ex.measured_overlap = measured;
  ex.targets.resize(2);
  ex.targets[0].resize(t);
  ex.targets[1].resize(t);
  ex.noise_image.resize(t);
  ex.mixture.resize(t);
  for (int i = 0; i < t; ++i) {
    float t1 = static_cast<float>(img1[i]);
    float t2 = static_cast<float>(img2[i]);
    float n = static_cast<float>(img_n[i]);
    ex.targets[0][i] = t1;
    ex.targets[1][i] = t2;
    ex.noise_image[i] = n;
    ex.mixture[i] = (t1 + t2) + n;  // fixed summation order
  }

  if (diag) {
    diag->shift = best_shift;
    diag->speaker2_gain = gain2;
    diag->noise_gain = gain_n;
    double p2_scaled = p2 * gain2 * gain2;
    diag->rel_snr_check_db =
        (region > 0 && p2_scaled > 0.0) ? 10.0 * std::log10(p1 / p2_scaled)
                                        : 0.0;
    diag->noise_snr_check_db =
        10.0 * std::log10(p_speech / MeanPower(img_n));
    diag->dry_tracks[0] = std::move(track1);
    diag->dry_tracks[1] = std::move(track2);
  }
  return ex;
}

}  // namespace seplab
