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

#ifndef SEPLAB_CODEC_CODEC_H_
#define SEPLAB_CODEC_CODEC_H_

#include "seplab/autodiff/tape.h"
#include "seplab/common/error.h"

namespace seplab {

// Learned linear waveform front end: analysis into [filters x frames]
// latent features and overlap-add synthesis back to the waveform.
struct CodecSpec {
  int window = 32;   // samples
  int hop = 16;      // samples, must divide window
  int filters = 128;

  void Validate() const {
    if (window < 2) throw ConfigError("codec: window must be >= 2 samples");
    if (hop < 1 || window % hop != 0)
      throw ConfigError("codec: hop must divide the window");
    if (filters < 1) throw ConfigError("codec: filters must be >= 1");
  }
};

// Frame count for a waveform of length t: floor((t - window)/hop) + 1.
inline int NumFrames(const CodecSpec& spec, int64_t t) {
  if (t < spec.window)
    throw InvalidInput("waveform shorter than one analysis window");
  return static_cast<int>((t - spec.window) / spec.hop) + 1;
}

// basis is [filters x window]. Output latent is [filters x L]. Samples past
// the last full frame do not reach the latent; Decode() zero-pads them back.
template <typename S>
typename Tape<S>::Var Encode(Tape<S>* tape, typename Tape<S>::Var wave,
                             typename Tape<S>::Var basis,
                             const CodecSpec& spec, bool rectify = false) {
  SEPLAB_CHECK(tape->value(basis).rows() == spec.filters &&
               tape->value(basis).cols() == spec.window);
  int frames = NumFrames(spec, tape->value(wave).rows());
  auto framed = tape->FrameGather(wave, spec.window, spec.hop, frames);
  auto latent = tape->MatMul(basis, framed);
  return rectify ? tape->Relu(latent) : latent;
}

// basis is [window x filters]. Output waveform is [t_out x 1], trimmed or
// zero-padded to the sample anchor of the originating waveform.
template <typename S>
typename Tape<S>::Var Decode(Tape<S>* tape, typename Tape<S>::Var latent,
                             typename Tape<S>::Var basis,
                             const CodecSpec& spec, int t_out) {
  SEPLAB_CHECK(tape->value(basis).rows() == spec.window &&
               tape->value(basis).cols() == spec.filters);
  if (tape->value(latent).cols() < 1)
    throw InvalidInput("decode: latent must hold at least one frame");
  if (tape->value(latent).rows() != spec.filters)
    throw ConfigError("decode: latent channel count does not match basis");
  auto framed = tape->MatMul(basis, latent);
  return tape->OverlapAdd(framed, spec.hop, t_out);
}

}  // namespace seplab

#endif  // SEPLAB_CODEC_CODEC_H_
