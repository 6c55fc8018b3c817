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

#ifndef SEPLAB_DPRNN_DPRNN_H_
#define SEPLAB_DPRNN_DPRNN_H_

#include <vector>

#include "seplab/autodiff/tape.h"
#include "seplab/common/error.h"

namespace seplab {

// 50%-overlap chunking geometry for a frame sequence of length L. Frames are
// padded by half a chunk at the front and enough at the back so that every
// original frame is covered by exactly two chunks; merging overlap-adds and
// divides by the cover count, which makes segment/merge exact inverses.
struct ChunkGeometry {
  int frames = 0;     // L
  int chunk_len = 0;  // K_c
  int hop = 0;        // K_c / 2
  int num_chunks = 0; // S = ceil(L / hop) + 1
  int pad_front = 0;
  int pad_back = 0;
  // chunk column j (= s*chunk_len + k) maps to original frame index or -1.
  std::vector<int> col_to_frame;
  // per original frame, number of chunks covering it.
  std::vector<int> cover_count;
};

inline ChunkGeometry ComputeChunkGeometry(int frames, int chunk_len) {
  if (chunk_len < 2 || chunk_len % 2 != 0)
    throw ConfigError("chunk_len must be an even integer >= 2");
  SEPLAB_CHECK_MSG(frames >= 1, "segment: need at least one frame");
  ChunkGeometry g;
  g.frames = frames;
  g.chunk_len = chunk_len;
  g.hop = chunk_len / 2;
  g.num_chunks = (frames + g.hop - 1) / g.hop + 1;
  g.pad_front = g.hop;
  int padded = (g.num_chunks + 1) * g.hop;
  g.pad_back = padded - g.pad_front - frames;
  g.col_to_frame.resize(static_cast<size_t>(g.num_chunks) * chunk_len);
  g.cover_count.assign(frames, 0);
  for (int s = 0; s < g.num_chunks; ++s) {
    for (int k = 0; k < chunk_len; ++k) {
      int orig = s * g.hop + k - g.pad_front;
      int j = s * chunk_len + k;
      if (orig >= 0 && orig < frames) {
        g.col_to_frame[j] = orig;
        ++g.cover_count[orig];
      } else {
        g.col_to_frame[j] = -1;
      }
    }
  }
  return g;
}

// [D x L] -> [D x (S*K_c)], chunk-major columns.
template <typename S>
typename Tape<S>::Var Segment(Tape<S>* tape, typename Tape<S>::Var x,
                              const ChunkGeometry& geom) {
  SEPLAB_CHECK(tape->value(x).cols() == geom.frames);
  return tape->GatherCols(x, geom.col_to_frame);
}

// Exact inverse of Segment for the same geometry.
template <typename S>
typename Tape<S>::Var Merge(Tape<S>* tape, typename Tape<S>::Var chunks,
                            const ChunkGeometry& geom) {
  SEPLAB_CHECK_MSG(
      tape->value(chunks).cols() ==
          static_cast<Eigen::Index>(geom.col_to_frame.size()),
      "merge: chunk geometry does not match tensor");
  return tape->ScatterMeanCols(chunks, geom.col_to_frame, geom.cover_count);
}

// Parameter handles for one dual-path block, bound to tape vars by the
// model. Inter-chunk backward-direction vars are invalid when the
// inter-chunk RNN is unidirectional.
template <typename S>
struct DprnnBlockVars {
  using Var = typename Tape<S>::Var;
  struct Rnn {
    Var fwd_wx, fwd_wh, fwd_b;
    Var bwd_wx, bwd_wh, bwd_b;  // invalid if unidirectional
    Var proj_w, proj_b;
    Var gamma, beta;
    bool bidirectional = true;
  };
  Rnn intra;
  Rnn inter;
};

namespace internal {

template <typename S>
typename Tape<S>::Var RnnPass(Tape<S>* tape, typename Tape<S>::Var x,
                              const typename DprnnBlockVars<S>::Rnn& p,
                              const LstmSpec& base) {
  typename Tape<S>::Var h;
  if (p.bidirectional) {
    LstmSpec rev = base;
    rev.reverse = true;
    auto hf = tape->Lstm(x, p.fwd_wx, p.fwd_wh, p.fwd_b, base);
    auto hb = tape->Lstm(x, p.bwd_wx, p.bwd_wh, p.bwd_b, rev);
    h = tape->ConcatRows({hf, hb});
  } else {
    h = tape->Lstm(x, p.fwd_wx, p.fwd_wh, p.fwd_b, base);
  }
  auto proj = tape->AddColVec(tape->MatMul(p.proj_w, h), p.proj_b);
  auto norm = tape->GlobalLayerNorm(proj, p.gamma, p.beta, S(1e-8));
  return tape->Add(x, norm);
}

}  // namespace internal

// One block: intra-chunk recurrent pass with residual, then inter-chunk
// recurrent pass with residual. Shape [D x (S*K_c)] is preserved.
template <typename S>
typename Tape<S>::Var DprnnBlock(Tape<S>* tape, typename Tape<S>::Var chunks,
                                 const DprnnBlockVars<S>& block,
                                 const ChunkGeometry& geom) {
  LstmSpec intra{geom.chunk_len, geom.num_chunks, ScanOrder::kWithinChunk,
                 false};
  LstmSpec inter{geom.num_chunks, geom.chunk_len, ScanOrder::kAcrossChunks,
                 false};
  auto u = internal::RnnPass(tape, chunks, block.intra, intra);
  return internal::RnnPass(tape, u, block.inter, inter);
}

// segment -> blocks in order -> merge.
template <typename S>
typename Tape<S>::Var RunStack(Tape<S>* tape, typename Tape<S>::Var feature,
                               const std::vector<DprnnBlockVars<S>>& blocks,
                               int chunk_len) {
  if (blocks.empty()) return feature;
  ChunkGeometry geom =
      ComputeChunkGeometry(static_cast<int>(tape->value(feature).cols()),
                           chunk_len);
  auto x = Segment(tape, feature, geom);
  for (const auto& b : blocks) x = DprnnBlock(tape, x, b, geom);
  return Merge(tape, x, geom);
}

}  // namespace seplab

#endif  // SEPLAB_DPRNN_DPRNN_H_
