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

#ifndef SEPLAB_EVAL_REPORT_H_
#define SEPLAB_EVAL_REPORT_H_

#include <array>
#include <string>
#include <vector>

#include "seplab/eval/evaluate.h"

namespace seplab {

inline constexpr int kNumBuckets = 4;
inline constexpr std::array<const char*, kNumBuckets> kBucketNames = {
    "<25", "25-50", "50-75", ">75"};

// Half-open buckets [0,.25) [.25,.5) [.5,.75) [.75,1].
int BucketIndex(double overlap);

struct BucketRow {
  std::string config_id;
  std::string label_a, label_b;  // e.g. SIMO/SISO block counts
  std::array<double, kNumBuckets> mean_si_sdr{};  // valid where count > 0
  std::array<double, kNumBuckets> mean_improvement{};
  std::array<int, kNumBuckets> count{};
  double average = 0.0;  // mean over all records, not over bucket means
  double average_improvement = 0.0;
  int total = 0;
  bool paper_reported = false;  // values embedded from the paper, no counts
};

struct BucketTable {
  std::string title;
  std::string label_a_header = "SIMO blocks";
  std::string label_b_header = "SISO blocks";
  std::vector<BucketRow> rows;
};

BucketRow MakeBucketRow(const std::string& config_id,
                        const std::string& label_a,
                        const std::string& label_b,
                        const std::vector<EvalRecord>& records);

// One decimal, half toward positive infinity, matching the table rendering.
double RoundHalfUp1(double v);
std::string FormatCell(double v);

// Plain-text rows like "6 | 0 | 13.9 | 10.0 | 7.2 | 4.8 | 9.0"; empty
// buckets render as an en dash.
std::string RenderTableText(const BucketTable& table);
// Markdown variant; the best-average row is bolded.
std::string RenderTableMarkdown(const BucketTable& table);

// CSV: config_id, bucket, n, mean_si_sdr_db, mean_improvement_db. Values
// match the rendered table cells exactly.
std::string TableCsv(const BucketTable& table);

// The paper-reported reference tables, for side-by-side display.
BucketTable PaperTable1();
BucketTable PaperTable2();

}  // namespace seplab

#endif  // SEPLAB_EVAL_REPORT_H_
