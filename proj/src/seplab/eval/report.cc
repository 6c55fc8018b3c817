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

#include "seplab/eval/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "seplab/common/error.h"

namespace seplab {

int BucketIndex(double overlap) {
  if (overlap < 0.25) return 0;
  if (overlap < 0.50) return 1;
  if (overlap < 0.75) return 2;
  return 3;
}

BucketRow MakeBucketRow(const std::string& config_id,
                        const std::string& label_a,
                        const std::string& label_b,
                        const std::vector<EvalRecord>& records) {
  BucketRow row;
  row.config_id = config_id;
  row.label_a = label_a;
  row.label_b = label_b;
  std::array<double, kNumBuckets> sum{};
  std::array<double, kNumBuckets> sum_imp{};
  double total_sum = 0.0, total_imp = 0.0;
  for (const EvalRecord& r : records) {
    int b = BucketIndex(r.overlap);
    sum[b] += r.si_sdr_db;
    sum_imp[b] += r.improvement_db;
    ++row.count[b];
    total_sum += r.si_sdr_db;
    total_imp += r.improvement_db;
    ++row.total;
  }
  for (int b = 0; b < kNumBuckets; ++b) {
    if (row.count[b] > 0) {
      row.mean_si_sdr[b] = sum[b] / row.count[b];
      row.mean_improvement[b] = sum_imp[b] / row.count[b];
    }
  }
  if (row.total > 0) {
    row.average = total_sum / row.total;
    row.average_improvement = total_imp / row.total;
  }
  return row;
}

double RoundHalfUp1(double v) {
  return std::floor(v * 10.0 + 0.5) / 10.0;
}

std::string FormatCell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", RoundHalfUp1(v));
  // avoid the "-0.0" artifact
  if (std::string(buf) == "-0.0") return "0.0";
  return buf;
}

namespace {

constexpr const char* kDash = "–";  // en dash for empty buckets

std::vector<std::string> RowCells(const BucketRow& row) {
  std::vector<std::string> cells;
  cells.push_back(row.label_a);
  cells.push_back(row.label_b);
  for (int b = 0; b < kNumBuckets; ++b) {
    bool have = row.paper_reported || row.count[b] > 0;
    cells.push_back(have ? FormatCell(row.mean_si_sdr[b]) : kDash);
  }
  bool have_avg = row.paper_reported || row.total > 0;
  cells.push_back(have_avg ? FormatCell(row.average) : kDash);
  return cells;
}

int BestAverageRow(const BucketTable& table) {
  int best = -1;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].total == 0 && !table.rows[i].paper_reported) continue;
    if (best < 0 || table.rows[i].average > table.rows[best].average)
      best = static_cast<int>(i);
  }
  return best;
}

std::vector<std::string> HeaderCells(const BucketTable& table) {
  std::vector<std::string> cells{table.label_a_header, table.label_b_header};
  for (const char* b : kBucketNames) cells.push_back(b);
  cells.push_back("Average");
  return cells;
}

std::string JoinCells(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += " | ";
    out += cells[i];
  }
  return out;
}

}  // namespace

std::string RenderTableText(const BucketTable& table) {
  std::ostringstream os;
  if (!table.title.empty()) os << table.title << "\n";
  os << JoinCells(HeaderCells(table)) << "\n";
  for (const BucketRow& row : table.rows) os << JoinCells(RowCells(row))
                                             << "\n";
  return os.str();
}

std::string RenderTableMarkdown(const BucketTable& table) {
  std::ostringstream os;
  if (!table.title.empty()) os << "### " << table.title << "\n\n";
  auto header = HeaderCells(table);
  os << "|";
  for (const auto& h : header) os << " " << h << " |";
  os << "\n|";
  for (size_t i = 0; i < header.size(); ++i) os << " --- |";
  os << "\n";
  int best = BestAverageRow(table);
  for (size_t i = 0; i < table.rows.size(); ++i) {
    auto cells = RowCells(table.rows[i]);
    os << "|";
    for (const auto& c : cells) {
      if (static_cast<int>(i) == best)
        os << " **" << c << "** |";
      else
        os << " " << c << " |";
    }
    os << "\n";
  }
  return os.str();
}

std::string TableCsv(const BucketTable& table) {
  std::ostringstream os;
  os << "config_id,bucket,n,mean_si_sdr_db,mean_improvement_db\n";
  for (const BucketRow& row : table.rows) {
    for (int b = 0; b < kNumBuckets; ++b) {
      bool have = row.paper_reported || row.count[b] > 0;
      os << row.config_id << "," << kBucketNames[b] << "," << row.count[b]
         << ",";
      if (have)
        os << FormatCell(row.mean_si_sdr[b]) << ","
           << FormatCell(row.mean_improvement[b]);
      else
        os << ",";
      os << "\n";
    }
    os << row.config_id << ",average," << row.total << ","
       << FormatCell(row.average) << "," << FormatCell(row.average_improvement)
       << "\n";
  }
  return os.str();
}

namespace {

BucketRow PaperRow(const std::string& config_id, int a, int b,
                   std::array<double, 5> values) {
  BucketRow row;
  row.config_id = config_id;
  row.label_a = std::to_string(a);
  row.label_b = std::to_string(b);
  for (int i = 0; i < kNumBuckets; ++i) row.mean_si_sdr[i] = values[i];
  row.average = values[4];
  row.paper_reported = true;
  return row;
}

}  // namespace

BucketTable PaperTable1() {
  BucketTable t;
  t.title =
      "SIMO-only and mixed SIMO-SISO designs, SI-SDR (dB) [paper-reported]";
  t.label_a_header = "SIMO blocks";
  t.label_b_header = "SISO blocks";
  t.rows = {
      PaperRow("paper_simo_only", 6, 0, {13.9, 10.0, 7.2, 4.8, 9.0}),
      PaperRow("paper_mixed_k5", 5, 1, {14.0, 10.1, 7.3, 4.9, 9.1}),
      PaperRow("paper_mixed_k4", 4, 2, {14.2, 10.4, 7.6, 5.0, 9.4}),
      PaperRow("paper_mixed_k3", 3, 3, {14.4, 10.5, 7.6, 5.0, 9.4}),
      PaperRow("paper_mixed_k2", 2, 4, {14.6, 10.6, 7.8, 4.9, 9.5}),
      PaperRow("paper_mixed_k1", 1, 5, {14.3, 10.3, 7.5, 4.8, 9.2}),
      PaperRow("paper_mixed_k0", 0, 6, {13.5, 9.5, 6.8, 4.5, 8.6}),
  };
  return t;
}

BucketTable PaperTable2() {
  BucketTable t;
  t.title = "SISO-only iterative design, SI-SDR (dB) [paper-reported]";
  t.label_a_header = "Encoder blocks";
  t.label_b_header = "Decoder blocks";
  t.rows = {
      PaperRow("paper_siso_k1", 1, 5, {14.3, 10.3, 7.3, 4.9, 9.3}),
      PaperRow("paper_siso_k2", 2, 4, {14.2, 10.2, 7.4, 4.8, 9.1}),
      PaperRow("paper_siso_k3", 3, 3, {14.0, 10.0, 7.1, 4.4, 8.9}),
      PaperRow("paper_siso_k4", 4, 2, {13.4, 9.3, 6.5, 3.8, 8.3}),
      PaperRow("paper_siso_k5", 5, 1, {13.0, 8.9, 6.2, 3.3, 7.9}),
  };
  return t;
}

}  // namespace seplab
