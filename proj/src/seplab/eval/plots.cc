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

#include "seplab/eval/plots.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seplab/common/error.h"
#include "seplab/eval/report.h"

namespace seplab {

namespace fs = std::filesystem;

namespace {

constexpr int kWidth = 720, kHeight = 480, kMargin = 60;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                         "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

double MapX(double overlap) {
  return kMargin + overlap * (kWidth - 2 * kMargin);
}

double MapY(double v, double lo, double hi) {
  if (hi <= lo) hi = lo + 1;
  return kHeight - kMargin -
         (v - lo) / (hi - lo) * (kHeight - 2 * kMargin);
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write plot file: " + path);
  os << content;
  if (!os) throw IoError("short write: " + path);
}

}  // namespace

PlotFiles EmitPlots(
    const std::vector<std::pair<std::string, std::vector<EvalRecord>>>&
        per_config,
    const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create plot directory: " + out_dir);

  double lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto& [name, records] : per_config) {
    for (const auto& r : records) {
      if (!any) {
        lo = hi = r.si_sdr_db;
        any = true;
      }
      lo = std::min(lo, r.si_sdr_db);
      hi = std::max(hi, r.si_sdr_db);
    }
  }
  lo -= 1.0;
  hi += 1.0;

  // Scatter with per-bucket mean markers.
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
      << "' height='" << kHeight << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<line x1='" << kMargin << "' y1='" << kHeight - kMargin << "' x2='"
      << kWidth - kMargin << "' y2='" << kHeight - kMargin
      << "' stroke='black'/>\n";
  svg << "<line x1='" << kMargin << "' y1='" << kMargin << "' x2='" << kMargin
      << "' y2='" << kHeight - kMargin << "' stroke='black'/>\n";
  svg << "<text x='" << kWidth / 2 << "' y='" << kHeight - 15
      << "' text-anchor='middle' font-size='14'>overlap ratio</text>\n";
  svg << "<text x='18' y='" << kHeight / 2
      << "' text-anchor='middle' font-size='14' transform='rotate(-90 18 "
      << kHeight / 2 << ")'>SI-SDR (dB)</text>\n";
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    svg << "<text x='" << MapX(x) << "' y='" << kHeight - kMargin + 18
        << "' text-anchor='middle' font-size='11'>" << x << "</text>\n";
  }
  std::ostringstream csv;
  csv << "kind,config_id,x,y\n";
  int color_at = 0;
  for (const auto& [name, records] : per_config) {
    const char* color = kColors[color_at % 12];
    ++color_at;
    for (const auto& r : records) {
      svg << "<circle cx='" << MapX(r.overlap) << "' cy='"
          << MapY(r.si_sdr_db, lo, hi) << "' r='3' fill='" << color
          << "' fill-opacity='0.5'/>\n";
      csv << "scatter," << name << "," << r.overlap << "," << r.si_sdr_db
          << "\n";
    }
    BucketRow row = MakeBucketRow(name, "", "", records);
    const double centers[kNumBuckets] = {0.125, 0.375, 0.625, 0.875};
    for (int b = 0; b < kNumBuckets; ++b) {
      if (row.count[b] == 0) continue;
      svg << "<rect x='" << MapX(centers[b]) - 7 << "' y='"
          << MapY(row.mean_si_sdr[b], lo, hi) - 2
          << "' width='14' height='4' fill='" << color << "'/>\n";
      csv << "bucket_mean," << name << "," << centers[b] << ","
          << row.mean_si_sdr[b] << "\n";
    }
  }
  svg << "</svg>\n";

  // Per-config average bar chart.
  std::ostringstream bars;
  bars << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
       << "' height='" << kHeight << "'>\n";
  bars << "<rect width='100%' height='100%' fill='white'/>\n";
  double bar_lo = 0.0, bar_hi = 1.0;
  std::vector<std::pair<std::string, double>> avgs;
  for (const auto& [name, records] : per_config) {
    BucketRow row = MakeBucketRow(name, "", "", records);
    avgs.emplace_back(name, row.average);
    bar_hi = std::max(bar_hi, row.average);
    bar_lo = std::min(bar_lo, row.average);
  }
  if (!avgs.empty()) {
    double span = (kWidth - 2.0 * kMargin) / avgs.size();
    for (size_t i = 0; i < avgs.size(); ++i) {
      double x = kMargin + span * i + span * 0.15;
      double y0 = MapY(0.0, bar_lo - 1, bar_hi + 1);
      double y1 = MapY(avgs[i].second, bar_lo - 1, bar_hi + 1);
      bars << "<rect x='" << x << "' y='" << std::min(y0, y1) << "' width='"
           << span * 0.7 << "' height='" << std::abs(y0 - y1) << "' fill='"
           << kColors[i % 12] << "'/>\n";
      bars << "<text x='" << x + span * 0.35 << "' y='"
           << kHeight - kMargin + 18
           << "' text-anchor='middle' font-size='10'>" << avgs[i].first
           << "</text>\n";
      bars << "<text x='" << x + span * 0.35 << "' y='"
           << std::min(y0, y1) - 5 << "' text-anchor='middle' font-size='11'>"
           << FormatCell(avgs[i].second) << "</text>\n";
      csv << "config_average," << avgs[i].first << "," << i << ","
          << avgs[i].second << "\n";
    }
  }
  bars << "</svg>\n";

  PlotFiles files;
  files.scatter_svg = (fs::path(out_dir) / "si_sdr_vs_overlap.svg").string();
  files.bars_svg = (fs::path(out_dir) / "config_averages.svg").string();
  files.values_csv = (fs::path(out_dir) / "plot_values.csv").string();
  WriteFile(files.scatter_svg, svg.str());
  WriteFile(files.bars_svg, bars.str());
  WriteFile(files.values_csv, csv.str());
  return files;
}

}  // namespace seplab
