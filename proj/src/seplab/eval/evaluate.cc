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

#include "seplab/eval/evaluate.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "seplab/common/error.h"
#include "seplab/scene/wav_io.h"
#include "seplab/train/metrics.h"

namespace seplab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string EvalRecord::ToJsonLine() const {
  json j;
  j["id"] = id;
  j["overlap"] = overlap;
  j["per_source_si_sdr_db"] = per_source_si_sdr_db;
  j["si_sdr_db"] = si_sdr_db;
  j["mixture_si_sdr_db"] = mixture_si_sdr_db;
  j["improvement_db"] = improvement_db;
  return j.dump();
}

EvalRecord EvalRecord::FromJsonLine(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw IoError(std::string("records: bad JSON line: ") + e.what());
  }
  EvalRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.overlap = j.at("overlap").get<double>();
    r.per_source_si_sdr_db =
        j.at("per_source_si_sdr_db").get<std::vector<double>>();
    r.si_sdr_db = j.at("si_sdr_db").get<double>();
    r.mixture_si_sdr_db = j.at("mixture_si_sdr_db").get<double>();
    r.improvement_db = j.at("improvement_db").get<double>();
  } catch (const json::exception& e) {
    throw IoError(std::string("records: missing field: ") + e.what());
  }
  return r;
}

namespace {

std::vector<double> ToDouble(const WaveF& w) {
  return std::vector<double>(w.begin(), w.end());
}

EvalRecord EvaluateOne(const SeparateFn& separate,
                       const std::string& manifest_dir,
                       const ManifestEntry& entry) {
  WaveF mixture =
      ReadWav((fs::path(manifest_dir) / entry.mixture_path).string()).samples;
  std::vector<std::vector<double>> refs;
  for (const auto& p : entry.target_paths)
    refs.push_back(ToDouble(ReadWav((fs::path(manifest_dir) / p).string())
                                .samples));
  std::vector<WaveF> outs = separate(mixture);
  if (outs.size() != refs.size())
    throw InvariantViolation("evaluate: model produced " +
                             std::to_string(outs.size()) + " sources for " +
                             std::to_string(refs.size()) + " references");
  std::vector<std::vector<double>> ests;
  for (const auto& o : outs) ests.push_back(ToDouble(o));

  PitResult pr = PitAssign(ests, refs, [](const std::vector<double>& e,
                                          const std::vector<double>& t) {
    return -SiSdrDb(e, t);
  });

  EvalRecord rec;
  rec.id = entry.id;
  rec.overlap = entry.overlap;
  std::vector<double> mix_d = ToDouble(mixture);
  double mix_sum = 0.0;
  for (size_t i = 0; i < refs.size(); ++i) {
    rec.per_source_si_sdr_db.push_back(SiSdrDb(ests[pr.perm[i]], refs[i]));
    mix_sum += SiSdrDb(mix_d, refs[i]);
  }
  double c = static_cast<double>(refs.size());
  rec.si_sdr_db = 0.0;
  for (double v : rec.per_source_si_sdr_db) rec.si_sdr_db += v;
  rec.si_sdr_db /= c;
  rec.mixture_si_sdr_db = mix_sum / c;
  rec.improvement_db = rec.si_sdr_db - rec.mixture_si_sdr_db;
  return rec;
}

}  // namespace

std::vector<EvalRecord> Evaluate(const SeparateFn& separate,
                                 const std::string& manifest_dir,
                                 const std::vector<ManifestEntry>& entries,
                                 int jobs) {
  std::vector<EvalRecord> records(entries.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < entries.size(); ++i)
      records[i] = EvaluateOne(separate, manifest_dir, entries[i]);
    return records;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (!failed.load()) {
      size_t k = next.fetch_add(1);
      if (k >= entries.size()) return;
      try {
        records[k] = EvaluateOne(separate, manifest_dir, entries[k]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load()) throw InvalidInput("evaluate failed: " + failure);
  return records;
}

void WriteRecords(const std::vector<EvalRecord>& records,
                  const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write records: " + path);
  for (const auto& r : records) os << r.ToJsonLine() << "\n";
  if (!os) throw IoError("short write: " + path);
}

std::vector<EvalRecord> ReadRecords(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open records: " + path);
  std::vector<EvalRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) out.push_back(EvalRecord::FromJsonLine(line));
  }
  return out;
}

}  // namespace seplab
