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

#include "seplab/cli/commands.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "seplab/common/error.h"
#include "seplab/eval/plots.h"
#include "seplab/eval/report.h"
#include "seplab/models/checkpoint.h"
#include "seplab/scene/wav_io.h"

namespace seplab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Real = float;  // production scalar; tests exercise double

std::string Resolve(const std::string& workdir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(workdir) / p).string();
}

std::string ReadFileOrEmpty(const std::string& path) {
  std::ifstream is(path);
  if (!is) return "";
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write: " + path);
  os << text;
  if (!os) throw IoError("short write: " + path);
}

std::vector<TrainExample<Real>> LoadSplit(const std::string& manifest_path,
                                          const std::string& split) {
  std::string dir = fs::path(manifest_path).parent_path().string();
  std::vector<TrainExample<Real>> out;
  for (const ManifestEntry& m : ReadManifest(manifest_path, split)) {
    TrainExample<Real> ex;
    WaveF mix = ReadWav((fs::path(dir) / m.mixture_path).string()).samples;
    ex.mixture.assign(mix.begin(), mix.end());
    for (const auto& p : m.target_paths) {
      WaveF t = ReadWav((fs::path(dir) / p).string()).samples;
      ex.targets.emplace_back(t.begin(), t.end());
    }
    out.push_back(std::move(ex));
  }
  return out;
}

void WriteTrainLog(const TrainLog& tl, const std::string& path) {
  std::ostringstream os;
  for (const EpochLog& e : tl.epochs) {
    json j = {{"epoch", e.epoch},
              {"train_loss", e.train_loss},
              {"val_loss", e.val_loss},
              {"lr", e.lr},
              {"seconds", e.seconds}};
    os << j.dump() << "\n";
  }
  json summary = {{"best_epoch", tl.best_epoch},
                  {"steps", tl.steps},
                  {"stopped_early", tl.stopped_early}};
  os << summary.dump() << "\n";
  WriteFile(path, os.str());
}

SeparateFn MakeSeparator(const SeparationModel<Real>& model) {
  return [&model](const WaveF& mixture) {
    std::vector<Real> mix(mixture.begin(), mixture.end());
    auto outs = model.Forward(mix);
    std::vector<WaveF> waves;
    for (const auto& o : outs) waves.emplace_back(o.begin(), o.end());
    return waves;
  };
}

struct SweepSplit {
  Design design;
  int split;
};

std::string SplitConfigId(const SweepSplit& s) {
  switch (s.design) {
    case Design::kSimoOnly: return "simo_only";
    case Design::kMixed: return "mixed_k" + std::to_string(s.split);
    case Design::kSisoIterative: return "siso_k" + std::to_string(s.split);
  }
  return "unknown";
}

}  // namespace

std::string CmdSimulate(const ExperimentConfig& cfg,
                        const std::string& workdir, std::ostream& log) {
  DatasetConfig ds = cfg.dataset;
  ds.out_dir = Resolve(workdir, ds.out_dir);
  if (!ds.wav_dir.empty()) ds.wav_dir = Resolve(workdir, ds.wav_dir);
  if (!ds.noise_dir.empty()) ds.noise_dir = Resolve(workdir, ds.noise_dir);
  ds.Validate();

  json stamp = {{"seed", ds.seed},
                {"train", ds.train_count},
                {"valid", ds.valid_count},
                {"test", ds.test_count},
                {"utterance_seconds", ds.utterance_seconds},
                {"sample_rate", ds.sample_rate},
                {"source", ds.source_mode},
                {"noise", ds.noise_mode}};
  std::string stamp_path =
      (fs::path(ds.out_dir) / ".dataset_stamp.json").string();
  std::string manifest_path =
      (fs::path(ds.out_dir) / "manifest.jsonl").string();
  if (fs::exists(manifest_path) &&
      ReadFileOrEmpty(stamp_path) == stamp.dump()) {
    log << "simulate: reusing existing dataset at " << ds.out_dir << "\n";
    return manifest_path;
  }

  log << "simulate: generating "
      << ds.train_count + ds.valid_count + ds.test_count << " utterances ("
      << ds.train_count << "/" << ds.valid_count << "/" << ds.test_count
      << ") into " << ds.out_dir << "\n";
  std::string path = GenerateDataset(ds);
  WriteFile(stamp_path, stamp.dump());
  log << "simulate: wrote " << path << "\n";
  return path;
}

TrainOutputs CmdTrain(const ExperimentConfig& cfg, const std::string& workdir,
                      std::ostream& log) {
  TrainOutputs out;
  std::string out_dir =
      Resolve(workdir, (fs::path(cfg.train_out_dir) / cfg.ConfigId()).string());
  fs::create_directories(out_dir);
  out.checkpoint_path = (fs::path(out_dir) / "model.ckpt").string();
  out.log_path = (fs::path(out_dir) / "train_log.jsonl").string();

  std::string stamp_path = (fs::path(out_dir) / ".train_stamp.json").string();
  std::string stamp = cfg.ToJson();
  if (fs::exists(out.checkpoint_path) &&
      ReadFileOrEmpty(stamp_path) == stamp) {
    log << "train: reusing existing checkpoint " << out.checkpoint_path
        << "\n";
    out.reused_existing = true;
    return out;
  }

  std::string manifest = Resolve(workdir, cfg.eval.manifest);
  auto train_set = LoadSplit(manifest, "train");
  auto valid_set = LoadSplit(manifest, "valid");
  if (train_set.empty())
    throw InvalidInput("train: no training utterances in " + manifest);
  log << "train: " << cfg.ConfigId() << " on " << train_set.size()
      << " utterances (" << valid_set.size() << " validation)\n";

  SeparationModel<Real> model = SeparationModel<Real>::Build(cfg.model,
                                                             cfg.seed);
  TrainLog tl = Train(&model, train_set, valid_set, cfg.train);
  SaveCheckpoint(model, out.checkpoint_path);
  WriteTrainLog(tl, out.log_path);
  WriteFile(stamp_path, stamp);
  log << "train: finished after " << tl.epochs.size() << " epochs ("
      << tl.steps << " steps), best epoch " << tl.best_epoch << "\n";
  return out;
}

EvaluateOutputs CmdEvaluate(const ExperimentConfig& cfg,
                            const std::string& workdir,
                            const std::string& checkpoint, int jobs,
                            std::ostream& log) {
  std::string ckpt = checkpoint;
  if (ckpt.empty()) ckpt = cfg.eval.checkpoint;
  if (ckpt.empty())
    ckpt = (fs::path(cfg.train_out_dir) / cfg.ConfigId() / "model.ckpt")
               .string();
  ckpt = Resolve(workdir, ckpt);
  if (!fs::exists(ckpt))
    throw InvalidInput("evaluate: checkpoint not found: " + ckpt);
  SeparationModel<Real> model = LoadCheckpoint<Real>(ckpt);

  std::string manifest = Resolve(workdir, cfg.eval.manifest);
  auto entries = ReadManifest(manifest, cfg.eval.split);
  if (entries.empty())
    throw InvalidInput("evaluate: no '" + cfg.eval.split +
                       "' entries in " + manifest);
  log << "evaluate: " << cfg.ConfigId() << " on " << entries.size() << " '"
      << cfg.eval.split << "' utterances\n";

  std::string manifest_dir = fs::path(manifest).parent_path().string();
  auto records = Evaluate(MakeSeparator(model), manifest_dir, entries, jobs);

  std::string report_dir = Resolve(workdir, cfg.eval.report_dir);
  fs::create_directories(report_dir);
  EvaluateOutputs out;
  out.records_path =
      (fs::path(report_dir) / (cfg.ConfigId() + "_records.jsonl")).string();
  WriteRecords(records, out.records_path);

  BucketTable table;
  table.title = "SI-SDR (dB) by overlap ratio (%)";
  std::string la = std::to_string(model.SimoBlockCount());
  std::string lb = std::to_string(model.SisoBlockCount());
  if (cfg.model.design == Design::kSisoIterative) {
    table.label_a_header = "Encoder blocks";
    table.label_b_header = "Decoder blocks";
  }
  BucketRow row = MakeBucketRow(cfg.ConfigId(), la, lb, records);
  table.rows.push_back(row);
  out.average_si_sdr_db = row.average;

  out.table_text_path =
      (fs::path(report_dir) / (cfg.ConfigId() + "_table.txt")).string();
  out.table_markdown_path =
      (fs::path(report_dir) / (cfg.ConfigId() + "_table.md")).string();
  out.csv_path =
      (fs::path(report_dir) / (cfg.ConfigId() + "_table.csv")).string();
  WriteFile(out.table_text_path, RenderTableText(table));
  WriteFile(out.table_markdown_path, RenderTableMarkdown(table));
  WriteFile(out.csv_path, TableCsv(table));
  EmitPlots({{cfg.ConfigId(), records}}, report_dir);
  log << RenderTableText(table);
  return out;
}

ParamCheckResult CmdParamCheck(const ExperimentConfig& cfg,
                               std::ostream& log) {
  const int m = cfg.model.num_blocks;
  std::vector<SweepSplit> table1{{Design::kSimoOnly, m}};
  for (int k = m - 1; k >= 0; --k) table1.push_back({Design::kMixed, k});
  std::vector<SweepSplit> table2;
  for (int k = 1; k <= m - 1; ++k)
    table2.push_back({Design::kSisoIterative, k});

  auto count = [&](const SweepSplit& s) {
    ModelConfig mc = cfg.model;
    mc.design = s.design;
    mc.split = s.split;
    mc.mask_variant = s.design == Design::kMixed ? cfg.model.mask_variant
                                                 : false;
    if (s.design != Design::kSisoIterative) {
      // bias encoding only exists in the iterative design
      mc.fusion_inputs.clear();
    }
    return SeparationModel<Real>::Build(mc, cfg.seed).CountParameters();
  };

  auto audit = [&](const std::vector<SweepSplit>& splits,
                   const std::string& name, std::vector<int64_t>* counts) {
    log << name << ":\n";
    for (const auto& s : splits) {
      int64_t c = count(s);
      counts->push_back(c);
      log << "  " << SplitConfigId(s) << ": " << c << " parameters\n";
    }
    double max_rel = 0.0;
    for (size_t i = 0; i < counts->size(); ++i)
      for (size_t j = i + 1; j < counts->size(); ++j) {
        double a = static_cast<double>((*counts)[i]);
        double b = static_cast<double>((*counts)[j]);
        max_rel = std::max(max_rel, std::abs(a - b) / std::min(a, b));
      }
    return max_rel;
  };

  ParamCheckResult res;
  std::vector<int64_t> c1, c2;
  res.table1_max_rel_diff = audit(table1, "Table 1 splits", &c1);
  res.table2_max_rel_diff = audit(table2, "Table 2 splits", &c2);
  double overall = 0.0;
  for (int64_t a : c1)
    for (int64_t b : c2)
      overall = std::max(overall, std::abs(static_cast<double>(a - b)) /
                                      std::min<double>(a, b));
  res.overall_max_rel_diff = std::max(
      {overall, res.table1_max_rel_diff, res.table2_max_rel_diff});
  res.within_tolerance = res.overall_max_rel_diff < 0.05;
  log << "max pairwise relative difference: Table 1 "
      << res.table1_max_rel_diff * 100 << "%, Table 2 "
      << res.table2_max_rel_diff * 100 << "%, overall "
      << res.overall_max_rel_diff * 100 << "% -> "
      << (res.within_tolerance ? "within" : "exceeds") << " 5%\n";
  return res;
}

std::string CmdSweep(const ExperimentConfig& cfg, const std::string& workdir,
                     int jobs, std::ostream& log) {
  const int m = cfg.model.num_blocks;
  std::vector<SweepSplit> table1{{Design::kSimoOnly, m}};
  for (int k = m - 1; k >= 0; --k) table1.push_back({Design::kMixed, k});
  std::vector<SweepSplit> table2;
  for (int k = 1; k <= m - 1; ++k)
    table2.push_back({Design::kSisoIterative, k});

  CmdSimulate(cfg, workdir, log);

  auto run_split = [&](const SweepSplit& s) {
    ExperimentConfig sub = cfg;
    sub.model.design = s.design;
    sub.model.split = s.split;
    if (s.design != Design::kSisoIterative) sub.model.fusion_inputs.clear();
    sub.model.mask_variant =
        s.design == Design::kMixed ? cfg.model.mask_variant : false;
    sub.Validate();
    CmdTrain(sub, workdir, log);
    auto eval_out = CmdEvaluate(sub, workdir, "", jobs, log);
    auto records = ReadRecords(eval_out.records_path);
    std::string la = std::to_string(
        s.design == Design::kSimoOnly ? m : s.split);
    std::string lb = std::to_string(
        s.design == Design::kSimoOnly ? 0 : m - s.split);
    return std::pair(MakeBucketRow(sub.ConfigId(), la, lb, records), records);
  };

  BucketTable t1;
  t1.title = "SIMO-only and mixed SIMO-SISO designs, SI-SDR (dB)";
  BucketTable t2;
  t2.title = "SISO-only iterative design, SI-SDR (dB)";
  t2.label_a_header = "Encoder blocks";
  t2.label_b_header = "Decoder blocks";
  std::vector<std::pair<std::string, std::vector<EvalRecord>>> all_records;
  for (const auto& s : table1) {
    auto [row, records] = run_split(s);
    t1.rows.push_back(row);
    all_records.emplace_back(row.config_id, records);
  }
  for (const auto& s : table2) {
    auto [row, records] = run_split(s);
    t2.rows.push_back(row);
    all_records.emplace_back(row.config_id, records);
  }

  std::string report_dir = Resolve(workdir, cfg.eval.report_dir);
  fs::create_directories(report_dir);
  std::ostringstream md;
  md << RenderTableMarkdown(t1) << "\n" << RenderTableMarkdown(PaperTable1())
     << "\n" << RenderTableMarkdown(t2) << "\n"
     << RenderTableMarkdown(PaperTable2());
  std::ostringstream txt;
  txt << RenderTableText(t1) << "\n" << RenderTableText(PaperTable1()) << "\n"
      << RenderTableText(t2) << "\n" << RenderTableText(PaperTable2());
  WriteFile((fs::path(report_dir) / "sweep_report.md").string(), md.str());
  WriteFile((fs::path(report_dir) / "sweep_report.txt").string(), txt.str());
  WriteFile((fs::path(report_dir) / "sweep_table1.csv").string(),
            TableCsv(t1));
  WriteFile((fs::path(report_dir) / "sweep_table2.csv").string(),
            TableCsv(t2));
  EmitPlots(all_records, report_dir);
  log << txt.str();
  return report_dir;
}

std::string CmdReport(const std::vector<std::string>& record_files,
                      const std::string& out_dir, std::ostream& log) {
  if (record_files.empty())
    throw ConfigError("report: need at least one records file");
  fs::create_directories(out_dir);
  BucketTable table;
  table.title = "SI-SDR (dB) by overlap ratio (%)";
  table.label_a_header = "Config";
  table.label_b_header = "Records";
  std::vector<std::pair<std::string, std::vector<EvalRecord>>> per_config;
  for (const auto& path : record_files) {
    auto records = ReadRecords(path);
    std::string name = fs::path(path).stem().string();
    table.rows.push_back(MakeBucketRow(
        name, name, std::to_string(records.size()), records));
    per_config.emplace_back(name, records);
  }
  WriteFile((fs::path(out_dir) / "report.md").string(),
            RenderTableMarkdown(table));
  WriteFile((fs::path(out_dir) / "report.txt").string(),
            RenderTableText(table));
  WriteFile((fs::path(out_dir) / "report.csv").string(), TableCsv(table));
  EmitPlots(per_config, out_dir);
  log << RenderTableText(table);
  return out_dir;
}

}  // namespace seplab
