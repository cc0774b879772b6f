// src/cli.cc

// Copyright 2026  The strfnet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "strfnet/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "strfnet/checkpoint.h"
#include "strfnet/config.h"
#include "strfnet/pipeline.h"

namespace strfnet {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Bad invocation or unusable inputs; maps to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config, out, scores, checkpoint, data;
  std::optional<uint64_t> seed;
  std::optional<double> snr;
  std::optional<int> max_gap;
  std::vector<std::string> overrides;
};

void ReportError(std::ostream &err, const std::string &kind, const std::string &command, const std::string &msg) {
  ordered_json j;
  j["error"] = kind;
  j["command"] = command;
  j["message"] = msg;
  err << j.dump() << '\n';
}

ExperimentConfig LoadConfig(const Options &o) {
  try {
    std::vector<std::string> overrides = o.overrides;
    if (o.seed) overrides.push_back("seed=" + std::to_string(*o.seed));
    if (o.snr) {
      overrides.push_back("sim.snr_min_db=" + std::to_string(*o.snr));
      overrides.push_back("sim.snr_max_db=" + std::to_string(*o.snr));
    }
    return LoadExperimentConfig(o.config, overrides);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
}

void RequireFile(const std::string &path, const char *flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw UsageError(std::string("cannot read ") + flag + " " + path);
}

fs::path PrepareOut(const std::string &out) {
  if (out.empty()) throw UsageError("--out is required");
  fs::create_directories(out);
  return fs::path(out);
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

ordered_json ReportJson(const MetricsReport &r) { return ordered_json::parse(MetricsReportJson(r)); }

int SynthData(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = LoadConfig(o);
  const fs::path dir = PrepareOut(o.out);
  ordered_json manifest;
  manifest["config"] = ToJson(cfg);
  for (Split split : {Split::kTrain, Split::kDev, Split::kEval}) {
    const std::vector<Session> sessions = SynthesizeSplit(cfg, split);
    WriteSplit(sessions, (dir / SplitName(split)).string());
    ordered_json list = ordered_json::array();
    for (size_t i = 0; i < sessions.size(); ++i) {
      ordered_json e;
      e["index"] = i;
      e["duration_s"] = sessions[i].timeline.total_duration_s;
      e["live_occupancy"] = LiveOccupancy(sessions[i].timeline);
      e["snr_db"] = sessions[i].snr_db;
      list.push_back(e);
    }
    manifest[SplitName(split)] = list;
  }
  WriteText(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

int TrainCommand(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = LoadConfig(o);
  if (!o.data.empty() && !fs::is_directory(o.data)) throw UsageError("missing --data directory " + o.data);
  const fs::path dir = PrepareOut(o.out);
  WriteText(dir / "config.json", ToJson(cfg).dump(2) + "\n");
  const FeatureBank train = FeaturesFor(cfg, SessionsFor(cfg, Split::kTrain, o.data));
  const FeatureBank dev = FeaturesFor(cfg, SessionsFor(cfg, Split::kDev, o.data));
  std::ofstream log(dir / "train_log.jsonl", std::ios::binary);
  const int max_gap = o.max_gap.value_or(cfg.train.max_gap_segments);
  TrainConfig tc = cfg.train;
  tc.max_gap_segments = max_gap;
  TrainResult r = Train(cfg.model, train, dev, tc, cfg.augment, &log);
  const MetricsReport dev_report = BestThresholdByDcf(ScoreBank(*r.best_model, dev), max_gap);
  ordered_json extra;
  extra["best_epoch"] = r.best_epoch;
  extra["dev"] = ReportJson(dev_report);
  extra["parameter_count"] = r.best_model->ParameterCount();
  {
    std::ofstream timing(dir / "timing.jsonl", std::ios::binary);
    for (const EpochLog &e : r.log) timing << ordered_json{{"epoch", e.epoch}, {"elapsed_s", e.elapsed_s}}.dump() << '\n';
  }
  SaveCheckpoint((dir / "checkpoint.json").string(), *r.best_model, r.best_optimizer, cfg.seed, extra);
  out << "best epoch " << r.best_epoch << " of " << r.epochs_run << ", dev DCF " << dev_report.dcf
      << ", parameters " << r.best_model->ParameterCount() << '\n';
  return kExitOk;
}

int EvalCommand(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = LoadConfig(o);
  RequireFile(o.checkpoint, "--checkpoint");
  if (!o.data.empty() && !fs::is_directory(o.data)) throw UsageError("missing --data directory " + o.data);
  Checkpoint ck;
  try {
    ck = LoadCheckpoint(o.checkpoint);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const ModelConfig &mc = ck.model->config();
  if (mc.n_bands != cfg.model.n_bands) throw UsageError("checkpoint expects a different front end than the config");
  const fs::path dir = PrepareOut(o.out);
  const int max_gap = o.max_gap.value_or(cfg.train.max_gap_segments);
  const FeatureBank dev = FeaturesFor(cfg, SessionsFor(cfg, Split::kDev, o.data));
  const FeatureBank eval = FeaturesFor(cfg, SessionsFor(cfg, Split::kEval, o.data));
  const Evaluation e = Evaluate(*ck.model, dev, eval, max_gap);
  WriteScoredJsonlFile(e.dev_scores, (dir / "dev_scores.jsonl").string());
  WriteScoredJsonlFile(e.eval_scores, (dir / "eval_scores.jsonl").string());
  {
    std::ofstream os(dir / "det_eval.csv", std::ios::binary);
    WriteDetCsv(DetSweep(e.eval_scores, max_gap), os);
  }
  ordered_json report;
  report["max_gap_segments"] = max_gap;
  report["dev"] = ReportJson(e.dev);
  report["eval"] = ReportJson(e.eval);
  WriteText(dir / "metrics.json", report.dump(2) + "\n");
  out << report.dump(2) << '\n';
  return kExitOk;
}

int ScoreCommand(const Options &o, std::ostream &out) {
  RequireFile(o.scores, "--scores");
  ScoredSegments scored;
  try {
    scored = ReadScoredJsonlFile(o.scores);
    CheckBothClasses(scored);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
  const int max_gap = o.max_gap.value_or(1);
  if (max_gap < 0) throw UsageError("--max-gap must be >= 0");
  const MetricsReport r = BestThresholdByDcf(scored, max_gap);
  ordered_json j = ReportJson(r);
  j["max_gap_segments"] = max_gap;
  if (!o.out.empty()) {
    const fs::path dir = PrepareOut(o.out);
    WriteText(dir / "metrics.json", j.dump(2) + "\n");
    std::ofstream os(dir / "det.csv", std::ios::binary);
    WriteDetCsv(DetSweep(scored, max_gap), os);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

void WriteKernelCsv(const fs::path &path, const Kernel2D &k) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(17);
  for (int t = 0; t < k.frames; ++t) {
    for (int f = 0; f < k.channels; ++f) os << (f ? "," : "") << k.at(t, f);
    os << '\n';
  }
}

int DumpKernels(const Options &o, std::ostream &out) {
  RequireFile(o.checkpoint, "--checkpoint");
  Checkpoint ck;
  try {
    ck = LoadCheckpoint(o.checkpoint);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const fs::path dir = PrepareOut(o.out);
  const Model &model = *ck.model;
  ordered_json kernels = ordered_json::array();
  int index = 0;
  auto dump = [&](const Kernel2D &k, ordered_json entry) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "kernel_%03d", index++);
    WriteKernelCsv(dir / (std::string(stem) + ".csv"), k);
    WriteKernelCsv(dir / (std::string(stem) + "_dft.csv"), KernelDftMagnitude(k));
    entry["file"] = std::string(stem) + ".csv";
    entry["dft_file"] = std::string(stem) + "_dft.csv";
    kernels.push_back(entry);
  };
  if (model.has_strf()) {
    const KernelBank bank = model.strf_layer().Bank();
    for (size_t i = 0; i < bank.params.size(); ++i) {
      const StrfParams &p = bank.params[i];
      ordered_json e;
      e["type"] = "strf";
      e["spectral_mod"] = p.spectral_mod;
      e["temporal_mod_hz"] = p.temporal_mod;
      e["spectral_phase"] = p.spectral_phase;
      e["temporal_phase"] = p.temporal_phase;
      e["direction"] = DriftName(p.direction);
      dump(bank.kernels[i], e);
    }
  }
  if (model.has_generic()) {
    for (const Param *p : model.Params()) {
      if (p->name != "first.generic.weight") continue;
      const int kt = model.config().KernelFrames(), kf = model.config().strf_channel_support;
      const size_t per = static_cast<size_t>(kt) * kf;
      for (int c = 0; c < model.config().n_generic; ++c) {
        Kernel2D k;
        k.frames = kt;
        k.channels = kf;
        k.values.assign(p->value.begin() + c * per, p->value.begin() + (c + 1) * per);
        ordered_json e;
        e["type"] = "generic";
        dump(k, e);
      }
    }
  }
  ordered_json manifest;
  manifest["checkpoint"] = fs::path(o.checkpoint).filename().string();
  manifest["kernels"] = kernels;
  WriteText(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << index << " kernels to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"STRF-constrained live speech detector: data synthesis, training and scoring", "strfnet"};
  app.require_subcommand(1);
  Options o;
  auto add_config = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "Experiment JSON config")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Override the experiment seed");
    sub->add_option("--set", o.overrides, "Override a config field, e.g. train.learning_rate=1e-3");
  };
  CLI::App *synth = app.add_subcommand("synth-data", "Synthesize train/dev/eval sessions");
  add_config(synth);
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--snr", o.snr, "Fix every session's SNR (dB)");

  CLI::App *train = app.add_subcommand("train", "Train a model and keep the best-dev checkpoint");
  add_config(train);
  train->add_option("--out", o.out, "Output directory")->required();
  train->add_option("--data", o.data, "Directory written by synth-data (default: synthesize in memory)");
  train->add_option("--snr", o.snr, "Fix every session's SNR (dB)");
  train->add_option("--max-gap", o.max_gap, "Postprocessing gap in segments");

  CLI::App *eval = app.add_subcommand("eval", "Score dev and eval; dev-selected threshold applied to eval");
  add_config(eval);
  eval->add_option("--checkpoint", o.checkpoint, "Checkpoint JSON")->required();
  eval->add_option("--out", o.out, "Output directory")->required();
  eval->add_option("--data", o.data, "Directory written by synth-data (default: synthesize in memory)");
  eval->add_option("--snr", o.snr, "Fix every session's SNR (dB)");
  eval->add_option("--max-gap", o.max_gap, "Postprocessing gap in segments");

  CLI::App *score = app.add_subcommand("score", "Metrics for a scores JSONL file");
  score->add_option("--scores", o.scores, "Scores JSONL")->required();
  score->add_option("--max-gap", o.max_gap, "Postprocessing gap in segments (default 1)");
  score->add_option("--out", o.out, "Optional output directory for metrics.json and det.csv");

  CLI::App *dump = app.add_subcommand("dump-kernels", "Write first-layer kernels and their DFT magnitudes");
  dump->add_option("--checkpoint", o.checkpoint, "Checkpoint JSON")->required();
  dump->add_option("--out", o.out, "Output directory")->required();

  std::vector<const char *> argv{"strfnet"};
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::string command = args.empty() ? "" : args.front();
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    ReportError(err, "usage", command, e.what());
    return kExitUsage;
  }
  try {
    if (synth->parsed()) return SynthData(o, out);
    if (train->parsed()) return TrainCommand(o, out);
    if (eval->parsed()) return EvalCommand(o, out);
    if (score->parsed()) return ScoreCommand(o, out);
    if (dump->parsed()) return DumpKernels(o, out);
  } catch (const UsageError &e) {
    ReportError(err, "usage", command, e.what());
    return kExitUsage;
  } catch (const std::exception &e) {
    ReportError(err, "runtime", command, e.what());
    return kExitRuntime;
  }
  ReportError(err, "usage", command, "no subcommand");
  return kExitUsage;
}

}  // namespace strfnet
