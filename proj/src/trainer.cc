// src/trainer.cc

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

#include "strfnet/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace strfnet {

namespace {
// Stream ids under the training seed.
enum TrainStream : uint64_t { kSamplingPlan = 1, kExample = 2 };

void CheckBothLabels(const SegmentSource &source, const char *what) {
  bool live = false, distractor = false;
  for (size_t i = 0; i < source.size(); ++i) (source.Label(i) == kLiveClass ? live : distractor) = true;
  if (!live || !distractor) throw std::invalid_argument(std::string(what) + " data must contain both classes");
}
}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw std::invalid_argument("learning_rate must be positive");
  if (batch_size < 1 || max_epochs < 1 || segments_per_epoch < 1)
    throw std::invalid_argument("batch_size, max_epochs and segments_per_epoch must be positive");
  if (patience_epochs < 1) throw std::invalid_argument("patience_epochs must be >= 1");
  if (snr_grid.empty()) throw std::invalid_argument("snr_grid must not be empty");
  for (double s : snr_grid)
    if (!std::isfinite(s)) throw std::invalid_argument("snr_grid entries must be finite");
  if (max_gap_segments < 0) throw std::invalid_argument("max_gap_segments must be >= 0");
}

int TrainConfig::StepsPerEpoch() const { return (segments_per_epoch + batch_size - 1) / batch_size; }

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

bool EarlyStopping::Update(int epoch, double metric) {
  if (metric < best_) {
    best_ = metric;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

Spectrogram SegmentFeatures(std::span<const double> samples, int sample_rate, const FrontendConfig &fe) {
  Waveform w;
  w.samples.assign(samples.begin(), samples.end());
  w.sample_rate = sample_rate;
  return NormalizeSegment(LogMelSpectrogram(w, fe));
}

FeatureBank BuildFeatureBank(const std::vector<Session> &sessions, const FrontendConfig &fe, double segment_s,
                             double live_overlap_threshold) {
  FeatureBank bank;
  std::vector<std::pair<size_t, size_t>> where;  // (session, first sample)
  for (size_t s = 0; s < sessions.size(); ++s) {
    ScoredSegments segs = SegmentSession(sessions[s].timeline, segment_s, live_overlap_threshold);
    for (ScoredSegment &seg : segs) {
      seg.series = static_cast<int>(s);
      where.emplace_back(s, static_cast<size_t>(std::llround(seg.start_s * sessions[s].wave.sample_rate)));
      bank.segments.push_back(seg);
    }
  }
  for (size_t i = 0; i < where.size(); ++i) {
    const Waveform &w = sessions[where[i].first].wave;
    if (where[i].second + static_cast<size_t>(std::llround(segment_s * w.sample_rate)) > w.samples.size())
      throw std::runtime_error("segment runs past the end of its session");
  }
  bank.features.resize(where.size());
  const int n = static_cast<int>(where.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n; ++i) {
    const Waveform &w = sessions[where[i].first].wave;
    const size_t len = static_cast<size_t>(std::llround(segment_s * w.sample_rate));
    const size_t begin = where[i].second;
    bank.features[i] = SegmentFeatures(std::span<const double>(w.samples).subspan(begin, len), w.sample_rate, fe);
  }
  return bank;
}

MixingSource::MixingSource(std::vector<Waveform> targets, std::vector<int> labels, std::vector<Waveform> noise,
                           std::vector<double> snr_grid, FrontendConfig fe)
    : targets_(std::move(targets)), labels_(std::move(labels)), noise_(std::move(noise)),
      snr_grid_(std::move(snr_grid)), fe_(fe) {
  if (targets_.size() != labels_.size()) throw std::invalid_argument("targets and labels differ in count");
  if (noise_.empty()) throw std::invalid_argument("mixing source needs at least one noise recording");
  if (snr_grid_.empty()) throw std::invalid_argument("mixing source needs a nonempty SNR grid");
  for (const Waveform &w : noise_)
    if (w.samples.empty()) throw std::invalid_argument("empty noise recording");
}

Spectrogram MixingSource::Get(size_t i, RandomSource *rng) const {
  const Waveform &target = targets_.at(i);
  const Waveform &noise = noise_[rng->UniformInt(0, static_cast<int64_t>(noise_.size()) - 1)];
  Waveform excerpt;
  excerpt.sample_rate = noise.sample_rate;
  excerpt.samples.resize(target.samples.size());
  const size_t n = noise.samples.size();
  const size_t offset = n > target.samples.size()
                            ? static_cast<size_t>(rng->UniformInt(0, static_cast<int64_t>(n - target.samples.size())))
                            : 0;
  for (size_t k = 0; k < excerpt.samples.size(); ++k) excerpt.samples[k] = noise.samples[(offset + k) % n];
  const double snr = snr_grid_[rng->UniformInt(0, static_cast<int64_t>(snr_grid_.size()) - 1)];
  const Waveform mixed = MixAtSnr(target, excerpt, snr);
  return SegmentFeatures(mixed.samples, mixed.sample_rate, fe_);
}

std::string EpochLogJson(const EpochLog &log, bool with_elapsed) {
  nlohmann::ordered_json j;
  j["epoch"] = log.epoch;
  j["train_loss"] = log.train_loss;
  j["dev_dcf"] = log.dev_dcf;
  j["dev_eer"] = log.dev_eer;
  j["lr"] = log.learning_rate;
  if (with_elapsed) j["elapsed_s"] = log.elapsed_s;
  return j.dump();
}

ScoredSegments ScoreBank(const Model &model, const FeatureBank &bank, int batch_size) {
  ScoredSegments out = bank.segments;
  for (size_t start = 0; start < bank.features.size(); start += batch_size) {
    const size_t stop = std::min(bank.features.size(), start + batch_size);
    const std::vector<Spectrogram> batch(bank.features.begin() + start, bank.features.begin() + stop);
    const std::vector<double> p = model.PredictLive(batch);
    for (size_t i = start; i < stop; ++i) out[i].score = p[i - start];
  }
  return out;
}

TrainResult Train(const ModelConfig &model_config, const SegmentSource &train, const FeatureBank &dev,
                  const TrainConfig &config, const AugmentPolicy &augment, std::ostream *log_out) {
  config.Validate();
  CheckBothLabels(train, "training");
  CheckBothLabels(dev, "development");

  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < train.size(); ++i) by_class[train.Label(i)].push_back(i);

  Model model(model_config, config.seed);
  AdamConfig ac;
  ac.learning_rate = config.learning_rate;
  Adam adam(ac);
  EarlyStopping stopper(config.patience_epochs);
  TrainResult result;
  const auto t0 = std::chrono::steady_clock::now();

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    // Sampling plan: classes alternate, indices uniform within a class, then
    // the whole plan is shuffled.
    RandomSource plan_rng = RandomSource::Derive(config.seed, {kSamplingPlan, static_cast<uint64_t>(epoch)});
    std::vector<size_t> plan(config.segments_per_epoch);
    for (int k = 0; k < config.segments_per_epoch; ++k) {
      const std::vector<size_t> &pool = by_class[k % 2];
      plan[k] = pool[plan_rng.UniformInt(0, static_cast<int64_t>(pool.size()) - 1)];
    }
    std::shuffle(plan.begin(), plan.end(), plan_rng.engine());

    double loss_sum = 0.0;
    for (int start = 0; start < config.segments_per_epoch; start += config.batch_size) {
      const int stop = std::min(config.segments_per_epoch, start + config.batch_size);
      std::vector<Spectrogram> specs(stop - start);
      std::vector<int> labels(stop - start);
#pragma omp parallel for schedule(dynamic, 1)
      for (int k = start; k < stop; ++k) {
        RandomSource r = RandomSource::Derive(
            config.seed, {kExample, static_cast<uint64_t>(epoch), static_cast<uint64_t>(k)});
        Spectrogram s = train.Get(plan[k], &r);
        if (config.augment) s = SpecAugment(s, augment, &r);
        specs[k - start] = std::move(s);
        labels[k - start] = train.Label(plan[k]);
      }
      loss_sum += model.ForwardBackward(specs, labels) * (stop - start);
      adam.Step(model.Params());
    }

    const MetricsReport dev_report = BestThresholdByDcf(ScoreBank(model, dev), config.max_gap_segments);
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / config.segments_per_epoch;
    entry.dev_dcf = dev_report.dcf;
    entry.dev_eer = dev_report.eer;
    entry.learning_rate = config.learning_rate;
    entry.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.log.push_back(entry);
    if (log_out) *log_out << EpochLogJson(entry, false) << '\n' << std::flush;

    if (stopper.Update(epoch, dev_report.dcf)) {
      result.best_model = std::make_unique<Model>(model);
      result.best_optimizer = adam.state();
      result.best_epoch = epoch;
      result.best_dev_dcf = dev_report.dcf;
    }
    result.epochs_run = epoch;
    if (stopper.ShouldStop()) break;
  }
  return result;
}

Evaluation EvaluateScores(const ScoredSegments &dev, const ScoredSegments &eval, int max_gap) {
  Evaluation e;
  e.dev_scores = dev;
  e.eval_scores = eval;
  e.dev = BestThresholdByDcf(dev, max_gap);
  e.eval = ReportAtThreshold(eval, e.dev.threshold, max_gap);
  return e;
}

Evaluation Evaluate(const Model &model, const FeatureBank &dev, const FeatureBank &eval, int max_gap) {
  return EvaluateScores(ScoreBank(model, dev), ScoreBank(model, eval), max_gap);
}

}  // namespace strfnet
