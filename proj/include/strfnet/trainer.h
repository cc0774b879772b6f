// include/strfnet/trainer.h

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

#ifndef STRFNET_TRAINER_H_
#define STRFNET_TRAINER_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "strfnet/adam.h"
#include "strfnet/augment.h"
#include "strfnet/frontend.h"
#include "strfnet/metrics.h"
#include "strfnet/model.h"
#include "strfnet/sim.h"

namespace strfnet {

struct TrainConfig {
  double learning_rate = 1e-4;
  int batch_size = 64;
  int patience_epochs = 5;
  int max_epochs = 50;
  int segments_per_epoch = 2000;
  std::vector<double> snr_grid = {5, 10, 15, 20, 25, 30, 40};
  bool augment = true;
  int max_gap_segments = 1;
  uint64_t seed = 1;

  void Validate() const;
  // ceil(segments_per_epoch / batch_size)
  int StepsPerEpoch() const;
};

// Stops once the tracked metric has not improved (strictly decreased) for
// |patience| consecutive epochs.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);
  // Returns true when |metric| is a new best.
  bool Update(int epoch, double metric);
  bool ShouldStop() const { return since_best_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best() const { return best_; }

 private:
  int patience_;
  int best_epoch_ = -1;
  int since_best_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
};

// Labelled, normalized training examples.
class SegmentSource {
 public:
  virtual ~SegmentSource() = default;
  virtual size_t size() const = 0;
  virtual int Label(size_t i) const = 0;
  // Example |i|; sources with randomness (mixing) draw it from |rng|.
  virtual Spectrogram Get(size_t i, RandomSource *rng) const = 0;
};

// Precomputed normalized log-mel segments, in session order.
class FeatureBank : public SegmentSource {
 public:
  size_t size() const override { return features.size(); }
  int Label(size_t i) const override { return segments[i].live ? kLiveClass : kDistractorClass; }
  Spectrogram Get(size_t i, RandomSource *) const override { return features[i]; }

  std::vector<Spectrogram> features;
  ScoredSegments segments;  // timing and labels; scores unused
};

// Log-mel of one waveform excerpt, normalized per band.
Spectrogram SegmentFeatures(std::span<const double> samples, int sample_rate, const FrontendConfig &fe);

// Segments every session (series id = session index) and extracts features.
FeatureBank BuildFeatureBank(const std::vector<Session> &sessions, const FrontendConfig &fe, double segment_s,
                             double live_overlap_threshold);

// Clean examples mixed on the fly with a random noise excerpt at an SNR drawn
// from a grid.
class MixingSource : public SegmentSource {
 public:
  MixingSource(std::vector<Waveform> targets, std::vector<int> labels, std::vector<Waveform> noise,
               std::vector<double> snr_grid, FrontendConfig fe);
  size_t size() const override { return targets_.size(); }
  int Label(size_t i) const override { return labels_[i]; }
  Spectrogram Get(size_t i, RandomSource *rng) const override;

 private:
  std::vector<Waveform> targets_;
  std::vector<int> labels_;
  std::vector<Waveform> noise_;
  std::vector<double> snr_grid_;
  FrontendConfig fe_;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_dcf = 0.0;
  double dev_eer = 0.0;
  double learning_rate = 0.0;
  double elapsed_s = 0.0;
};

std::string EpochLogJson(const EpochLog &log, bool with_elapsed = true);

struct TrainResult {
  std::unique_ptr<Model> best_model;
  AdamState best_optimizer;
  int best_epoch = -1;
  double best_dev_dcf = 0.0;
  int epochs_run = 0;
  std::vector<EpochLog> log;
};

// Scores |bank| in order, filling a copy of its segments.
ScoredSegments ScoreBank(const Model &model, const FeatureBank &bank, int batch_size = 64);

// Trains from |seed|-initialized weights. Each epoch draws
// segments_per_epoch examples, alternating classes, and updates in batches;
// dev DCF after each epoch drives early stopping. The best-dev model is
// returned. Log lines are written to |log_out| as they are produced; they
// leave out wall-clock time so a rerun reproduces them byte for byte.
TrainResult Train(const ModelConfig &model_config, const SegmentSource &train, const FeatureBank &dev,
                  const TrainConfig &config, const AugmentPolicy &augment, std::ostream *log_out = nullptr);

struct Evaluation {
  MetricsReport dev;   // best-DCF threshold selected here
  MetricsReport eval;  // same threshold applied
  ScoredSegments dev_scores, eval_scores;
};

// The eval scores never influence the threshold.
Evaluation EvaluateScores(const ScoredSegments &dev, const ScoredSegments &eval, int max_gap);
Evaluation Evaluate(const Model &model, const FeatureBank &dev, const FeatureBank &eval, int max_gap);

}  // namespace strfnet

#endif  // STRFNET_TRAINER_H_
