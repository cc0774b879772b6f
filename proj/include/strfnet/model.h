// include/strfnet/model.h

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

#ifndef STRFNET_MODEL_H_
#define STRFNET_MODEL_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "strfnet/frontend.h"
#include "strfnet/layers.h"

namespace strfnet {

enum class FirstLayerKind { kGeneric, kStrf, kHybrid };

const char *FirstLayerName(FirstLayerKind k);
FirstLayerKind FirstLayerFromName(const std::string &name);

// Class index of the live-speech posterior in the two-way softmax.
constexpr int kLiveClass = 0;
constexpr int kDistractorClass = 1;

struct ModelConfig {
  FirstLayerKind first_layer = FirstLayerKind::kStrf;
  int n_generic = 0;
  int n_strf = 60;
  bool learnable_strf = true;

  // Input grid; see ForFrontend().
  int n_bands = 40;
  double frame_rate = 11025.0 / 110.0;
  double channels_per_octave = 8.0;

  double strf_time_support_s = 0.5;
  int strf_channel_support = 15;
  int hilbert_dft_size = 512;

  int n_residual_blocks = 4;
  int residual_channels = 64;
  int residual_stride_bands = 2;
  int fc_dim = 128;
  int gru_hidden = 256;
  int gru_layers = 2;
  int attention_dim = 128;
  int mlp_hidden = 128;
  int n_outputs = 2;

  // Fills the input-grid fields from a front end configuration.
  void ForFrontend(const FrontendConfig &fe, int sample_rate);
  void Validate() const;
  int KernelFrames() const;
  int FirstLayerChannels() const;
  // Bands left after the first layer and every residual block.
  int OutputBands() const;
};

class Model {
 public:
  Model(const ModelConfig &config, uint64_t seed);
  Model(const Model &other);
  Model &operator=(const Model &other);

  const ModelConfig &config() const { return config_; }

  // Every parameter in a fixed order (checkpoints and the optimizer rely on it).
  std::vector<Param *> Params();
  std::vector<const Param *> Params() const;
  // BN layers in a fixed order, for checkpointing running statistics.
  std::vector<BatchNormLayer *> Norms();
  std::vector<const BatchNormLayer *> Norms() const;

  // Trainable scalars only; an STRF kernel counts 4.
  size_t ParameterCount() const;

  // Evaluation mode: running BN statistics, no state change.
  std::vector<double> PredictLive(const std::vector<Spectrogram> &batch) const;
  double PredictLive(const Spectrogram &spec) const;

  // Training mode forward and backward. Gradients are zeroed first and hold
  // d(mean cross-entropy)/d(param) on return. Returns the mean loss.
  double ForwardBackward(const std::vector<Spectrogram> &batch, const std::vector<int> &labels,
                         bool update_running_stats = true);
  // Training-mode loss without gradients or running-stat updates.
  double TrainingLoss(const std::vector<Spectrogram> &batch, const std::vector<int> &labels);

  void ZeroGrad();

  bool has_generic() const { return config_.n_generic > 0; }
  bool has_strf() const { return config_.n_strf > 0; }
  const StrfConvLayer &strf_layer() const { return strf_; }
  StrfConvLayer &strf_layer() { return strf_; }

 private:
  struct SequenceTape;
  struct Tape;

  Batch ToBatch(const std::vector<Spectrogram> &specs) const;
  void ConvStage(const Batch &in, bool training, bool update_running, Tape *tape, Batch *out);
  void ConvStageEval(const Batch &in, Batch *out) const;
  Matrix Flatten(const Tensor3 &x) const;
  Tensor3 Unflatten(const Matrix &m, int frames) const;
  std::vector<double> SequenceForward(const Matrix &flat, SequenceTape *tape) const;
  // Writes parameter gradients into |grads| laid out per seq_params_ order.
  Matrix SequenceBackward(const SequenceTape &tape, std::span<const double> dlogits,
                          std::span<double> grads) const;
  void CollectSequenceParams();
  double Run(const std::vector<Spectrogram> &batch, const std::vector<int> &labels, bool backward,
             bool update_running);

  ModelConfig config_;
  std::shared_ptr<const HilbertFir> fir_;
  Conv2dLayer generic_;
  StrfConvLayer strf_;
  BatchNormLayer bn0_;
  std::vector<ResidualBlock> blocks_;
  LinearLayer fc_;
  std::vector<GruDirection> gru_;  // layer-major, forward then backward
  AttentionPool attention_;
  MlpHead head_;

  std::vector<Param *> seq_params_;
  std::vector<size_t> seq_offsets_;
  size_t seq_size_ = 0;
};

}  // namespace strfnet

#endif  // STRFNET_MODEL_H_
