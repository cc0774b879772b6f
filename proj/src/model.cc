// src/model.cc

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

#include "strfnet/model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace strfnet {

namespace {
// Items processed concurrently in the sequence stage; each gets its own
// gradient buffer, reduced in item order afterwards.
constexpr int kSequenceGroup = 8;

enum InitStream : uint64_t { kInitGeneric = 1, kInitStrf, kInitBlocks, kInitFc, kInitGru, kInitAttention, kInitHead };
}  // namespace

const char *FirstLayerName(FirstLayerKind k) {
  switch (k) {
    case FirstLayerKind::kGeneric: return "generic";
    case FirstLayerKind::kStrf: return "strf";
    case FirstLayerKind::kHybrid: return "hybrid";
  }
  return "?";
}

FirstLayerKind FirstLayerFromName(const std::string &name) {
  if (name == "generic") return FirstLayerKind::kGeneric;
  if (name == "strf") return FirstLayerKind::kStrf;
  if (name == "hybrid") return FirstLayerKind::kHybrid;
  throw std::invalid_argument("unknown first layer kind: " + name);
}

void ModelConfig::ForFrontend(const FrontendConfig &fe, int sample_rate) {
  n_bands = fe.n_mel_bands;
  frame_rate = static_cast<double>(sample_rate) / fe.HopSamples(sample_rate);
  const MelFilterbank fb = ComputeMelFilterbank(fe.n_mel_bands, fe.dft_size, sample_rate);
  channels_per_octave = ChannelsPerOctave(fb.centers_hz, sample_rate);
}

int ModelConfig::KernelFrames() const {
  return static_cast<int>(std::lround(strf_time_support_s * frame_rate));
}

int ModelConfig::FirstLayerChannels() const { return n_generic + n_strf; }

int ModelConfig::OutputBands() const {
  int f = n_bands - strf_channel_support + 1;
  for (int b = 0; b < n_residual_blocks; ++b) f = (f - 1) / residual_stride_bands + 1;
  return f;
}

void ModelConfig::Validate() const {
  if (n_generic < 0 || n_strf < 0) throw std::invalid_argument("kernel counts must be >= 0");
  switch (first_layer) {
    case FirstLayerKind::kGeneric:
      if (n_generic < 1 || n_strf != 0) throw std::invalid_argument("generic first layer needs n_generic >= 1 and n_strf = 0");
      break;
    case FirstLayerKind::kStrf:
      if (n_strf < 1 || n_generic != 0) throw std::invalid_argument("STRF first layer needs n_strf >= 1 and n_generic = 0");
      break;
    case FirstLayerKind::kHybrid:
      if (n_strf < 1 || n_generic < 1) throw std::invalid_argument("hybrid first layer needs both kernel kinds");
      break;
  }
  if (n_bands < strf_channel_support) throw std::invalid_argument("fewer bands than the kernel channel support");
  if (KernelFrames() < 1) throw std::invalid_argument("kernel time support shorter than one frame");
  if (n_residual_blocks < 0 || residual_channels < 1 || residual_stride_bands < 1 || fc_dim < 1 ||
      gru_hidden < 1 || gru_layers < 1 || attention_dim < 1 || mlp_hidden < 1 || n_outputs != 2)
    throw std::invalid_argument("invalid model dimensions");
}

struct Model::SequenceTape {
  Matrix flat, fc_out;
  std::vector<Matrix> layer_in;
  std::vector<GruDirectionCache> gru;
  Matrix states;
  AttentionCache attention;
  std::vector<double> pooled;
  MlpCache mlp;
};

struct Model::Tape {
  Batch input;
  BatchNormCache bn0;
  Batch a0;
  std::vector<ResidualCache> blocks;
  std::vector<SequenceTape> items;
};

Model::Model(const ModelConfig &config, uint64_t seed) : config_(config) {
  config_.Validate();
  fir_ = std::make_shared<const HilbertFir>(DesignHilbertFir(config_.hilbert_dft_size));
  const int kf = config_.KernelFrames(), kb = config_.strf_channel_support;

  if (has_generic()) {
    generic_ = Conv2dLayer("first.generic", ConvGeometry::SameFramesValidBands(1, config_.n_generic, kf, kb), false);
    RandomSource rng = RandomSource::Derive(seed, {kInitGeneric});
    generic_.InitHe(&rng);
  }
  if (has_strf()) {
    RandomSource rng = RandomSource::Derive(seed, {kInitStrf});
    StrfGridConfig grid{config_.strf_time_support_s, config_.strf_channel_support, config_.frame_rate,
                        config_.channels_per_octave};
    strf_ = StrfConvLayer("first.strf", InitBank(config_.n_strf, grid, &rng, *fir_), fir_);
    strf_.strf.trainable = config_.learnable_strf;
  }
  bn0_ = BatchNormLayer("first.bn", config_.FirstLayerChannels());

  {
    RandomSource rng = RandomSource::Derive(seed, {kInitBlocks});
    int in_c = config_.FirstLayerChannels();
    for (int b = 0; b < config_.n_residual_blocks; ++b) {
      blocks_.emplace_back("block" + std::to_string(b), in_c, config_.residual_channels,
                           config_.residual_stride_bands);
      blocks_.back().Init(&rng);
      in_c = config_.residual_channels;
    }
  }
  const int conv_channels = config_.n_residual_blocks > 0 ? config_.residual_channels : config_.FirstLayerChannels();
  {
    RandomSource rng = RandomSource::Derive(seed, {kInitFc});
    fc_ = LinearLayer("fc", conv_channels * config_.OutputBands(), config_.fc_dim);
    fc_.InitXavier(&rng);
  }
  {
    RandomSource rng = RandomSource::Derive(seed, {kInitGru});
    int in_dim = config_.fc_dim;
    for (int l = 0; l < config_.gru_layers; ++l) {
      const std::string n = "gru" + std::to_string(l);
      gru_.emplace_back(n + ".fwd", in_dim, config_.gru_hidden, false);
      gru_.emplace_back(n + ".bwd", in_dim, config_.gru_hidden, true);
      gru_[gru_.size() - 2].Init(&rng);
      gru_.back().Init(&rng);
      in_dim = 2 * config_.gru_hidden;
    }
  }
  {
    RandomSource rng = RandomSource::Derive(seed, {kInitAttention});
    attention_ = AttentionPool("attention", 2 * config_.gru_hidden, config_.attention_dim);
    attention_.Init(&rng);
  }
  {
    RandomSource rng = RandomSource::Derive(seed, {kInitHead});
    head_ = MlpHead("head", 2 * config_.gru_hidden, config_.mlp_hidden, config_.n_outputs);
    head_.Init(&rng);
  }
  CollectSequenceParams();
}

Model::Model(const Model &other) { *this = other; }

Model &Model::operator=(const Model &other) {
  if (this == &other) return *this;
  config_ = other.config_;
  fir_ = other.fir_;
  generic_ = other.generic_;
  strf_ = other.strf_;
  bn0_ = other.bn0_;
  blocks_ = other.blocks_;
  fc_ = other.fc_;
  gru_ = other.gru_;
  attention_ = other.attention_;
  head_ = other.head_;
  CollectSequenceParams();
  return *this;
}

void Model::CollectSequenceParams() {
  seq_params_.clear();
  for (Param *p : fc_.Params()) seq_params_.push_back(p);
  for (GruDirection &g : gru_)
    for (Param *p : g.Params()) seq_params_.push_back(p);
  for (Param *p : attention_.Params()) seq_params_.push_back(p);
  for (Param *p : head_.Params()) seq_params_.push_back(p);
  seq_offsets_.clear();
  seq_size_ = 0;
  for (Param *p : seq_params_) {
    seq_offsets_.push_back(seq_size_);
    seq_size_ += p->size();
  }
}

std::vector<Param *> Model::Params() {
  std::vector<Param *> out;
  if (has_generic())
    for (Param *p : generic_.Params()) out.push_back(p);
  if (has_strf())
    for (Param *p : strf_.Params()) out.push_back(p);
  for (Param *p : bn0_.Params()) out.push_back(p);
  for (ResidualBlock &b : blocks_)
    for (Param *p : b.Params()) out.push_back(p);
  for (Param *p : seq_params_) out.push_back(p);
  return out;
}

std::vector<const Param *> Model::Params() const {
  std::vector<const Param *> out;
  for (Param *p : const_cast<Model *>(this)->Params()) out.push_back(p);
  return out;
}

std::vector<BatchNormLayer *> Model::Norms() {
  std::vector<BatchNormLayer *> out{&bn0_};
  for (ResidualBlock &b : blocks_)
    for (BatchNormLayer *n : b.Norms()) out.push_back(n);
  return out;
}

std::vector<const BatchNormLayer *> Model::Norms() const {
  std::vector<const BatchNormLayer *> out;
  for (BatchNormLayer *n : const_cast<Model *>(this)->Norms()) out.push_back(n);
  return out;
}

size_t Model::ParameterCount() const {
  size_t n = 0;
  for (const Param *p : Params())
    if (p->trainable) n += p->size();
  return n;
}

void Model::ZeroGrad() {
  for (Param *p : Params()) p->ZeroGrad();
}

Batch Model::ToBatch(const std::vector<Spectrogram> &specs) const {
  Batch b;
  b.reserve(specs.size());
  for (const Spectrogram &s : specs) {
    if (s.num_bands != config_.n_bands)
      throw std::invalid_argument("spectrogram has " + std::to_string(s.num_bands) + " bands, model expects " +
                                  std::to_string(config_.n_bands));
    if (s.num_frames < 1) throw std::invalid_argument("empty spectrogram");
    Tensor3 t(1, s.num_frames, s.num_bands);
    t.data = s.values;
    b.push_back(std::move(t));
  }
  return b;
}

namespace {
Batch ConcatChannels(const Batch &a, const Batch &b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Batch out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    out[i] = Tensor3(a[i].channels + b[i].channels, a[i].frames, a[i].bands);
    std::copy(a[i].data.begin(), a[i].data.end(), out[i].data.begin());
    std::copy(b[i].data.begin(), b[i].data.end(), out[i].data.begin() + a[i].data.size());
  }
  return out;
}

void SplitChannels(const Batch &x, int first, Batch *a, Batch *b) {
  a->resize(x.size());
  b->resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const int second = x[i].channels - first;
    (*a)[i] = Tensor3(first, x[i].frames, x[i].bands);
    (*b)[i] = Tensor3(second, x[i].frames, x[i].bands);
    std::copy(x[i].data.begin(), x[i].data.begin() + (*a)[i].data.size(), (*a)[i].data.begin());
    std::copy(x[i].data.begin() + (*a)[i].data.size(), x[i].data.end(), (*b)[i].data.begin());
  }
}
}  // namespace

void Model::ConvStage(const Batch &in, bool training, bool update_running, Tape *tape, Batch *out) {
  Batch g, s;
  if (has_generic()) generic_.Forward(in, &g);
  if (has_strf()) strf_.Forward(in, &s);
  Batch first = ConcatChannels(g, s);
  Batch x;
  bn0_.Forward(first, &x, training, update_running, tape ? &tape->bn0 : nullptr);
  ReluInPlace(&x);
  if (tape) {
    tape->a0 = x;
    tape->blocks.resize(blocks_.size());
  }
  for (size_t b = 0; b < blocks_.size(); ++b) {
    Batch y;
    blocks_[b].Forward(x, &y, training, update_running, tape ? &tape->blocks[b] : nullptr);
    x = std::move(y);
  }
  *out = std::move(x);
}

void Model::ConvStageEval(const Batch &in, Batch *out) const {
  Batch g, s;
  if (has_generic()) generic_.Forward(in, &g);
  if (has_strf()) strf_.Forward(in, &s);
  Batch x;
  bn0_.Apply(ConcatChannels(g, s), &x);
  ReluInPlace(&x);
  for (const ResidualBlock &block : blocks_) {
    Batch y;
    block.ForwardEval(x, &y);
    x = std::move(y);
  }
  *out = std::move(x);
}

Matrix Model::Flatten(const Tensor3 &x) const {
  Matrix m(x.frames, x.channels * x.bands);
  for (int c = 0; c < x.channels; ++c)
    for (int t = 0; t < x.frames; ++t)
      for (int f = 0; f < x.bands; ++f) m.at(t, c * x.bands + f) = x.at(c, t, f);
  return m;
}

Tensor3 Model::Unflatten(const Matrix &m, int frames) const {
  const int bands = config_.OutputBands();
  const int channels = m.cols / bands;
  Tensor3 x(channels, frames, bands);
  for (int c = 0; c < channels; ++c)
    for (int t = 0; t < frames; ++t)
      for (int f = 0; f < bands; ++f) x.at(c, t, f) = m.at(t, c * bands + f);
  return x;
}

std::vector<double> Model::SequenceForward(const Matrix &flat, SequenceTape *tape) const {
  Matrix y;
  fc_.Forward(flat, &y);
  for (double &v : y.data) v = v > 0.0 ? v : 0.0;
  if (tape) {
    tape->flat = flat;
    tape->fc_out = y;
    tape->layer_in.resize(config_.gru_layers);
    tape->gru.resize(gru_.size());
  }
  Matrix x = std::move(y);
  const int H = config_.gru_hidden;
  for (int l = 0; l < config_.gru_layers; ++l) {
    Matrix of, ob;
    gru_[2 * l].Forward(x, &of, tape ? &tape->gru[2 * l] : nullptr);
    gru_[2 * l + 1].Forward(x, &ob, tape ? &tape->gru[2 * l + 1] : nullptr);
    Matrix cat(x.rows, 2 * H);
    for (int t = 0; t < x.rows; ++t) {
      std::copy_n(of.row(t), H, cat.row(t));
      std::copy_n(ob.row(t), H, cat.row(t) + H);
    }
    if (tape) tape->layer_in[l] = std::move(x);
    x = std::move(cat);
  }
  std::vector<double> pooled = attention_.Forward(x, tape ? &tape->attention : nullptr);
  std::vector<double> probs = head_.Forward(pooled, tape ? &tape->mlp : nullptr);
  if (tape) {
    tape->states = std::move(x);
    tape->pooled = std::move(pooled);
  }
  return probs;
}

Matrix Model::SequenceBackward(const SequenceTape &tape, std::span<const double> dlogits,
                               std::span<double> grads) const {
  size_t k = 0;
  auto next = [&]() {
    std::span<double> s = grads.subspan(seq_offsets_[k], seq_params_[k]->size());
    ++k;
    return s;
  };
  auto fc_w = next(), fc_b = next();
  std::vector<std::array<std::span<double>, 4>> gru_spans;
  for (size_t g = 0; g < gru_.size(); ++g) gru_spans.push_back({next(), next(), next(), next()});
  auto att_w = next(), att_b = next(), att_v = next();
  auto h_w1 = next(), h_b1 = next(), h_w2 = next(), h_b2 = next();

  std::vector<double> dpooled(tape.pooled.size());
  head_.Backward(tape.pooled, dlogits, tape.mlp, dpooled, h_w1, h_b1, h_w2, h_b2);
  Matrix dstates;
  attention_.Backward(tape.states, dpooled, tape.attention, &dstates, att_w, att_b, att_v);

  const int H = config_.gru_hidden;
  for (int l = config_.gru_layers - 1; l >= 0; --l) {
    const Matrix &x = tape.layer_in[l];
    Matrix dof(x.rows, H), dob(x.rows, H);
    for (int t = 0; t < x.rows; ++t) {
      std::copy_n(dstates.row(t), H, dof.row(t));
      std::copy_n(dstates.row(t) + H, H, dob.row(t));
    }
    Matrix dx1, dx2;
    const auto &sf = gru_spans[2 * l];
    const auto &sb = gru_spans[2 * l + 1];
    gru_[2 * l].Backward(x, dof, tape.gru[2 * l], &dx1, sf[0], sf[1], sf[2], sf[3]);
    gru_[2 * l + 1].Backward(x, dob, tape.gru[2 * l + 1], &dx2, sb[0], sb[1], sb[2], sb[3]);
    for (size_t j = 0; j < dx1.data.size(); ++j) dx1.data[j] += dx2.data[j];
    dstates = std::move(dx1);
  }
  for (size_t j = 0; j < dstates.data.size(); ++j)
    if (!(tape.fc_out.data[j] > 0.0)) dstates.data[j] = 0.0;
  Matrix dflat;
  fc_.Backward(tape.flat, dstates, &dflat, fc_w, fc_b);
  return dflat;
}

std::vector<double> Model::PredictLive(const std::vector<Spectrogram> &batch) const {
  Batch conv;
  ConvStageEval(ToBatch(batch), &conv);
  std::vector<double> out(batch.size());
  const int n = static_cast<int>(batch.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = SequenceForward(Flatten(conv[i]), nullptr)[kLiveClass];
  return out;
}

double Model::PredictLive(const Spectrogram &spec) const { return PredictLive(std::vector<Spectrogram>{spec})[0]; }

double Model::Run(const std::vector<Spectrogram> &batch, const std::vector<int> &labels, bool backward,
                  bool update_running) {
  if (batch.size() != labels.size() || batch.empty())
    throw std::invalid_argument("batch and label counts must match and be nonzero");
  for (int y : labels)
    if (y != kLiveClass && y != kDistractorClass) throw std::invalid_argument("label must be 0 or 1");

  Tape tape;
  Batch conv;
  tape.input = ToBatch(batch);
  ConvStage(tape.input, true, update_running, backward ? &tape : nullptr, &conv);

  const int n = static_cast<int>(batch.size());
  std::vector<double> losses(n);
  Batch dconv(n);
  if (backward) {
    ZeroGrad();
    tape.items.resize(n);
  }
  std::vector<std::vector<double>> buffers(std::min(n, kSequenceGroup));
  for (int start = 0; start < n; start += kSequenceGroup) {
    const int stop = std::min(n, start + kSequenceGroup);
#pragma omp parallel for schedule(static)
    for (int i = start; i < stop; ++i) {
      SequenceTape *st = backward ? &tape.items[i] : nullptr;
      SequenceTape local;
      const std::vector<double> probs = SequenceForward(Flatten(conv[i]), backward ? st : &local);
      losses[i] = -std::log(std::max(probs[labels[i]], 1e-300));
      if (!backward) continue;
      std::vector<double> dlogits(probs);
      dlogits[labels[i]] -= 1.0;
      for (double &d : dlogits) d /= n;
      std::vector<double> &buf = buffers[i - start];
      buf.assign(seq_size_, 0.0);
      dconv[i] = Unflatten(SequenceBackward(*st, dlogits, buf), conv[i].frames);
    }
    if (backward) {
      for (int i = start; i < stop; ++i) {
        const std::vector<double> &buf = buffers[i - start];
        for (size_t p = 0; p < seq_params_.size(); ++p) {
          double *g = seq_params_[p]->grad.data();
          const double *src = buf.data() + seq_offsets_[p];
          for (size_t j = 0; j < seq_params_[p]->size(); ++j) g[j] += src[j];
        }
      }
    }
  }
  double loss = 0.0;
  for (double l : losses) loss += l;
  loss /= n;
  if (!backward) return loss;

  Batch g = std::move(dconv);
  for (int b = static_cast<int>(blocks_.size()) - 1; b >= 0; --b) {
    Batch gin;
    blocks_[b].Backward(g, tape.blocks[b], &gin);
    g = std::move(gin);
  }
  ReluBackwardInPlace(tape.a0, &g);
  Batch gfirst;
  bn0_.Backward(g, tape.bn0, &gfirst);
  Batch gg, gs;
  if (has_generic() && has_strf()) {
    SplitChannels(gfirst, config_.n_generic, &gg, &gs);
  } else if (has_generic()) {
    gg = std::move(gfirst);
  } else {
    gs = std::move(gfirst);
  }
  if (has_generic()) generic_.Backward(tape.input, gg, nullptr);
  if (has_strf()) strf_.Backward(tape.input, gs);
  return loss;
}

double Model::ForwardBackward(const std::vector<Spectrogram> &batch, const std::vector<int> &labels,
                              bool update_running_stats) {
  return Run(batch, labels, true, update_running_stats);
}

double Model::TrainingLoss(const std::vector<Spectrogram> &batch, const std::vector<int> &labels) {
  return Run(batch, labels, false, false);
}

}  // namespace strfnet
