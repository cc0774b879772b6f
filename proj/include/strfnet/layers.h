// include/strfnet/layers.h

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

#ifndef STRFNET_LAYERS_H_
#define STRFNET_LAYERS_H_

#include <memory>
#include <span>
#include <vector>

#include "strfnet/conv.h"
#include "strfnet/random.h"
#include "strfnet/strf.h"
#include "strfnet/tensor.h"

namespace strfnet {

using Batch = std::vector<Tensor3>;

class Conv2dLayer {
 public:
  Conv2dLayer() = default;
  Conv2dLayer(const std::string &name, const ConvGeometry &g, bool with_bias);

  void InitHe(RandomSource *rng);
  void Forward(const Batch &in, Batch *out) const;
  // Accumulates parameter gradients; |grad_in| may be nullptr.
  void Backward(const Batch &in, const Batch &grad_out, Batch *grad_in);
  std::vector<Param *> Params();

  ConvGeometry geometry;
  Param weight;
  Param bias;  // empty when the layer has no bias
};

// Convolution whose kernels are STRFs. The learnable state is four scalars
// per kernel, stored as [Omega, omega, phi, theta] groups in |strf|.
class StrfConvLayer {
 public:
  StrfConvLayer() = default;
  StrfConvLayer(const std::string &name, const KernelBank &bank, std::shared_ptr<const HilbertFir> fir);

  StrfParams KernelParams(int i) const;
  KernelBank Bank() const;
  // Assembled kernels flattened in conv weight layout.
  std::vector<double> AssembledWeights() const;

  void Forward(const Batch &in, Batch *out) const;
  // Composes the conv kernel gradient with the STRF Jacobian.
  void Backward(const Batch &in, const Batch &grad_out);
  std::vector<Param *> Params();
  int NumKernels() const { return static_cast<int>(directions.size()); }

  ConvGeometry geometry;
  StrfGridConfig grid;
  std::vector<Drift> directions;
  Param strf;
  std::shared_ptr<const HilbertFir> fir;
};

struct BatchNormCache {
  std::vector<double> inv_std;
  Batch x_hat;
};

class BatchNormLayer {
 public:
  BatchNormLayer() = default;
  BatchNormLayer(const std::string &name, int channels);

  // Training mode normalizes with batch statistics (and optionally updates
  // the running averages); evaluation mode uses the running averages.
  void Forward(const Batch &in, Batch *out, bool training, bool update_running,
               BatchNormCache *cache);
  // Evaluation-mode normalization with the running averages.
  void Apply(const Batch &in, Batch *out) const;
  void Backward(const Batch &grad_out, const BatchNormCache &cache, Batch *grad_in);
  std::vector<Param *> Params();

  int channels = 0;
  double momentum = 0.9;
  double eps = 1e-5;
  Param gamma, beta;
  std::vector<double> running_mean, running_var;
};

void ReluInPlace(Batch *x);
// grad *= (activation > 0)
void ReluBackwardInPlace(const Batch &activation, Batch *grad);

struct ResidualCache {
  Batch input, h1, a1, h2, a2;
  BatchNormCache bn1, bn2;
};

// conv3x3 -> BN -> ReLU -> conv3x3 -> BN -> ReLU, plus an identity skip, or
// a 1x1 projection when the stride or channel count changes.
class ResidualBlock {
 public:
  ResidualBlock() = default;
  ResidualBlock(const std::string &name, int in_channels, int out_channels, int stride_bands);

  void Init(RandomSource *rng);
  void Forward(const Batch &in, Batch *out, bool training, bool update_running, ResidualCache *cache);
  void ForwardEval(const Batch &in, Batch *out) const;
  void Backward(const Batch &grad_out, const ResidualCache &cache, Batch *grad_in);
  std::vector<Param *> Params();
  std::vector<BatchNormLayer *> Norms() { return {&bn1, &bn2}; }
  bool has_projection() const { return !projection.weight.value.empty(); }

  Conv2dLayer conv1, conv2, projection;
  BatchNormLayer bn1, bn2;
};

// y = W x + b on each row of a frames x features matrix.
class LinearLayer {
 public:
  LinearLayer() = default;
  LinearLayer(const std::string &name, int in_dim, int out_dim);

  void InitXavier(RandomSource *rng);
  void Forward(const Matrix &x, Matrix *y) const;
  void Backward(const Matrix &x, const Matrix &dy, Matrix *dx, std::span<double> dw,
                std::span<double> db) const;
  std::vector<Param *> Params() { return {&weight, &bias}; }

  int in_dim = 0, out_dim = 0;
  Param weight, bias;
};

struct GruDirectionCache {
  Matrix h;  // frames + 1 rows; row 0 is the zero initial state
  Matrix r, z, n, hn;  // gates and W_hn h + b_hn per frame
};

// One direction of a GRU with gate order (reset, update, new):
//   r = s(W_ir x + b_ir + W_hr h + b_hr)
//   z = s(W_iz x + b_iz + W_hz h + b_hz)
//   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
//   h' = (1 - z) * n + z * h
class GruDirection {
 public:
  GruDirection() = default;
  GruDirection(const std::string &name, int input_dim, int hidden, bool reverse);

  void Init(RandomSource *rng);
  void Forward(const Matrix &x, Matrix *out, GruDirectionCache *cache) const;
  // grads spans follow Params() order.
  void Backward(const Matrix &x, const Matrix &dout, const GruDirectionCache &cache, Matrix *dx,
                std::span<double> dwi, std::span<double> dwh, std::span<double> dbi,
                std::span<double> dbh) const;
  std::vector<Param *> Params() { return {&w_input, &w_hidden, &b_input, &b_hidden}; }

  int input_dim = 0, hidden = 0;
  bool reverse = false;
  Param w_input, w_hidden, b_input, b_hidden;
};

struct AttentionCache {
  Matrix u;  // tanh projection per frame
  std::vector<double> weights;
};

// score_t = v . tanh(W s_t + b); weights = softmax(scores);
// output = sum_t weights_t s_t.
class AttentionPool {
 public:
  AttentionPool() = default;
  AttentionPool(const std::string &name, int dim, int attention_dim);

  void Init(RandomSource *rng);
  std::vector<double> Forward(const Matrix &states, AttentionCache *cache) const;
  void Backward(const Matrix &states, std::span<const double> dout, const AttentionCache &cache,
                Matrix *dstates, std::span<double> dw, std::span<double> db,
                std::span<double> dv) const;
  std::vector<Param *> Params() { return {&weight, &bias, &context}; }

  int dim = 0, attention_dim = 0;
  Param weight, bias, context;
};

// Softmax-weighted average of rows; |weights| receives the softmax.
std::vector<double> SoftmaxPool(const Matrix &states, std::span<const double> scores,
                                std::vector<double> *weights);

struct MlpCache {
  std::vector<double> hidden;
  std::vector<double> probs;
};

// One hidden ReLU layer, then a softmax over n_outputs logits.
class MlpHead {
 public:
  MlpHead() = default;
  MlpHead(const std::string &name, int in_dim, int hidden, int n_outputs);

  void Init(RandomSource *rng);
  std::vector<double> Forward(std::span<const double> x, MlpCache *cache) const;
  // |dlogits| is the gradient with respect to the pre-softmax logits.
  void Backward(std::span<const double> x, std::span<const double> dlogits, const MlpCache &cache,
                std::span<double> dx, std::span<double> dw1, std::span<double> db1,
                std::span<double> dw2, std::span<double> db2) const;
  std::vector<Param *> Params() { return {&w1, &b1, &w2, &b2}; }

  int in_dim = 0, hidden = 0, n_outputs = 2;
  Param w1, b1, w2, b2;
};

std::vector<double> Softmax(std::span<const double> logits);

}  // namespace strfnet

#endif  // STRFNET_LAYERS_H_
