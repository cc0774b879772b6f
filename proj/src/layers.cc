// src/layers.cc

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

#include "strfnet/layers.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strfnet {

namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void FillUniform(std::vector<double> *v, double limit, RandomSource *rng) {
  for (double &x : *v) x = rng->Uniform(-limit, limit);
}

// y += W x, W is rows x cols row-major.
void MatVecAdd(std::span<const double> w, int rows, int cols, const double *x, double *y) {
  for (int r = 0; r < rows; ++r) {
    const double *wr = w.data() + static_cast<size_t>(r) * cols;
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// y += W^T g
void MatTVecAdd(std::span<const double> w, int rows, int cols, const double *g, double *y) {
  for (int r = 0; r < rows; ++r) {
    const double *wr = w.data() + static_cast<size_t>(r) * cols;
    const double gr = g[r];
    if (gr == 0.0) continue;
    for (int c = 0; c < cols; ++c) y[c] += wr[c] * gr;
  }
}

// dW += g x^T
void OuterAdd(std::span<double> dw, int rows, int cols, const double *g, const double *x) {
  for (int r = 0; r < rows; ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    double *dr = dw.data() + static_cast<size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) dr[c] += gr * x[c];
  }
}

}  // namespace

// ---------------------------------------------------------------- Conv2dLayer

Conv2dLayer::Conv2dLayer(const std::string &name, const ConvGeometry &g, bool with_bias)
    : geometry(g), weight(name + ".weight", g.WeightCount()) {
  if (with_bias) bias = Param(name + ".bias", g.out_channels);
}

void Conv2dLayer::InitHe(RandomSource *rng) {
  const double fan_in = static_cast<double>(geometry.in_channels) * geometry.kernel_frames * geometry.kernel_bands;
  const double sd = std::sqrt(2.0 / fan_in);
  for (double &w : weight.value) w = rng->Normal(0.0, sd);
  std::fill(bias.value.begin(), bias.value.end(), 0.0);
}

void Conv2dLayer::Forward(const Batch &in, Batch *out) const {
  ConvForward(geometry, in, weight.value, bias.value, out);
}

void Conv2dLayer::Backward(const Batch &in, const Batch &grad_out, Batch *grad_in) {
  ConvBackward(geometry, in, weight.value, grad_out, grad_in, weight.grad, bias.grad);
}

std::vector<Param *> Conv2dLayer::Params() {
  std::vector<Param *> p{&weight};
  if (!bias.value.empty()) p.push_back(&bias);
  return p;
}

// -------------------------------------------------------------- StrfConvLayer

StrfConvLayer::StrfConvLayer(const std::string &name, const KernelBank &bank,
                             std::shared_ptr<const HilbertFir> fir_in)
    : strf(name + ".strf", 4 * bank.params.size()), fir(std::move(fir_in)) {
  if (bank.params.empty()) throw std::invalid_argument("empty STRF bank");
  const StrfParams &p0 = bank.params.front();
  grid = {p0.time_support_s, p0.channel_support, p0.frame_rate, p0.channels_per_octave};
  geometry = ConvGeometry::SameFramesValidBands(1, static_cast<int>(bank.params.size()), p0.Frames(),
                                                p0.channel_support);
  for (size_t i = 0; i < bank.params.size(); ++i) {
    const StrfParams &p = bank.params[i];
    strf.value[4 * i + kSpectralMod] = p.spectral_mod;
    strf.value[4 * i + kTemporalMod] = p.temporal_mod;
    strf.value[4 * i + kSpectralPhase] = p.spectral_phase;
    strf.value[4 * i + kTemporalPhase] = p.temporal_phase;
    directions.push_back(p.direction);
  }
}

StrfParams StrfConvLayer::KernelParams(int i) const {
  StrfParams p;
  p.spectral_mod = strf.value[4 * i + kSpectralMod];
  p.temporal_mod = strf.value[4 * i + kTemporalMod];
  p.spectral_phase = strf.value[4 * i + kSpectralPhase];
  p.temporal_phase = strf.value[4 * i + kTemporalPhase];
  p.direction = directions[i];
  p.time_support_s = grid.time_support_s;
  p.channel_support = grid.channel_support;
  p.frame_rate = grid.frame_rate;
  p.channels_per_octave = grid.channels_per_octave;
  return p;
}

KernelBank StrfConvLayer::Bank() const {
  KernelBank bank;
  for (int i = 0; i < NumKernels(); ++i) bank.params.push_back(KernelParams(i));
  bank.Refresh(*fir);
  return bank;
}

std::vector<double> StrfConvLayer::AssembledWeights() const {
  std::vector<double> w;
  w.reserve(geometry.WeightCount());
  for (int i = 0; i < NumKernels(); ++i) {
    const Kernel2D k = AssembleStrf(KernelParams(i), *fir);
    w.insert(w.end(), k.values.begin(), k.values.end());
  }
  return w;
}

void StrfConvLayer::Forward(const Batch &in, Batch *out) const {
  ConvForward(geometry, in, AssembledWeights(), {}, out);
}

void StrfConvLayer::Backward(const Batch &in, const Batch &grad_out) {
  const std::vector<double> weights = AssembledWeights();
  std::vector<double> kernel_grad(weights.size(), 0.0);
  ConvBackward(geometry, in, weights, grad_out, nullptr, kernel_grad, {});
  const size_t per = static_cast<size_t>(geometry.kernel_frames) * geometry.kernel_bands;
  for (int i = 0; i < NumKernels(); ++i) {
    const auto jac = StrfJacobian(KernelParams(i), *fir);
    const double *g = kernel_grad.data() + per * i;
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (size_t e = 0; e < per; ++e) s += g[e] * jac[j].values[e];
      strf.grad[4 * i + j] += s;
    }
  }
}

std::vector<Param *> StrfConvLayer::Params() { return {&strf}; }

// ------------------------------------------------------------- BatchNormLayer

BatchNormLayer::BatchNormLayer(const std::string &name, int c)
    : channels(c), gamma(name + ".gamma", c), beta(name + ".beta", c),
      running_mean(c, 0.0), running_var(c, 1.0) {
  std::fill(gamma.value.begin(), gamma.value.end(), 1.0);
}

void BatchNormLayer::Forward(const Batch &in, Batch *out, bool training, bool update_running,
                             BatchNormCache *cache) {
  const int n = static_cast<int>(in.size());
  for (const Tensor3 &x : in)
    if (x.channels != channels) throw std::invalid_argument("batch norm channel mismatch");
  *out = in;
  if (cache) {
    cache->inv_std.assign(channels, 0.0);
    cache->x_hat = in;
  }
#pragma omp parallel for schedule(static)
  for (int c = 0; c < channels; ++c) {
    double mean, var;
    if (training) {
      double sum = 0.0, count = 0.0;
      for (int i = 0; i < n; ++i) {
        for (double v : in[i].plane(c)) sum += v;
        count += static_cast<double>(in[i].plane(c).size());
      }
      mean = sum / count;
      double ss = 0.0;
      for (int i = 0; i < n; ++i)
        for (double v : in[i].plane(c)) ss += (v - mean) * (v - mean);
      var = ss / count;
      if (update_running) {
        running_mean[c] = momentum * running_mean[c] + (1.0 - momentum) * mean;
        const double unbiased = count > 1.0 ? var * count / (count - 1.0) : var;
        running_var[c] = momentum * running_var[c] + (1.0 - momentum) * unbiased;
      }
    } else {
      mean = running_mean[c];
      var = running_var[c];
    }
    const double inv_std = 1.0 / std::sqrt(var + eps);
    const double g = gamma.value[c], b = beta.value[c];
    for (int i = 0; i < n; ++i) {
      auto src = in[i].plane(c);
      auto dst = (*out)[i].plane(c);
      for (size_t j = 0; j < src.size(); ++j) {
        const double xh = (src[j] - mean) * inv_std;
        if (cache) cache->x_hat[i].plane(c)[j] = xh;
        dst[j] = g * xh + b;
      }
    }
    if (cache) cache->inv_std[c] = inv_std;
  }
}

void BatchNormLayer::Apply(const Batch &in, Batch *out) const {
  *out = in;
  for (int c = 0; c < channels; ++c) {
    const double inv_std = 1.0 / std::sqrt(running_var[c] + eps);
    const double g = gamma.value[c], b = beta.value[c], mean = running_mean[c];
    for (Tensor3 &t : *out)
      for (double &v : t.plane(c)) v = g * (v - mean) * inv_std + b;
  }
}

void BatchNormLayer::Backward(const Batch &grad_out, const BatchNormCache &cache, Batch *grad_in) {
  const int n = static_cast<int>(grad_out.size());
  *grad_in = grad_out;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < channels; ++c) {
    double sum_dy = 0.0, sum_dy_xh = 0.0, count = 0.0;
    for (int i = 0; i < n; ++i) {
      auto dy = grad_out[i].plane(c);
      auto xh = cache.x_hat[i].plane(c);
      for (size_t j = 0; j < dy.size(); ++j) {
        sum_dy += dy[j];
        sum_dy_xh += dy[j] * xh[j];
      }
      count += static_cast<double>(dy.size());
    }
    beta.grad[c] += sum_dy;
    gamma.grad[c] += sum_dy_xh;
    const double scale = gamma.value[c] * cache.inv_std[c] / count;
    for (int i = 0; i < n; ++i) {
      auto dy = grad_out[i].plane(c);
      auto xh = cache.x_hat[i].plane(c);
      auto dx = (*grad_in)[i].plane(c);
      for (size_t j = 0; j < dy.size(); ++j)
        dx[j] = scale * (count * dy[j] - sum_dy - xh[j] * sum_dy_xh);
    }
  }
}

std::vector<Param *> BatchNormLayer::Params() { return {&gamma, &beta}; }

void ReluInPlace(Batch *x) {
  for (Tensor3 &t : *x)
    for (double &v : t.data) v = v > 0.0 ? v : 0.0;
}

void ReluBackwardInPlace(const Batch &activation, Batch *grad) {
  for (size_t i = 0; i < grad->size(); ++i)
    for (size_t j = 0; j < (*grad)[i].data.size(); ++j)
      if (!(activation[i].data[j] > 0.0)) (*grad)[i].data[j] = 0.0;
}

// -------------------------------------------------------------- ResidualBlock

ResidualBlock::ResidualBlock(const std::string &name, int in_channels, int out_channels, int stride_bands) {
  ConvGeometry g1;
  g1.in_channels = in_channels;
  g1.out_channels = out_channels;
  g1.kernel_frames = g1.kernel_bands = 3;
  g1.stride_bands = stride_bands;
  g1.pad_frames_before = g1.pad_frames_after = g1.pad_bands_before = g1.pad_bands_after = 1;
  ConvGeometry g2 = g1;
  g2.in_channels = out_channels;
  g2.stride_bands = 1;
  // No bias ahead of batch norm; it would cancel.
  conv1 = Conv2dLayer(name + ".conv1", g1, false);
  conv2 = Conv2dLayer(name + ".conv2", g2, false);
  bn1 = BatchNormLayer(name + ".bn1", out_channels);
  bn2 = BatchNormLayer(name + ".bn2", out_channels);
  if (in_channels != out_channels || stride_bands != 1) {
    ConvGeometry gp;
    gp.in_channels = in_channels;
    gp.out_channels = out_channels;
    gp.stride_bands = stride_bands;
    projection = Conv2dLayer(name + ".proj", gp, true);
  }
}

void ResidualBlock::Init(RandomSource *rng) {
  conv1.InitHe(rng);
  conv2.InitHe(rng);
  if (has_projection()) projection.InitHe(rng);
}

void ResidualBlock::Forward(const Batch &in, Batch *out, bool training, bool update_running,
                            ResidualCache *cache) {
  Batch h1, n1, h2, n2;
  conv1.Forward(in, &h1);
  bn1.Forward(h1, &n1, training, update_running, cache ? &cache->bn1 : nullptr);
  ReluInPlace(&n1);
  conv2.Forward(n1, &h2);
  bn2.Forward(h2, &n2, training, update_running, cache ? &cache->bn2 : nullptr);
  ReluInPlace(&n2);
  Batch skip;
  if (has_projection()) projection.Forward(in, &skip);
  *out = n2;
  const Batch &s = has_projection() ? skip : in;
  for (size_t i = 0; i < out->size(); ++i) {
    if (!(*out)[i].SameShape(s[i])) throw std::invalid_argument("residual shape mismatch");
    for (size_t j = 0; j < (*out)[i].data.size(); ++j) (*out)[i].data[j] += s[i].data[j];
  }
  if (cache) {
    cache->input = in;
    cache->h1 = std::move(h1);
    cache->a1 = std::move(n1);
    cache->h2 = std::move(h2);
    cache->a2 = std::move(n2);
  }
}

void ResidualBlock::ForwardEval(const Batch &in, Batch *out) const {
  Batch h1, n1, h2;
  conv1.Forward(in, &h1);
  bn1.Apply(h1, &n1);
  ReluInPlace(&n1);
  conv2.Forward(n1, &h2);
  bn2.Apply(h2, out);
  ReluInPlace(out);
  Batch skip;
  if (has_projection()) projection.Forward(in, &skip);
  const Batch &s = has_projection() ? skip : in;
  for (size_t i = 0; i < out->size(); ++i)
    for (size_t j = 0; j < (*out)[i].data.size(); ++j) (*out)[i].data[j] += s[i].data[j];
}

void ResidualBlock::Backward(const Batch &grad_out, const ResidualCache &cache, Batch *grad_in) {
  Batch g = grad_out;
  ReluBackwardInPlace(cache.a2, &g);
  Batch g_h2, g_a1, g_h1, g_x;
  bn2.Backward(g, cache.bn2, &g_h2);
  conv2.Backward(cache.a1, g_h2, &g_a1);
  ReluBackwardInPlace(cache.a1, &g_a1);
  bn1.Backward(g_a1, cache.bn1, &g_h1);
  conv1.Backward(cache.input, g_h1, &g_x);
  if (has_projection()) {
    Batch g_skip;
    projection.Backward(cache.input, grad_out, &g_skip);
    for (size_t i = 0; i < g_x.size(); ++i)
      for (size_t j = 0; j < g_x[i].data.size(); ++j) g_x[i].data[j] += g_skip[i].data[j];
  } else {
    for (size_t i = 0; i < g_x.size(); ++i)
      for (size_t j = 0; j < g_x[i].data.size(); ++j) g_x[i].data[j] += grad_out[i].data[j];
  }
  *grad_in = std::move(g_x);
}

std::vector<Param *> ResidualBlock::Params() {
  std::vector<Param *> p;
  for (Param *q : conv1.Params()) p.push_back(q);
  for (Param *q : bn1.Params()) p.push_back(q);
  for (Param *q : conv2.Params()) p.push_back(q);
  for (Param *q : bn2.Params()) p.push_back(q);
  if (has_projection())
    for (Param *q : projection.Params()) p.push_back(q);
  return p;
}

// ---------------------------------------------------------------- LinearLayer

LinearLayer::LinearLayer(const std::string &name, int in, int out)
    : in_dim(in), out_dim(out), weight(name + ".weight", static_cast<size_t>(in) * out),
      bias(name + ".bias", out) {}

void LinearLayer::InitXavier(RandomSource *rng) {
  FillUniform(&weight.value, std::sqrt(6.0 / (in_dim + out_dim)), rng);
  std::fill(bias.value.begin(), bias.value.end(), 0.0);
}

void LinearLayer::Forward(const Matrix &x, Matrix *y) const {
  if (x.cols != in_dim) throw std::invalid_argument("linear input dimension mismatch");
  *y = Matrix(x.rows, out_dim);
  for (int t = 0; t < x.rows; ++t) {
    std::copy(bias.value.begin(), bias.value.end(), y->row(t));
    MatVecAdd(weight.value, out_dim, in_dim, x.row(t), y->row(t));
  }
}

void LinearLayer::Backward(const Matrix &x, const Matrix &dy, Matrix *dx, std::span<double> dw,
                           std::span<double> db) const {
  if (dx) *dx = Matrix(x.rows, in_dim);
  for (int t = 0; t < x.rows; ++t) {
    const double *g = dy.row(t);
    for (int o = 0; o < out_dim; ++o) db[o] += g[o];
    OuterAdd(dw, out_dim, in_dim, g, x.row(t));
    if (dx) MatTVecAdd(weight.value, out_dim, in_dim, g, dx->row(t));
  }
}

// --------------------------------------------------------------- GruDirection

GruDirection::GruDirection(const std::string &name, int in, int h, bool rev)
    : input_dim(in), hidden(h), reverse(rev),
      w_input(name + ".w_input", static_cast<size_t>(3) * h * in),
      w_hidden(name + ".w_hidden", static_cast<size_t>(3) * h * h),
      b_input(name + ".b_input", 3 * h), b_hidden(name + ".b_hidden", 3 * h) {}

void GruDirection::Init(RandomSource *rng) {
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden));
  FillUniform(&w_input.value, k, rng);
  FillUniform(&w_hidden.value, k, rng);
  FillUniform(&b_input.value, k, rng);
  FillUniform(&b_hidden.value, k, rng);
}

void GruDirection::Forward(const Matrix &x, Matrix *out, GruDirectionCache *cache) const {
  if (x.cols != input_dim) throw std::invalid_argument("GRU input dimension mismatch");
  const int T = x.rows, H = hidden;
  *out = Matrix(T, H);
  GruDirectionCache local;
  GruDirectionCache &c = cache ? *cache : local;
  c.h = Matrix(T + 1, H);
  c.r = Matrix(T, H);
  c.z = Matrix(T, H);
  c.n = Matrix(T, H);
  c.hn = Matrix(T, H);
  std::vector<double> gi(3 * H), gh(3 * H);
  for (int s = 0; s < T; ++s) {
    const int t = reverse ? T - 1 - s : s;
    const double *h = c.h.row(s);
    std::copy(b_input.value.begin(), b_input.value.end(), gi.begin());
    std::copy(b_hidden.value.begin(), b_hidden.value.end(), gh.begin());
    MatVecAdd(w_input.value, 3 * H, input_dim, x.row(t), gi.data());
    MatVecAdd(w_hidden.value, 3 * H, H, h, gh.data());
    double *hnext = c.h.row(s + 1);
    for (int j = 0; j < H; ++j) {
      const double r = Sigmoid(gi[j] + gh[j]);
      const double z = Sigmoid(gi[H + j] + gh[H + j]);
      const double hn = gh[2 * H + j];
      const double n = std::tanh(gi[2 * H + j] + r * hn);
      c.r.at(s, j) = r;
      c.z.at(s, j) = z;
      c.hn.at(s, j) = hn;
      c.n.at(s, j) = n;
      hnext[j] = (1.0 - z) * n + z * h[j];
      out->at(t, j) = hnext[j];
    }
  }
}

void GruDirection::Backward(const Matrix &x, const Matrix &dout, const GruDirectionCache &c, Matrix *dx,
                            std::span<double> dwi, std::span<double> dwh, std::span<double> dbi,
                            std::span<double> dbh) const {
  const int T = x.rows, H = hidden;
  *dx = Matrix(T, input_dim);
  std::vector<double> dh_next(H, 0.0), dh(H), dgi(3 * H), dgh(3 * H);
  for (int s = T - 1; s >= 0; --s) {
    const int t = reverse ? T - 1 - s : s;
    const double *hprev = c.h.row(s);
    for (int j = 0; j < H; ++j) dh[j] = dout.at(t, j) + dh_next[j];
    for (int j = 0; j < H; ++j) {
      const double r = c.r.at(s, j), z = c.z.at(s, j), n = c.n.at(s, j), hn = c.hn.at(s, j);
      const double dn = dh[j] * (1.0 - z);
      const double dz = dh[j] * (hprev[j] - n);
      const double dan = dn * (1.0 - n * n);
      const double dr = dan * hn;
      const double dar = dr * r * (1.0 - r);
      const double daz = dz * z * (1.0 - z);
      dgi[j] = dar;
      dgi[H + j] = daz;
      dgi[2 * H + j] = dan;
      dgh[j] = dar;
      dgh[H + j] = daz;
      dgh[2 * H + j] = dan * r;
      dh_next[j] = dh[j] * z;
    }
    for (int k = 0; k < 3 * H; ++k) {
      dbi[k] += dgi[k];
      dbh[k] += dgh[k];
    }
    OuterAdd(dwi, 3 * H, input_dim, dgi.data(), x.row(t));
    OuterAdd(dwh, 3 * H, H, dgh.data(), hprev);
    MatTVecAdd(w_input.value, 3 * H, input_dim, dgi.data(), dx->row(t));
    MatTVecAdd(w_hidden.value, 3 * H, H, dgh.data(), dh_next.data());
  }
}

// -------------------------------------------------------------- AttentionPool

AttentionPool::AttentionPool(const std::string &name, int d, int a)
    : dim(d), attention_dim(a), weight(name + ".weight", static_cast<size_t>(a) * d),
      bias(name + ".bias", a), context(name + ".context", a) {}

void AttentionPool::Init(RandomSource *rng) {
  FillUniform(&weight.value, std::sqrt(6.0 / (dim + attention_dim)), rng);
  std::fill(bias.value.begin(), bias.value.end(), 0.0);
  FillUniform(&context.value, 1.0 / std::sqrt(static_cast<double>(attention_dim)), rng);
}

std::vector<double> SoftmaxPool(const Matrix &states, std::span<const double> scores,
                                std::vector<double> *weights) {
  if (states.rows < 1) throw std::invalid_argument("pooling needs at least one frame");
  *weights = Softmax(scores);
  std::vector<double> out(states.cols, 0.0);
  for (int t = 0; t < states.rows; ++t) {
    const double w = (*weights)[t];
    const double *s = states.row(t);
    for (int j = 0; j < states.cols; ++j) out[j] += w * s[j];
  }
  return out;
}

std::vector<double> AttentionPool::Forward(const Matrix &states, AttentionCache *cache) const {
  if (states.cols != dim) throw std::invalid_argument("attention input dimension mismatch");
  const int T = states.rows;
  AttentionCache local;
  AttentionCache &c = cache ? *cache : local;
  c.u = Matrix(T, attention_dim);
  std::vector<double> scores(T, 0.0);
  for (int t = 0; t < T; ++t) {
    double *u = c.u.row(t);
    std::copy(bias.value.begin(), bias.value.end(), u);
    MatVecAdd(weight.value, attention_dim, dim, states.row(t), u);
    double s = 0.0;
    for (int a = 0; a < attention_dim; ++a) {
      u[a] = std::tanh(u[a]);
      s += context.value[a] * u[a];
    }
    scores[t] = s;
  }
  return SoftmaxPool(states, scores, &c.weights);
}

void AttentionPool::Backward(const Matrix &states, std::span<const double> dout, const AttentionCache &c,
                             Matrix *dstates, std::span<double> dw, std::span<double> db,
                             std::span<double> dv) const {
  const int T = states.rows;
  *dstates = Matrix(T, dim);
  std::vector<double> dalpha(T);
  double mix = 0.0;
  for (int t = 0; t < T; ++t) {
    const double *s = states.row(t);
    double acc = 0.0;
    for (int j = 0; j < dim; ++j) acc += dout[j] * s[j];
    dalpha[t] = acc;
    mix += c.weights[t] * acc;
  }
  std::vector<double> da(attention_dim);
  for (int t = 0; t < T; ++t) {
    double *ds = dstates->row(t);
    for (int j = 0; j < dim; ++j) ds[j] += c.weights[t] * dout[j];
    const double de = c.weights[t] * (dalpha[t] - mix);
    const double *u = c.u.row(t);
    for (int a = 0; a < attention_dim; ++a) {
      dv[a] += de * u[a];
      da[a] = de * context.value[a] * (1.0 - u[a] * u[a]);
      db[a] += da[a];
    }
    OuterAdd(dw, attention_dim, dim, da.data(), states.row(t));
    MatTVecAdd(weight.value, attention_dim, dim, da.data(), ds);
  }
}

// -------------------------------------------------------------------- MlpHead

std::vector<double> Softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) sum += p[i] = std::exp(logits[i] - m);
  for (double &v : p) v /= sum;
  return p;
}

MlpHead::MlpHead(const std::string &name, int in, int h, int n_out)
    : in_dim(in), hidden(h), n_outputs(n_out), w1(name + ".w1", static_cast<size_t>(h) * in),
      b1(name + ".b1", h), w2(name + ".w2", static_cast<size_t>(n_out) * h), b2(name + ".b2", n_out) {}

void MlpHead::Init(RandomSource *rng) {
  FillUniform(&w1.value, std::sqrt(6.0 / (in_dim + hidden)), rng);
  FillUniform(&w2.value, std::sqrt(6.0 / (hidden + n_outputs)), rng);
  std::fill(b1.value.begin(), b1.value.end(), 0.0);
  std::fill(b2.value.begin(), b2.value.end(), 0.0);
}

std::vector<double> MlpHead::Forward(std::span<const double> x, MlpCache *cache) const {
  if (static_cast<int>(x.size()) != in_dim) throw std::invalid_argument("MLP input dimension mismatch");
  std::vector<double> h(b1.value);
  MatVecAdd(w1.value, hidden, in_dim, x.data(), h.data());
  for (double &v : h) v = v > 0.0 ? v : 0.0;
  std::vector<double> logits(b2.value);
  MatVecAdd(w2.value, n_outputs, hidden, h.data(), logits.data());
  std::vector<double> probs = Softmax(logits);
  if (cache) {
    cache->hidden = h;
    cache->probs = probs;
  }
  return probs;
}

void MlpHead::Backward(std::span<const double> x, std::span<const double> dlogits, const MlpCache &c,
                       std::span<double> dx, std::span<double> dw1, std::span<double> db1,
                       std::span<double> dw2, std::span<double> db2) const {
  for (int o = 0; o < n_outputs; ++o) db2[o] += dlogits[o];
  OuterAdd(dw2, n_outputs, hidden, dlogits.data(), c.hidden.data());
  std::vector<double> dh(hidden, 0.0);
  MatTVecAdd(w2.value, n_outputs, hidden, dlogits.data(), dh.data());
  for (int j = 0; j < hidden; ++j)
    if (!(c.hidden[j] > 0.0)) dh[j] = 0.0;
  for (int j = 0; j < hidden; ++j) db1[j] += dh[j];
  OuterAdd(dw1, hidden, in_dim, dh.data(), x.data());
  std::fill(dx.begin(), dx.end(), 0.0);
  MatTVecAdd(w1.value, hidden, in_dim, dh.data(), dx.data());
}

}  // namespace strfnet
