// tests/oracles.cc

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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <set>

#include "strfnet/conv.h"
#include "strfnet/hilbert.h"
#include "strfnet/layers.h"
#include "strfnet/model.h"
#include "strfnet/random.h"

namespace strfnet {
namespace testing {

double RelativeError(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

void GradReport::Add(double analytic, double numeric, double floor) {
  const double e = RelativeError(analytic, numeric, floor);
  if (e > max_rel || checked == 0) {
    max_rel = e;
    worst_analytic = analytic;
    worst_numeric = numeric;
  }
  ++checked;
}

void GradReport::Merge(const GradReport &o) {
  if (o.max_rel > max_rel || checked == 0) {
    max_rel = o.max_rel;
    worst_analytic = o.worst_analytic;
    worst_numeric = o.worst_numeric;
  }
  checked += o.checked;
}

double CentralDifference(const std::function<double()> &loss, double *x, double h) {
  const double saved = *x;
  *x = saved + h;
  const double up = loss();
  *x = saved - h;
  const double down = loss();
  *x = saved;
  return (up - down) / (2.0 * h);
}

double StableDifference(const std::function<double()> &loss, double *x, double floor) {
  for (double h = kFdStep; h >= kFdStep * 1e-3; h /= 10.0) {
    const double d1 = CentralDifference(loss, x, h), d2 = CentralDifference(loss, x, h / 2.0);
    if (std::abs(d1 - d2) <= 1e-5 * std::max({std::abs(d1), std::abs(d2), floor})) return d1;
  }
  return CentralDifference(loss, x);
}

namespace {

void FillNormal(std::vector<double> *v, RandomSource *rng) {
  for (double &x : *v) x = rng->Normal();
}

Batch RandomBatch(int n, int c, int t, int f, RandomSource *rng) {
  Batch b(n);
  for (Tensor3 &x : b) {
    x = Tensor3(c, t, f);
    FillNormal(&x.data, rng);
  }
  return b;
}

// Random coefficients shaped like |y|, defining loss = sum(coef * y).
Batch Coefficients(const Batch &y, RandomSource *rng) {
  Batch c = y;
  for (Tensor3 &x : c) FillNormal(&x.data, rng);
  return c;
}

double Dot(const Batch &a, const Batch &b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].data.size(); ++j) s += a[i].data[j] * b[i].data[j];
  return s;
}

double Dot(const Matrix &a, const Matrix &b) {
  double s = 0.0;
  for (size_t j = 0; j < a.data.size(); ++j) s += a.data[j] * b.data[j];
  return s;
}

// Checks every scalar of |values| against |grad|.
void CheckAll(const std::function<double()> &loss, std::vector<double> *values,
              const std::vector<double> &grad, GradReport *r) {
  for (size_t i = 0; i < values->size(); ++i) r->Add(grad[i], StableDifference(loss, &(*values)[i]));
}

void CheckAll(const std::function<double()> &loss, Batch *values, const Batch &grad, GradReport *r) {
  for (size_t i = 0; i < values->size(); ++i) CheckAll(loss, &(*values)[i].data, grad[i].data, r);
}

}  // namespace

GradReport CheckConvGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {1});
  ConvGeometry g;
  g.in_channels = static_cast<int>(rng.UniformInt(1, 3));
  g.out_channels = static_cast<int>(rng.UniformInt(1, 3));
  int frames = 6, bands = 6;
  if (seed % 4 == 3) {
    // Large enough for the frequency-domain path.
    g.kernel_frames = static_cast<int>(rng.UniformInt(10, 14));
    g.kernel_bands = static_cast<int>(rng.UniformInt(9, 11));
    g.pad_frames_before = static_cast<int>(rng.UniformInt(0, 6));
    g.pad_frames_after = static_cast<int>(rng.UniformInt(0, 6));
    frames = 16;
    bands = 12;
  } else {
    g.kernel_frames = static_cast<int>(rng.UniformInt(1, 3));
    g.kernel_bands = static_cast<int>(rng.UniformInt(1, 3));
    g.stride_frames = static_cast<int>(rng.UniformInt(1, 2));
    g.stride_bands = static_cast<int>(rng.UniformInt(1, 2));
    g.pad_frames_before = static_cast<int>(rng.UniformInt(0, 1));
    g.pad_frames_after = static_cast<int>(rng.UniformInt(0, 1));
    g.pad_bands_before = static_cast<int>(rng.UniformInt(0, 1));
    g.pad_bands_after = static_cast<int>(rng.UniformInt(0, 1));
  }
  Batch x = RandomBatch(2, g.in_channels, frames, bands, &rng);
  std::vector<double> w(g.WeightCount()), b(g.out_channels);
  FillNormal(&w, &rng);
  FillNormal(&b, &rng);
  Batch y;
  ConvForward(g, x, w, b, &y);
  const Batch coef = Coefficients(y, &rng);
  auto loss = [&] {
    Batch out;
    ConvForward(g, x, w, b, &out);
    return Dot(out, coef);
  };
  std::vector<double> gw(w.size(), 0.0), gb(b.size(), 0.0);
  Batch gx;
  ConvBackward(g, x, w, coef, &gx, gw, gb);
  GradReport r{"conv2d"};
  CheckAll(loss, &w, gw, &r);
  CheckAll(loss, &b, gb, &r);
  CheckAll(loss, &x, gx, &r);
  return r;
}

namespace {

StrfParams RandomStrf(RandomSource *rng) {
  StrfParams p;
  p.spectral_mod = rng->Uniform(0.0, 0.2);
  p.temporal_mod = rng->Uniform(0.0, 10.0);
  p.spectral_phase = rng->Uniform(0.0, 2.0 * std::numbers::pi);
  p.temporal_phase = rng->Uniform(0.0, 2.0 * std::numbers::pi);
  p.direction = rng->Bernoulli(0.5) ? Drift::kUpward : Drift::kDownward;
  p.frame_rate = 11025.0 / 110.0;
  p.channels_per_octave = 8.0;
  return p;
}

const HilbertFir &Fir() {
  static const HilbertFir fir = DesignHilbertFir(512);
  return fir;
}

}  // namespace

GradReport CheckStrfJacobian(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {2});
  StrfParams p = RandomStrf(&rng);
  // Every fourth draw sits near the zero ends of the ranges.
  if (seed % 4 == 1) p.spectral_mod = rng.Uniform(0.0, 1e-3);
  if (seed % 4 == 2) p.temporal_mod = rng.Uniform(0.0, 1e-2);
  const auto jac = StrfJacobian(p, Fir());
  double *fields[4] = {&p.spectral_mod, &p.temporal_mod, &p.spectral_phase, &p.temporal_phase};
  GradReport r{"strf_jacobian"};
  for (int j = 0; j < 4; ++j) {
    const double saved = *fields[j];
    *fields[j] = saved + kFdStep;
    const Kernel2D up = AssembleStrf(p, Fir());
    *fields[j] = saved - kFdStep;
    const Kernel2D down = AssembleStrf(p, Fir());
    *fields[j] = saved;
    double peak = 0.0;
    for (double v : jac[j].values) peak = std::max(peak, std::abs(v));
    // Errors are relative to the slab's peak: single entries pass through
    // zero, where an entrywise ratio says nothing about the derivative.
    for (size_t e = 0; e < up.values.size(); ++e)
      r.Add(jac[j].values[e], (up.values[e] - down.values[e]) / (2.0 * kFdStep), std::max(peak, 1e-12));
  }
  return r;
}

GradReport CheckStrfConvGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {3});
  StrfGridConfig grid;
  grid.frame_rate = 11025.0 / 110.0;
  grid.channels_per_octave = 8.0;
  const int count = static_cast<int>(rng.UniformInt(1, 3));
  auto fir = std::make_shared<const HilbertFir>(Fir());
  StrfConvLayer layer("s", InitBank(count, grid, &rng, *fir), fir);
  Batch x = RandomBatch(2, 1, static_cast<int>(rng.UniformInt(55, 70)), static_cast<int>(rng.UniformInt(15, 18)), &rng);
  Batch y;
  layer.Forward(x, &y);
  const Batch coef = Coefficients(y, &rng);
  auto loss = [&] {
    Batch out;
    layer.Forward(x, &out);
    return Dot(out, coef);
  };
  layer.strf.ZeroGrad();
  layer.Backward(x, coef);
  GradReport r{"strf_conv"};
  CheckAll(loss, &layer.strf.value, layer.strf.grad, &r);
  return r;
}

GradReport CheckBatchNormGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {4});
  const int c = static_cast<int>(rng.UniformInt(1, 3));
  BatchNormLayer bn("bn", c);
  FillNormal(&bn.gamma.value, &rng);
  FillNormal(&bn.beta.value, &rng);
  Batch x = RandomBatch(3, c, 4, 5, &rng);
  Batch y;
  BatchNormCache cache;
  bn.Forward(x, &y, true, false, &cache);
  const Batch coef = Coefficients(y, &rng);
  auto loss = [&] {
    Batch out;
    bn.Forward(x, &out, true, false, nullptr);
    return Dot(out, coef);
  };
  bn.gamma.ZeroGrad();
  bn.beta.ZeroGrad();
  Batch gx;
  bn.Backward(coef, cache, &gx);
  GradReport r{"batch_norm"};
  CheckAll(loss, &bn.gamma.value, bn.gamma.grad, &r);
  CheckAll(loss, &bn.beta.value, bn.beta.grad, &r);
  CheckAll(loss, &x, gx, &r);
  return r;
}

GradReport CheckResidualGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {5});
  const int in_c = static_cast<int>(rng.UniformInt(1, 3));
  const int out_c = static_cast<int>(rng.UniformInt(1, 3));
  const int stride = static_cast<int>(rng.UniformInt(1, 2));
  ResidualBlock block("b", in_c, out_c, stride);
  block.Init(&rng);
  for (BatchNormLayer *bn : block.Norms()) {
    for (double &v : bn->gamma.value) v = rng.Uniform(0.5, 1.5);
    for (double &v : bn->beta.value) v = rng.Uniform(-0.5, 0.5);
  }
  Batch x = RandomBatch(2, in_c, 5, static_cast<int>(rng.UniformInt(6, 7)), &rng);
  Batch y;
  ResidualCache cache;
  block.Forward(x, &y, true, false, &cache);
  const Batch coef = Coefficients(y, &rng);
  auto loss = [&] {
    Batch out;
    block.Forward(x, &out, true, false, nullptr);
    return Dot(out, coef);
  };
  for (Param *p : block.Params()) p->ZeroGrad();
  Batch gx;
  block.Backward(coef, cache, &gx);
  GradReport r{"residual_block"};
  for (Param *p : block.Params()) CheckAll(loss, &p->value, p->grad, &r);
  CheckAll(loss, &x, gx, &r);
  return r;
}

namespace {

Matrix RandomMatrix(int rows, int cols, RandomSource *rng) {
  Matrix m(rows, cols);
  FillNormal(&m.data, rng);
  return m;
}

}  // namespace

GradReport CheckLinearGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {6});
  LinearLayer fc("fc", static_cast<int>(rng.UniformInt(1, 5)), static_cast<int>(rng.UniformInt(1, 5)));
  fc.InitXavier(&rng);
  FillNormal(&fc.bias.value, &rng);
  Matrix x = RandomMatrix(4, fc.in_dim, &rng);
  const Matrix coef = RandomMatrix(4, fc.out_dim, &rng);
  auto loss = [&] {
    Matrix y;
    fc.Forward(x, &y);
    return Dot(y, coef);
  };
  std::vector<double> dw(fc.weight.size(), 0.0), db(fc.bias.size(), 0.0);
  Matrix dx;
  fc.Backward(x, coef, &dx, dw, db);
  GradReport r{"linear"};
  CheckAll(loss, &fc.weight.value, dw, &r);
  CheckAll(loss, &fc.bias.value, db, &r);
  CheckAll(loss, &x.data, dx.data, &r);
  return r;
}

GradReport CheckGruGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {7});
  GruDirection gru("g", 3, static_cast<int>(rng.UniformInt(1, 4)), rng.Bernoulli(0.5));
  gru.Init(&rng);
  Matrix x = RandomMatrix(5, 3, &rng);
  const Matrix coef = RandomMatrix(5, gru.hidden, &rng);
  auto loss = [&] {
    Matrix out;
    GruDirectionCache c;
    gru.Forward(x, &out, &c);
    return Dot(out, coef);
  };
  Matrix out, dx;
  GruDirectionCache cache;
  gru.Forward(x, &out, &cache);
  std::vector<double> dwi(gru.w_input.size(), 0.0), dwh(gru.w_hidden.size(), 0.0),
      dbi(gru.b_input.size(), 0.0), dbh(gru.b_hidden.size(), 0.0);
  gru.Backward(x, coef, cache, &dx, dwi, dwh, dbi, dbh);
  GradReport r{"gru"};
  CheckAll(loss, &gru.w_input.value, dwi, &r);
  CheckAll(loss, &gru.w_hidden.value, dwh, &r);
  CheckAll(loss, &gru.b_input.value, dbi, &r);
  CheckAll(loss, &gru.b_hidden.value, dbh, &r);
  CheckAll(loss, &x.data, dx.data, &r);
  return r;
}

GradReport CheckAttentionGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {8});
  AttentionPool att("a", 3, static_cast<int>(rng.UniformInt(1, 4)));
  att.Init(&rng);
  FillNormal(&att.bias.value, &rng);
  Matrix s = RandomMatrix(static_cast<int>(rng.UniformInt(1, 6)), 3, &rng);
  std::vector<double> coef(3);
  FillNormal(&coef, &rng);
  auto loss = [&] {
    const std::vector<double> o = att.Forward(s, nullptr);
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += o[j] * coef[j];
    return v;
  };
  AttentionCache cache;
  att.Forward(s, &cache);
  std::vector<double> dw(att.weight.size(), 0.0), db(att.bias.size(), 0.0), dv(att.context.size(), 0.0);
  Matrix ds;
  att.Backward(s, coef, cache, &ds, dw, db, dv);
  GradReport r{"attention"};
  CheckAll(loss, &att.weight.value, dw, &r);
  CheckAll(loss, &att.bias.value, db, &r);
  CheckAll(loss, &att.context.value, dv, &r);
  CheckAll(loss, &s.data, ds.data, &r);
  return r;
}

GradReport CheckHeadGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {9});
  MlpHead head("h", 3, static_cast<int>(rng.UniformInt(2, 5)), 2);
  head.Init(&rng);
  FillNormal(&head.b1.value, &rng);
  FillNormal(&head.b2.value, &rng);
  std::vector<double> x(3);
  FillNormal(&x, &rng);
  const int label = static_cast<int>(rng.UniformInt(0, 1));
  auto loss = [&] { return -std::log(head.Forward(x, nullptr)[label]); };
  MlpCache cache;
  const std::vector<double> p = head.Forward(x, &cache);
  std::vector<double> dlogits = p;
  dlogits[label] -= 1.0;
  std::vector<double> dx(3), dw1(head.w1.size(), 0.0), db1(head.b1.size(), 0.0), dw2(head.w2.size(), 0.0),
      db2(head.b2.size(), 0.0);
  head.Backward(x, dlogits, cache, dx, dw1, db1, dw2, db2);
  GradReport r{"mlp_head"};
  CheckAll(loss, &head.w1.value, dw1, &r);
  CheckAll(loss, &head.b1.value, db1, &r);
  CheckAll(loss, &head.w2.value, dw2, &r);
  CheckAll(loss, &head.b2.value, db2, &r);
  CheckAll(loss, &x, dx, &r);
  return r;
}

GradReport CheckModelGradients(uint64_t seed) {
  RandomSource rng = RandomSource::Derive(seed, {10});
  ModelConfig c;
  c.first_layer = FirstLayerKind::kHybrid;
  c.n_generic = 4;
  c.n_strf = 4;
  c.n_bands = 20;
  c.n_residual_blocks = 1;
  c.residual_channels = 4;
  c.fc_dim = 4;
  c.gru_hidden = 4;
  c.attention_dim = 4;
  c.mlp_hidden = 4;
  Model model(c, seed);
  std::vector<Spectrogram> batch(3);
  std::vector<int> labels(3);
  for (int i = 0; i < 3; ++i) {
    batch[i].num_frames = 60;
    batch[i].num_bands = c.n_bands;
    batch[i].values.resize(60 * c.n_bands);
    FillNormal(&batch[i].values, &rng);
    labels[i] = i % 2;
  }
  model.ForwardBackward(batch, labels, false);
  std::vector<std::pair<Param *, size_t>> picks;
  Param &strf = model.strf_layer().strf;
  for (int k = 0; k < 4; ++k) picks.push_back({&strf, static_cast<size_t>(rng.UniformInt(0, strf.size() - 1))});
  std::vector<Param *> params;
  for (Param *p : model.Params())
    if (p->trainable && p != &strf) params.push_back(p);
  while (picks.size() < 20) {
    Param *p = params[rng.UniformInt(0, params.size() - 1)];
    picks.push_back({p, static_cast<size_t>(rng.UniformInt(0, p->size() - 1))});
  }
  auto loss = [&] { return model.TrainingLoss(batch, labels); };
  // Rounding through the whole network leaves about 1e-14 of noise on the
  // loss, 5e-10 on a difference quotient; gradients are compared relative to
  // max(|g|, 1e-5).
  constexpr double kFloor = 1e-5;
  GradReport r{"model"};
  for (auto [p, i] : picks) r.Add(p->grad[i], StableDifference(loss, &p->value[i], kFloor), kFloor);
  return r;
}

std::vector<std::function<GradReport(uint64_t)>> AllGradientChecks() {
  return {CheckConvGradients,      CheckStrfJacobian,  CheckStrfConvGradients, CheckBatchNormGradients,
          CheckResidualGradients,  CheckLinearGradients, CheckGruGradients,    CheckAttentionGradients,
          CheckHeadGradients,      CheckModelGradients};
}

double OppositeQuadrantShare(const Kernel2D &k) {
  const int T = k.frames, F = k.channels;
  double opposite = 0.0, same = 0.0;
  for (int u = 0; u < T; ++u) {
    if (2 * u == T) continue;
    const int su = 2 * u < T ? u : u - T;
    if (su == 0) continue;
    for (int v = 0; v < F; ++v) {
      if (2 * v == F) continue;
      const int sv = 2 * v < F ? v : v - F;
      if (sv == 0) continue;
      double re = 0.0, im = 0.0;
      for (int t = 0; t < T; ++t)
        for (int f = 0; f < F; ++f) {
          const double a = -2.0 * std::numbers::pi * (static_cast<double>(u) * t / T + static_cast<double>(v) * f / F);
          re += k.at(t, f) * std::cos(a);
          im += k.at(t, f) * std::sin(a);
        }
      const double e = re * re + im * im;
      ((su > 0) != (sv > 0) ? opposite : same) += e;
    }
  }
  return opposite / (opposite + same);
}

DecisionSeries BrutePostprocess(const ScoredSegments &scored, const DecisionSeries &d, int max_gap) {
  const int n = static_cast<int>(d.size());
  DecisionSeries out = d;
  for (int i = 0; i < n; ++i) {
    if (d[i]) continue;
    // Nearest live decision on each side without leaving the series.
    int left = i - 1, right = i + 1;
    while (left >= 0 && scored[left].series == scored[i].series && !d[left]) --left;
    while (right < n && scored[right].series == scored[i].series && !d[right]) ++right;
    const bool flanked = left >= 0 && scored[left].series == scored[i].series && right < n &&
                         scored[right].series == scored[i].series;
    if (flanked && right - left - 1 <= max_gap) out[i] = 1;
  }
  return out;
}

std::vector<double> BruteThresholds(const ScoredSegments &scored) {
  std::set<double> s;
  for (const ScoredSegment &x : scored) s.insert(x.score);
  std::vector<double> t{-std::numeric_limits<double>::infinity()};
  t.insert(t.end(), s.begin(), s.end());
  t.push_back(std::numeric_limits<double>::infinity());
  return t;
}

std::vector<BrutePoint> BruteSweep(const ScoredSegments &scored, int max_gap) {
  std::vector<BrutePoint> out;
  for (double th : BruteThresholds(scored)) {
    DecisionSeries d(scored.size());
    for (size_t i = 0; i < scored.size(); ++i) d[i] = scored[i].score >= th;
    d = BrutePostprocess(scored, d, max_gap);
    double live = 0, dist = 0, miss = 0, fa = 0;
    for (size_t i = 0; i < scored.size(); ++i) {
      const double dur = scored[i].end_s - scored[i].start_s;
      if (scored[i].live) {
        live += dur;
        if (!d[i]) miss += dur;
      } else {
        dist += dur;
        if (d[i]) fa += dur;
      }
    }
    BrutePoint p{th, miss / live, fa / dist, 0.0};
    p.dcf = 0.75 * p.p_miss + 0.25 * p.p_fa;
    out.push_back(p);
  }
  return out;
}

BrutePoint BruteBest(const ScoredSegments &scored, int max_gap) {
  const std::vector<BrutePoint> sweep = BruteSweep(scored, max_gap);
  BrutePoint best = sweep.front();
  for (const BrutePoint &p : sweep)
    if (p.dcf < best.dcf || (p.dcf == best.dcf && p.threshold < best.threshold)) best = p;
  return best;
}

double BruteEer(const ScoredSegments &scored, int max_gap) {
  const std::vector<BrutePoint> sweep = BruteSweep(scored, max_gap);
  for (size_t i = 0; i < sweep.size(); ++i) {
    const double x1 = sweep[i].p_fa, y1 = sweep[i].p_miss;
    if (y1 == x1) return y1;
    if (i == 0 || y1 < x1) continue;
    const double x0 = sweep[i - 1].p_fa, y0 = sweep[i - 1].p_miss;
    if (y0 > x0) continue;
    // Segment from (x0, y0) below the diagonal to (x1, y1) above it.
    const double alpha = (x0 - y0) / ((y1 - y0) - (x1 - x0));
    return y0 + alpha * (y1 - y0);
  }
  return sweep.back().p_miss;
}

ScoredSegments RandomScoredSeries(uint64_t seed, int max_segments) {
  RandomSource rng = RandomSource::Derive(seed, {11});
  const int n = static_cast<int>(rng.UniformInt(2, max_segments));
  const bool ties = rng.Bernoulli(0.5);
  ScoredSegments s(n);
  int series = 0;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && rng.Bernoulli(0.05)) {
      ++series;
      t = 0.0;
    }
    s[i].series = series;
    s[i].start_s = t;
    s[i].end_s = t + (rng.Bernoulli(0.1) ? 2.5 : 5.0);
    t = s[i].end_s;
    s[i].live = rng.Bernoulli(0.4);
    const double base = s[i].live ? 0.6 : 0.4;
    double score = std::clamp(base + 0.3 * rng.Normal(), 0.0, 1.0);
    if (ties) score = std::round(score * 10.0) / 10.0;
    s[i].score = score;
  }
  s[0].live = true;
  s[n - 1].live = false;
  return s;
}

}  // namespace testing
}  // namespace strfnet
