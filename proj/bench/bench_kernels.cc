// bench/bench_kernels.cc

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

// Serial reference kernels against their OpenMP counterparts. Run with
// OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <vector>

#include "strfnet/conv.h"
#include "strfnet/metrics.h"
#include "strfnet/random.h"

namespace {

using namespace strfnet;

struct ConvCase {
  ConvGeometry g;
  std::vector<Tensor3> inputs, grads;
  std::vector<double> weights;
};

// First-layer shape: 500 frames x 40 bands, 50 x 15 kernels.
ConvCase MakeFirstLayer(int batch, int kernels) {
  ConvCase c;
  c.g = ConvGeometry::SameFramesValidBands(1, kernels, 50, 15);
  RandomSource rng(1);
  for (int b = 0; b < batch; ++b) {
    Tensor3 x(1, 500, 40), gy(kernels, 500, 26);
    for (double &v : x.data) v = rng.Normal();
    for (double &v : gy.data) v = rng.Normal();
    c.inputs.push_back(std::move(x));
    c.grads.push_back(std::move(gy));
  }
  c.weights.resize(c.g.WeightCount());
  for (double &v : c.weights) v = rng.Normal(0.0, 0.05);
  return c;
}

void BM_ConvForwardReference(benchmark::State &state) {
  ConvCase c = MakeFirstLayer(4, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    for (const Tensor3 &x : c.inputs) {
      Tensor3 y;
      ConvForwardReference(c.g, x, c.weights, {}, &y);
      benchmark::DoNotOptimize(y.data.data());
    }
  }
}

void BM_ConvForward(benchmark::State &state) {
  ConvCase c = MakeFirstLayer(4, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    std::vector<Tensor3> y;
    ConvForward(c.g, c.inputs, c.weights, {}, &y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_ConvBackwardReference(benchmark::State &state) {
  ConvCase c = MakeFirstLayer(4, static_cast<int>(state.range(0)));
  std::vector<double> gw(c.weights.size());
  for (auto _ : state) {
    for (size_t b = 0; b < c.inputs.size(); ++b) {
      Tensor3 gx;
      ConvBackwardReference(c.g, c.inputs[b], c.weights, c.grads[b], &gx, gw, {});
      benchmark::DoNotOptimize(gx.data.data());
    }
  }
}

void BM_ConvBackward(benchmark::State &state) {
  ConvCase c = MakeFirstLayer(4, static_cast<int>(state.range(0)));
  std::vector<double> gw(c.weights.size());
  for (auto _ : state) {
    std::vector<Tensor3> gx;
    ConvBackward(c.g, c.inputs, c.weights, c.grads, &gx, gw, {});
    benchmark::DoNotOptimize(gx.data());
  }
}

ScoredSegments MakeScores(int n) {
  RandomSource rng(2);
  ScoredSegments s(n);
  for (int i = 0; i < n; ++i) {
    s[i].start_s = 5.0 * i;
    s[i].end_s = 5.0 * (i + 1);
    s[i].live = rng.Bernoulli(0.2);
    s[i].score = rng.Uniform() * 0.7 + (s[i].live ? 0.3 : 0.0);
  }
  s[0].live = true;
  s[1].live = false;
  return s;
}

void BM_DetSweepReference(benchmark::State &state) {
  const ScoredSegments s = MakeScores(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(DetSweepReference(s, 1).data());
}

void BM_DetSweep(benchmark::State &state) {
  const ScoredSegments s = MakeScores(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(DetSweep(s, 1).data());
}

BENCHMARK(BM_ConvForwardReference)->Arg(8)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvForward)->Arg(8)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackwardReference)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetSweepReference)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetSweep)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
