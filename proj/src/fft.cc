// src/fft.cc

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

#include "strfnet/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace strfnet {

namespace {
std::mutex &PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(int size) : size_(size) {
  if (size < 1) throw std::invalid_argument("FFT size must be positive");
  in_ = fftw_alloc_real(size);
  out_ = fftw_alloc_complex(size / 2 + 1);
  std::lock_guard<std::mutex> lock(PlannerMutex());
  plan_ = fftw_plan_dft_r2c_1d(size, in_, static_cast<fftw_complex *>(out_), FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

void RealFft::Forward(std::span<const double> input, std::vector<std::complex<double>> *output) {
  if (static_cast<int>(input.size()) > size_)
    throw std::invalid_argument("FFT input longer than transform size");
  std::copy(input.begin(), input.end(), in_);
  std::fill(in_ + input.size(), in_ + size_, 0.0);
  fftw_execute(static_cast<fftw_plan>(plan_));
  const auto *out = static_cast<const fftw_complex *>(out_);
  output->resize(size_ / 2 + 1);
  for (int k = 0; k <= size_ / 2; ++k) (*output)[k] = {out[k][0], out[k][1]};
}

FftPlanPair::FftPlanPair(int size) : size_(size) {
  if (size < 1) throw std::invalid_argument("FFT size must be positive");
  double *re = fftw_alloc_real(size);
  fftw_complex *cx = fftw_alloc_complex(size / 2 + 1);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    forward_ = fftw_plan_dft_r2c_1d(size, re, cx, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse_ = fftw_plan_dft_c2r_1d(size, cx, re, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_free(re);
  fftw_free(cx);
}

FftPlanPair::~FftPlanPair() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
}

void FftPlanPair::Forward(const double *in, std::complex<double> *out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), const_cast<double *>(in),
                       reinterpret_cast<fftw_complex *>(out));
}

void FftPlanPair::Inverse(std::complex<double> *in, double *out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_), reinterpret_cast<fftw_complex *>(in), out);
}

int FftPlanPair::GoodSize(int min_size) {
  for (int n = std::max(1, min_size);; ++n) {
    int m = n;
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    if (m == 1) return n;
  }
}

std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const size_t out_len = a.size() + b.size() - 1;
  size_t n = 1;
  while (n < out_len) n <<= 1;
  const size_t bins = n / 2 + 1;

  double *buf = fftw_alloc_real(n);
  fftw_complex *fa = fftw_alloc_complex(bins);
  fftw_complex *fb = fftw_alloc_complex(bins);
  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf, fa, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, buf, FFTW_ESTIMATE);
  }
  std::fill(buf, buf + n, 0.0);
  std::copy(a.begin(), a.end(), buf);
  fftw_execute_dft_r2c(fwd, buf, fa);
  std::fill(buf, buf + n, 0.0);
  std::copy(b.begin(), b.end(), buf);
  fftw_execute_dft_r2c(fwd, buf, fb);
  for (size_t k = 0; k < bins; ++k) {
    double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  fftw_execute_dft_c2r(inv, fa, buf);
  std::vector<double> out(buf, buf + out_len);
  for (double &v : out) v /= static_cast<double>(n);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(buf);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

}  // namespace strfnet
