// include/strfnet/fft.h

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

#ifndef STRFNET_FFT_H_
#define STRFNET_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace strfnet {

// Thin RAII wrapper over an FFTW real-to-complex plan of fixed size.
// Each instance owns its buffers, so distinct instances may run on
// distinct threads; plan creation is serialized internally.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  int size() const { return size_; }
  // |input| may be shorter than size(); it is zero-padded. Output has
  // size()/2 + 1 bins.
  void Forward(std::span<const double> input, std::vector<std::complex<double>> *output);

 private:
  int size_;
  double *in_;
  void *out_;
  void *plan_;
};

// Forward (r2c) and inverse (c2r) plans of one size. Execution is const and
// may run on many threads at once with caller-owned buffers of any alignment.
class FftPlanPair {
 public:
  explicit FftPlanPair(int size);
  ~FftPlanPair();
  FftPlanPair(const FftPlanPair &) = delete;
  FftPlanPair &operator=(const FftPlanPair &) = delete;

  int size() const { return size_; }
  int bins() const { return size_ / 2 + 1; }
  // |in| holds size() reals; |out| receives bins() values.
  void Forward(const double *in, std::complex<double> *out) const;
  // Unnormalized inverse: the result is size() times the true inverse.
  // |in| is overwritten.
  void Inverse(std::complex<double> *in, double *out) const;

  // Smallest n >= min_size whose only prime factors are 2, 3 and 5.
  static int GoodSize(int min_size);

 private:
  int size_;
  void *forward_;
  void *inverse_;
};

// Linear convolution of two real sequences through the FFT; result length
// is a.size() + b.size() - 1.
std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b);

}  // namespace strfnet

#endif  // STRFNET_FFT_H_
