// include/strfnet/random.h

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

#ifndef STRFNET_RANDOM_H_
#define STRFNET_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace strfnet {

// All stochastic code takes one of these explicitly; there is no global RNG.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed = 0) : engine_(seed) {}

  // Independent stream derived from a base seed and a path of stream ids,
  // e.g. Derive(seed, {epoch, item}). Order-independent across callers.
  static RandomSource Derive(uint64_t seed, std::initializer_list<uint64_t> path) {
    std::vector<uint32_t> words;
    words.push_back(static_cast<uint32_t>(seed));
    words.push_back(static_cast<uint32_t>(seed >> 32));
    for (uint64_t p : path) {
      words.push_back(static_cast<uint32_t>(p));
      words.push_back(static_cast<uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    RandomSource r;
    r.engine_.seed(seq);
    return r;
  }

  // Uniform on [lo, hi).
  double Uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  // Uniform integer on [lo, hi] inclusive.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(engine_);
  }
  double Normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }
  bool Bernoulli(double p) { return Uniform() < p; }
  uint64_t NextU64() { return engine_(); }

  std::mt19937_64 &engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace strfnet

#endif  // STRFNET_RANDOM_H_
