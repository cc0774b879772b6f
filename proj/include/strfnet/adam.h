// include/strfnet/adam.h

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

#ifndef STRFNET_ADAM_H_
#define STRFNET_ADAM_H_

#include <cstdint>
#include <vector>

#include "strfnet/tensor.h"

namespace strfnet {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  int64_t step = 0;
  // One moment vector per parameter, in the order given to Step().
  std::vector<std::vector<double>> m, v;
};

// Adam with bias correction. Parameters with trainable == false keep their
// values and moments; their gradients are still computed by the model.
class Adam {
 public:
  explicit Adam(const AdamConfig &config = {}) : config_(config) {}

  // Throws std::runtime_error, leaving every value untouched, when any
  // trainable gradient is non-finite. Otherwise advances the step counter.
  void Step(const std::vector<Param *> &params);

  const AdamConfig &config() const { return config_; }
  AdamState &state() { return state_; }
  const AdamState &state() const { return state_; }

 private:
  AdamConfig config_;
  AdamState state_;
};

}  // namespace strfnet

#endif  // STRFNET_ADAM_H_
