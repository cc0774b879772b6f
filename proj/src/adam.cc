// src/adam.cc

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

#include "strfnet/adam.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace strfnet {

void Adam::Step(const std::vector<Param *> &params) {
  for (const Param *p : params) {
    if (!p->trainable) continue;
    for (double g : p->grad)
      if (!std::isfinite(g)) throw std::runtime_error("non-finite gradient in " + p->name + "; step rejected");
  }
  if (state_.m.empty()) {
    for (const Param *p : params) {
      state_.m.emplace_back(p->size(), 0.0);
      state_.v.emplace_back(p->size(), 0.0);
    }
  }
  if (state_.m.size() != params.size()) throw std::invalid_argument("parameter list changed between Adam steps");
  for (size_t i = 0; i < params.size(); ++i)
    if (state_.m[i].size() != params[i]->size())
      throw std::invalid_argument("Adam state does not match parameter " + params[i]->name);

  ++state_.step;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state_.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state_.step));
  for (size_t i = 0; i < params.size(); ++i) {
    Param &p = *params[i];
    if (!p.trainable) continue;
    std::vector<double> &m = state_.m[i], &v = state_.v[i];
    for (size_t j = 0; j < p.size(); ++j) {
      const double g = p.grad[j];
      m[j] = b1 * m[j] + (1.0 - b1) * g;
      v[j] = b2 * v[j] + (1.0 - b2) * g * g;
      p.value[j] -= config_.learning_rate * (m[j] / c1) / (std::sqrt(v[j] / c2) + config_.epsilon);
    }
  }
}

}  // namespace strfnet
