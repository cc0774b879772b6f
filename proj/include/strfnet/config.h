// include/strfnet/config.h

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

#ifndef STRFNET_CONFIG_H_
#define STRFNET_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "strfnet/augment.h"
#include "strfnet/frontend.h"
#include "strfnet/model.h"
#include "strfnet/sim.h"
#include "strfnet/trainer.h"

namespace strfnet {

struct DataConfig {
  int train_sessions = 20;
  int dev_sessions = 4;
  int eval_sessions = 4;
  double segment_s = 5.0;
  double live_overlap_threshold = 0.5;
};

// Everything needed to reproduce an experiment. The model's input-grid
// fields (bands, frame rate, channels per octave) are derived from the
// front end by Finalize() and are not read from JSON.
struct ExperimentConfig {
  uint64_t seed = 1;
  FrontendConfig frontend;
  ModelConfig model;
  TrainConfig train;
  AugmentPolicy augment;
  SessionConfig sim;
  DataConfig data;

  void Finalize();
};

nlohmann::ordered_json ToJson(const ModelConfig &c);
ModelConfig ModelConfigFromJson(const nlohmann::json &j);
nlohmann::ordered_json ToJson(const ExperimentConfig &c);
// Strict: every key must be known; missing keys keep their defaults.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json &j);

// "a.b.c=value"; value is parsed as JSON when possible, else taken as a string.
void ApplyOverride(nlohmann::json *j, const std::string &assignment);

// Reads |path| (empty means defaults), applies the overrides in order and
// finalizes. Throws std::invalid_argument on unknown keys or bad values.
ExperimentConfig LoadExperimentConfig(const std::string &path, const std::vector<std::string> &overrides);

}  // namespace strfnet

#endif  // STRFNET_CONFIG_H_
