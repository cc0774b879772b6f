// include/strfnet/checkpoint.h

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

#ifndef STRFNET_CHECKPOINT_H_
#define STRFNET_CHECKPOINT_H_

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"
#include "strfnet/adam.h"
#include "strfnet/model.h"

namespace strfnet {

constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  std::unique_ptr<Model> model;
  AdamState optimizer;
  uint64_t seed = 0;
  // Free-form extras, e.g. the dev-selected threshold.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

// JSON document with the model config, every parameter by name, the BN
// running statistics, the Adam moments and the seed.
nlohmann::ordered_json CheckpointToJson(const Model &model, const AdamState &optimizer, uint64_t seed,
                                        const nlohmann::ordered_json &extra = nlohmann::ordered_json::object());
// Rejects unknown versions and any mismatch between the stored tensors and
// the model the stored config builds.
Checkpoint CheckpointFromJson(const nlohmann::json &j);

void SaveCheckpoint(const std::string &path, const Model &model, const AdamState &optimizer, uint64_t seed,
                    const nlohmann::ordered_json &extra = nlohmann::ordered_json::object());
Checkpoint LoadCheckpoint(const std::string &path);

}  // namespace strfnet

#endif  // STRFNET_CHECKPOINT_H_
