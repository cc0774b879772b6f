// tests/checkpoint_test.cc

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


#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "strfnet/adam.h"
#include "strfnet/checkpoint.h"
#include "strfnet/random.h"

namespace strfnet {
namespace {

ModelConfig SmallHybrid() {
  ModelConfig c;
  c.first_layer = FirstLayerKind::kHybrid;
  c.n_generic = 2;
  c.n_strf = 2;
  c.n_bands = 20;
  c.n_residual_blocks = 1;
  c.residual_channels = 3;
  c.fc_dim = 4;
  c.gru_hidden = 3;
  c.gru_layers = 1;
  c.attention_dim = 2;
  c.mlp_hidden = 4;
  return c;
}

// A model that has taken one optimizer step, so moments and running
// statistics are non-trivial.
std::pair<Model, AdamState> Trained() {
  Model m(SmallHybrid(), 3);
  RandomSource rng(4);
  std::vector<Spectrogram> batch(4);
  for (Spectrogram &s : batch) {
    s.num_frames = 55;
    s.num_bands = 20;
    s.values.resize(55 * 20);
    for (double &v : s.values) v = rng.Normal();
  }
  Adam adam;
  m.ForwardBackward(batch, {0, 1, 1, 0});
  adam.Step(m.Params());
  return {m, adam.state()};
}

TEST_CASE("checkpoints round trip byte for byte") {
  auto [model, state] = Trained();
  nlohmann::ordered_json extra;
  extra["threshold"] = 0.37;
  const std::string first = CheckpointToJson(model, state, 3, extra).dump();
  const Checkpoint back = CheckpointFromJson(nlohmann::json::parse(first));
  CHECK(back.seed == 3);
  CHECK(back.optimizer.step == 1);
  CHECK(back.extra["threshold"] == 0.37);
  CHECK(CheckpointToJson(*back.model, back.optimizer, back.seed, back.extra).dump() == first);
  const auto pa = model.Params();
  const auto pb = back.model->Params();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i) CHECK(pa[i]->value == pb[i]->value);
  const auto na = model.Norms();
  const auto nb = back.model->Norms();
  for (size_t i = 0; i < na.size(); ++i) CHECK(na[i]->running_var == nb[i]->running_var);
}

TEST_CASE("checkpoint files reload to the same predictions") {
  auto [model, state] = Trained();
  const auto path = std::filesystem::temp_directory_path() / "strfnet_checkpoint_test.json";
  SaveCheckpoint(path.string(), model, state, 3);
  const Checkpoint back = LoadCheckpoint(path.string());
  Spectrogram s;
  s.num_frames = 60;
  s.num_bands = 20;
  s.values.assign(60 * 20, 0.25);
  CHECK(back.model->PredictLive(s) == model.PredictLive(s));
  std::filesystem::remove(path);
}

TEST_CASE("mismatched or malformed checkpoints are rejected") {
  auto [model, state] = Trained();
  nlohmann::json j = nlohmann::json::parse(CheckpointToJson(model, state, 3).dump());
  nlohmann::json wrong = j;
  wrong["model_config"]["residual_channels"] = 5;
  CHECK_THROWS_AS(CheckpointFromJson(wrong), std::invalid_argument);
  wrong = j;
  wrong["version"] = kCheckpointVersion + 1;
  CHECK_THROWS_AS(CheckpointFromJson(wrong), std::invalid_argument);
  wrong = j;
  wrong["format"] = "other";
  CHECK_THROWS_AS(CheckpointFromJson(wrong), std::invalid_argument);
  wrong = j;
  wrong.erase("params");
  CHECK_THROWS_AS(CheckpointFromJson(wrong), std::invalid_argument);
}

}  // namespace
}  // namespace strfnet
