// tests/config_test.cc

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


#include <string>

#include "doctest.h"
#include "strfnet/config.h"

namespace strfnet {
namespace {

const std::string kTiny = std::string(STRFNET_TEST_DATA_DIR) + "/tiny_experiment.json";

TEST_CASE("defaults follow the front end and the training recipe") {
  const ExperimentConfig c = LoadExperimentConfig("", {});
  CHECK(c.frontend.WindowSamples(11025) == 220);
  CHECK(c.model.n_bands == 40);
  CHECK(c.model.frame_rate == doctest::Approx(11025.0 / 110.0));
  CHECK(c.model.channels_per_octave > 8.0);
  CHECK(c.train.learning_rate == 1e-4);
  CHECK(c.train.batch_size == 64);
  CHECK(c.train.snr_grid == std::vector<double>{5, 10, 15, 20, 25, 30, 40});
}

TEST_CASE("files and overrides are applied in order") {
  const ExperimentConfig c =
      LoadExperimentConfig(kTiny, {"train.learning_rate=0.01", "model.first_layer=\"strf\"", "model.n_generic=0",
                                   "seed=5", "sim.live_fraction=0.2"});
  CHECK(c.seed == 5);
  CHECK(c.train.learning_rate == 0.01);
  CHECK(c.train.batch_size == 4);
  CHECK(c.model.first_layer == FirstLayerKind::kStrf);
  CHECK(c.sim.live_fraction == 0.2);
  CHECK(c.data.dev_sessions == 2);
  const ExperimentConfig bare = LoadExperimentConfig(kTiny, {"model.first_layer=generic", "model.n_strf=0"});
  CHECK(bare.model.first_layer == FirstLayerKind::kGeneric);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(LoadExperimentConfig(kTiny, {"train.learning_rat=0.1"}), std::invalid_argument);
  CHECK_THROWS_AS(LoadExperimentConfig(kTiny, {"model.gru_hidden=\"big\""}), std::invalid_argument);
  CHECK_THROWS_AS(LoadExperimentConfig(kTiny, {"train.learning_rate=-1"}), std::invalid_argument);
  CHECK_THROWS_AS(LoadExperimentConfig(kTiny, {"novalue"}), std::invalid_argument);
  CHECK_THROWS_AS(LoadExperimentConfig("/nonexistent/config.json", {}), std::invalid_argument);
}

TEST_CASE("the written config reloads to the same config") {
  const ExperimentConfig c = LoadExperimentConfig(kTiny, {"seed=9"});
  const nlohmann::ordered_json j = ToJson(c);
  const ExperimentConfig back = ExperimentConfigFromJson(nlohmann::json::parse(j.dump()));
  CHECK(ToJson(back).dump() == j.dump());
}

}  // namespace
}  // namespace strfnet
