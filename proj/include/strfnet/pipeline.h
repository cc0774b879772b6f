// include/strfnet/pipeline.h

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

#ifndef STRFNET_PIPELINE_H_
#define STRFNET_PIPELINE_H_

#include <string>
#include <vector>

#include "strfnet/config.h"
#include "strfnet/sim.h"
#include "strfnet/trainer.h"

namespace strfnet {

enum class Split { kTrain = 0, kDev = 1, kEval = 2 };

const char *SplitName(Split split);
int SessionCount(const DataConfig &data, Split split);

// Sessions of one split, each a pure function of (config, seed, split, index).
std::vector<Session> SynthesizeSplit(const ExperimentConfig &config, Split split);

// <dir>/session_NNN.wav and <dir>/session_NNN.timeline.jsonl per session.
void WriteSplit(const std::vector<Session> &sessions, const std::string &dir);
// Reads every session_*.wav with its timeline, in name order.
std::vector<Session> LoadSplit(const std::string &dir);

// Sessions from |data_dir|/<split> when data_dir is nonempty, else
// synthesized from the config.
std::vector<Session> SessionsFor(const ExperimentConfig &config, Split split, const std::string &data_dir);

FeatureBank FeaturesFor(const ExperimentConfig &config, const std::vector<Session> &sessions);

}  // namespace strfnet

#endif  // STRFNET_PIPELINE_H_
