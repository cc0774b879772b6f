// src/pipeline.cc

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

#include "strfnet/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <stdexcept>

#include "strfnet/wav.h"

namespace strfnet {

namespace fs = std::filesystem;

namespace {
constexpr uint64_t kSessionStream = 100;
}

const char *SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kEval: return "eval";
  }
  return "?";
}

int SessionCount(const DataConfig &data, Split split) {
  switch (split) {
    case Split::kTrain: return data.train_sessions;
    case Split::kDev: return data.dev_sessions;
    case Split::kEval: return data.eval_sessions;
  }
  return 0;
}

std::vector<Session> SynthesizeSplit(const ExperimentConfig &config, Split split) {
  const int n = SessionCount(config.data, split);
  std::vector<Session> sessions(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      RandomSource rng = RandomSource::Derive(
          config.seed, {kSessionStream, static_cast<uint64_t>(split), static_cast<uint64_t>(i)});
      sessions[i] = BuildSession(config.sim, &rng);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const std::exception_ptr &e : errors)
    if (e) std::rethrow_exception(e);
  return sessions;
}

namespace {
std::string SessionStem(size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "session_%03zu", i);
  return buf;
}
}  // namespace

void WriteSplit(const std::vector<Session> &sessions, const std::string &dir) {
  fs::create_directories(dir);
  for (size_t i = 0; i < sessions.size(); ++i) {
    const fs::path stem = fs::path(dir) / SessionStem(i);
    WriteWavFile(sessions[i].wave, stem.string() + ".wav");
    WriteTimelineFile(sessions[i].timeline, stem.string() + ".timeline.jsonl");
  }
}

std::vector<Session> LoadSplit(const std::string &dir) {
  if (!fs::is_directory(dir)) throw std::invalid_argument("missing data directory " + dir);
  std::vector<fs::path> wavs;
  for (const fs::directory_entry &e : fs::directory_iterator(dir))
    if (e.path().extension() == ".wav") wavs.push_back(e.path());
  std::sort(wavs.begin(), wavs.end());
  if (wavs.empty()) throw std::invalid_argument("no .wav sessions in " + dir);
  std::vector<Session> out;
  for (const fs::path &w : wavs) {
    fs::path tl = w;
    tl.replace_extension(".timeline.jsonl");
    if (!fs::exists(tl)) throw std::invalid_argument("missing timeline " + tl.string());
    Session s;
    s.wave = ReadWavFile(w.string());
    s.timeline = ReadTimelineFile(tl.string());
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Session> SessionsFor(const ExperimentConfig &config, Split split, const std::string &data_dir) {
  if (data_dir.empty()) return SynthesizeSplit(config, split);
  return LoadSplit((fs::path(data_dir) / SplitName(split)).string());
}

FeatureBank FeaturesFor(const ExperimentConfig &config, const std::vector<Session> &sessions) {
  return BuildFeatureBank(sessions, config.frontend, config.data.segment_s, config.data.live_overlap_threshold);
}

}  // namespace strfnet
