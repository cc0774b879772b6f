// src/config.cc

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

#include "strfnet/config.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace strfnet {

namespace {
using nlohmann::json;
using nlohmann::ordered_json;

void MergeStrict(ordered_json *base, const json &patch, const std::string &path) {
  if (!patch.is_object()) throw std::invalid_argument("config section " + (path.empty() ? "<root>" : path) + " must be an object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base->contains(it.key())) throw std::invalid_argument("unknown config key: " + key);
    ordered_json &slot = (*base)[it.key()];
    if (slot.is_object()) MergeStrict(&slot, it.value(), key);
    else slot = it.value();
  }
}

template <typename T>
T Get(const json &j, const char *key, const std::string &section) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw std::invalid_argument("config key " + section + "." + key + ": " + e.what());
  }
}

ordered_json ToJson(const FrontendConfig &c) {
  ordered_json j;
  j["window_ms"] = c.window_ms;
  j["overlap_fraction"] = c.overlap_fraction;
  j["dft_size"] = c.dft_size;
  j["n_mel_bands"] = c.n_mel_bands;
  j["log_floor"] = c.log_floor;
  return j;
}

ordered_json ToJson(const TrainConfig &c) {
  ordered_json j;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["patience_epochs"] = c.patience_epochs;
  j["max_epochs"] = c.max_epochs;
  j["segments_per_epoch"] = c.segments_per_epoch;
  j["snr_grid"] = c.snr_grid;
  j["augment"] = c.augment;
  j["max_gap_segments"] = c.max_gap_segments;
  return j;
}

ordered_json ToJson(const AugmentPolicy &c) {
  ordered_json j;
  j["n_freq_masks"] = c.n_freq_masks;
  j["max_freq_mask_width"] = c.max_freq_mask_width;
  j["n_time_masks"] = c.n_time_masks;
  j["max_time_mask_width"] = c.max_time_mask_width;
  j["time_warp_max_shift"] = c.time_warp_max_shift;
  j["mask_value"] = c.mask_value;
  return j;
}

ordered_json ToJson(const SessionConfig &c) {
  ordered_json j;
  j["duration_s"] = c.duration_s;
  j["live_fraction"] = c.live_fraction;
  j["min_utterance_s"] = c.min_utterance_s;
  j["max_utterance_s"] = c.max_utterance_s;
  j["overlap_probability"] = c.overlap_probability;
  j["distractor_min_s"] = c.distractor_min_s;
  j["distractor_max_s"] = c.distractor_max_s;
  j["distractor_gap_min_s"] = c.distractor_gap_min_s;
  j["distractor_gap_max_s"] = c.distractor_gap_max_s;
  j["snr_min_db"] = c.snr_min_db;
  j["snr_max_db"] = c.snr_max_db;
  j["noise_floor_rms"] = c.noise_floor_rms;
  j["sample_rate"] = c.sample_rate;
  return j;
}

ordered_json ToJson(const DataConfig &c) {
  ordered_json j;
  j["train_sessions"] = c.train_sessions;
  j["dev_sessions"] = c.dev_sessions;
  j["eval_sessions"] = c.eval_sessions;
  j["segment_s"] = c.segment_s;
  j["live_overlap_threshold"] = c.live_overlap_threshold;
  return j;
}

const char *const kGridKeys[] = {"n_bands", "frame_rate", "channels_per_octave"};
}  // namespace

ordered_json ToJson(const ModelConfig &c) {
  ordered_json j;
  j["first_layer"] = FirstLayerName(c.first_layer);
  j["n_generic"] = c.n_generic;
  j["n_strf"] = c.n_strf;
  j["learnable_strf"] = c.learnable_strf;
  j["n_bands"] = c.n_bands;
  j["frame_rate"] = c.frame_rate;
  j["channels_per_octave"] = c.channels_per_octave;
  j["strf_time_support_s"] = c.strf_time_support_s;
  j["strf_channel_support"] = c.strf_channel_support;
  j["hilbert_dft_size"] = c.hilbert_dft_size;
  j["n_residual_blocks"] = c.n_residual_blocks;
  j["residual_channels"] = c.residual_channels;
  j["residual_stride_bands"] = c.residual_stride_bands;
  j["fc_dim"] = c.fc_dim;
  j["gru_hidden"] = c.gru_hidden;
  j["gru_layers"] = c.gru_layers;
  j["attention_dim"] = c.attention_dim;
  j["mlp_hidden"] = c.mlp_hidden;
  j["n_outputs"] = c.n_outputs;
  return j;
}

ModelConfig ModelConfigFromJson(const json &in) {
  ordered_json merged = ToJson(ModelConfig{});
  MergeStrict(&merged, in, "model");
  const json j = merged;
  const std::string s = "model";
  ModelConfig c;
  c.first_layer = FirstLayerFromName(Get<std::string>(j, "first_layer", s));
  c.n_generic = Get<int>(j, "n_generic", s);
  c.n_strf = Get<int>(j, "n_strf", s);
  c.learnable_strf = Get<bool>(j, "learnable_strf", s);
  c.n_bands = Get<int>(j, "n_bands", s);
  c.frame_rate = Get<double>(j, "frame_rate", s);
  c.channels_per_octave = Get<double>(j, "channels_per_octave", s);
  c.strf_time_support_s = Get<double>(j, "strf_time_support_s", s);
  c.strf_channel_support = Get<int>(j, "strf_channel_support", s);
  c.hilbert_dft_size = Get<int>(j, "hilbert_dft_size", s);
  c.n_residual_blocks = Get<int>(j, "n_residual_blocks", s);
  c.residual_channels = Get<int>(j, "residual_channels", s);
  c.residual_stride_bands = Get<int>(j, "residual_stride_bands", s);
  c.fc_dim = Get<int>(j, "fc_dim", s);
  c.gru_hidden = Get<int>(j, "gru_hidden", s);
  c.gru_layers = Get<int>(j, "gru_layers", s);
  c.attention_dim = Get<int>(j, "attention_dim", s);
  c.mlp_hidden = Get<int>(j, "mlp_hidden", s);
  c.n_outputs = Get<int>(j, "n_outputs", s);
  return c;
}

ordered_json ToJson(const ExperimentConfig &c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["frontend"] = ToJson(c.frontend);
  ordered_json model = ToJson(c.model);
  for (const char *k : kGridKeys) model.erase(k);
  j["model"] = model;
  j["train"] = ToJson(c.train);
  j["augment"] = ToJson(c.augment);
  j["sim"] = ToJson(c.sim);
  j["data"] = ToJson(c.data);
  return j;
}

ExperimentConfig ExperimentConfigFromJson(const json &in) {
  ordered_json merged = ToJson(ExperimentConfig{});
  MergeStrict(&merged, in, "");
  const json j = merged;
  ExperimentConfig c;
  c.seed = Get<uint64_t>(j, "seed", "");

  const json &fe = j["frontend"];
  c.frontend.window_ms = Get<double>(fe, "window_ms", "frontend");
  c.frontend.overlap_fraction = Get<double>(fe, "overlap_fraction", "frontend");
  c.frontend.dft_size = Get<int>(fe, "dft_size", "frontend");
  c.frontend.n_mel_bands = Get<int>(fe, "n_mel_bands", "frontend");
  c.frontend.log_floor = Get<double>(fe, "log_floor", "frontend");

  c.model = ModelConfigFromJson(j["model"]);

  const json &tr = j["train"];
  c.train.learning_rate = Get<double>(tr, "learning_rate", "train");
  c.train.batch_size = Get<int>(tr, "batch_size", "train");
  c.train.patience_epochs = Get<int>(tr, "patience_epochs", "train");
  c.train.max_epochs = Get<int>(tr, "max_epochs", "train");
  c.train.segments_per_epoch = Get<int>(tr, "segments_per_epoch", "train");
  c.train.snr_grid = Get<std::vector<double>>(tr, "snr_grid", "train");
  c.train.augment = Get<bool>(tr, "augment", "train");
  c.train.max_gap_segments = Get<int>(tr, "max_gap_segments", "train");

  const json &au = j["augment"];
  c.augment.n_freq_masks = Get<int>(au, "n_freq_masks", "augment");
  c.augment.max_freq_mask_width = Get<int>(au, "max_freq_mask_width", "augment");
  c.augment.n_time_masks = Get<int>(au, "n_time_masks", "augment");
  c.augment.max_time_mask_width = Get<int>(au, "max_time_mask_width", "augment");
  c.augment.time_warp_max_shift = Get<int>(au, "time_warp_max_shift", "augment");
  c.augment.mask_value = Get<double>(au, "mask_value", "augment");

  const json &sm = j["sim"];
  c.sim.duration_s = Get<double>(sm, "duration_s", "sim");
  c.sim.live_fraction = Get<double>(sm, "live_fraction", "sim");
  c.sim.min_utterance_s = Get<double>(sm, "min_utterance_s", "sim");
  c.sim.max_utterance_s = Get<double>(sm, "max_utterance_s", "sim");
  c.sim.overlap_probability = Get<double>(sm, "overlap_probability", "sim");
  c.sim.distractor_min_s = Get<double>(sm, "distractor_min_s", "sim");
  c.sim.distractor_max_s = Get<double>(sm, "distractor_max_s", "sim");
  c.sim.distractor_gap_min_s = Get<double>(sm, "distractor_gap_min_s", "sim");
  c.sim.distractor_gap_max_s = Get<double>(sm, "distractor_gap_max_s", "sim");
  c.sim.snr_min_db = Get<double>(sm, "snr_min_db", "sim");
  c.sim.snr_max_db = Get<double>(sm, "snr_max_db", "sim");
  c.sim.noise_floor_rms = Get<double>(sm, "noise_floor_rms", "sim");
  c.sim.sample_rate = Get<int>(sm, "sample_rate", "sim");

  const json &da = j["data"];
  c.data.train_sessions = Get<int>(da, "train_sessions", "data");
  c.data.dev_sessions = Get<int>(da, "dev_sessions", "data");
  c.data.eval_sessions = Get<int>(da, "eval_sessions", "data");
  c.data.segment_s = Get<double>(da, "segment_s", "data");
  c.data.live_overlap_threshold = Get<double>(da, "live_overlap_threshold", "data");

  c.Finalize();
  return c;
}

void ExperimentConfig::Finalize() {
  frontend.Validate(sim.sample_rate);
  sim.Validate();
  model.ForFrontend(frontend, sim.sample_rate);
  model.Validate();
  train.seed = seed;
  train.Validate();
  if (augment.n_freq_masks < 0 || augment.max_freq_mask_width < 0 || augment.n_time_masks < 0 ||
      augment.max_time_mask_width < 0 || augment.time_warp_max_shift < 0)
    throw std::invalid_argument("augment counts and widths must be >= 0");
  if (data.train_sessions < 1 || data.dev_sessions < 1 || data.eval_sessions < 1)
    throw std::invalid_argument("each data split needs at least one session");
  if (!(data.segment_s > 0.0) || data.segment_s > sim.duration_s)
    throw std::invalid_argument("segment_s must be positive and no longer than a session");
  if (!(data.live_overlap_threshold > 0.0 && data.live_overlap_threshold <= 1.0))
    throw std::invalid_argument("live_overlap_threshold must lie in (0, 1]");
}

void ApplyOverride(json *j, const std::string &assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override must look like a.b=value: " + assignment);
  const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error &) {
    value = text;
  }
  json *node = j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw std::invalid_argument("empty component in override path " + path);
    if (i + 1 == parts.size()) {
      (*node)[parts[i]] = value;
    } else {
      json &next = (*node)[parts[i]];
      if (next.is_null()) next = json::object();
      if (!next.is_object()) throw std::invalid_argument("override path " + path + " crosses a non-object");
      node = &next;
    }
  }
}

ExperimentConfig LoadExperimentConfig(const std::string &path, const std::vector<std::string> &overrides) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read config " + path);
    try {
      j = json::parse(is);
    } catch (const json::parse_error &e) {
      throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
    }
  }
  for (const std::string &o : overrides) ApplyOverride(&j, o);
  return ExperimentConfigFromJson(j);
}

}  // namespace strfnet
