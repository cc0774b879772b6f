// src/checkpoint.cc

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

#include "strfnet/checkpoint.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "strfnet/config.h"

namespace strfnet {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json CheckpointToJson(const Model &model, const AdamState &optimizer, uint64_t seed,
                              const ordered_json &extra) {
  ordered_json j;
  j["format"] = "strfnet-checkpoint";
  j["version"] = kCheckpointVersion;
  j["seed"] = seed;
  j["model_config"] = ToJson(model.config());
  ordered_json params = ordered_json::object();
  for (const Param *p : model.Params()) params[p->name] = p->value;
  j["params"] = params;
  ordered_json norms = ordered_json::object();
  for (const BatchNormLayer *n : model.Norms()) {
    ordered_json e;
    e["running_mean"] = n->running_mean;
    e["running_var"] = n->running_var;
    norms[n->gamma.name] = e;
  }
  j["batch_norm"] = norms;
  ordered_json adam;
  adam["step"] = optimizer.step;
  ordered_json m = ordered_json::object(), v = ordered_json::object();
  const std::vector<const Param *> ps = model.Params();
  if (!optimizer.m.empty()) {
    if (optimizer.m.size() != ps.size()) throw std::invalid_argument("optimizer state does not match the model");
    for (size_t i = 0; i < ps.size(); ++i) {
      m[ps[i]->name] = optimizer.m[i];
      v[ps[i]->name] = optimizer.v[i];
    }
  }
  adam["m"] = m;
  adam["v"] = v;
  j["adam"] = adam;
  j["extra"] = extra;
  return j;
}

namespace {
std::vector<double> Vector(const json &j, const std::string &what, size_t expected) {
  std::vector<double> v = j.get<std::vector<double>>();
  if (v.size() != expected)
    throw std::invalid_argument("checkpoint tensor " + what + " has " + std::to_string(v.size()) +
                                " values, model expects " + std::to_string(expected));
  return v;
}
}  // namespace

Checkpoint CheckpointFromJson(const json &j) {
  try {
    if (j.value("format", "") != "strfnet-checkpoint") throw std::invalid_argument("not a strfnet checkpoint");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw std::invalid_argument("unsupported checkpoint version " + std::to_string(version));
    Checkpoint c;
    c.seed = j.at("seed").get<uint64_t>();
    c.model = std::make_unique<Model>(ModelConfigFromJson(j.at("model_config")), c.seed);
    const json &params = j.at("params");
    std::vector<Param *> ps = c.model->Params();
    if (params.size() != ps.size()) throw std::invalid_argument("checkpoint parameter set does not match its config");
    for (Param *p : ps) {
      if (!params.contains(p->name)) throw std::invalid_argument("checkpoint lacks parameter " + p->name);
      p->value = Vector(params[p->name], p->name, p->size());
    }
    const json &norms = j.at("batch_norm");
    for (BatchNormLayer *n : c.model->Norms()) {
      if (!norms.contains(n->gamma.name)) throw std::invalid_argument("checkpoint lacks statistics for " + n->gamma.name);
      const json &e = norms[n->gamma.name];
      n->running_mean = Vector(e.at("running_mean"), n->gamma.name + " mean", n->channels);
      n->running_var = Vector(e.at("running_var"), n->gamma.name + " var", n->channels);
    }
    const json &adam = j.at("adam");
    c.optimizer.step = adam.at("step").get<int64_t>();
    const json &m = adam.at("m"), &v = adam.at("v");
    if (!m.empty()) {
      for (Param *p : ps) {
        c.optimizer.m.push_back(Vector(m.at(p->name), "adam.m." + p->name, p->size()));
        c.optimizer.v.push_back(Vector(v.at(p->name), "adam.v." + p->name, p->size()));
      }
    }
    if (j.contains("extra")) c.extra = j["extra"];
    return c;
  } catch (const json::exception &e) {
    throw std::invalid_argument(std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const std::string &path, const Model &model, const AdamState &optimizer, uint64_t seed,
                    const ordered_json &extra) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << CheckpointToJson(model, optimizer, seed, extra).dump(1) << '\n';
  if (!os) throw std::runtime_error("failed writing " + path);
}

Checkpoint LoadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error &e) {
    throw std::invalid_argument("checkpoint " + path + " is not valid JSON: " + e.what());
  }
  return CheckpointFromJson(j);
}

}  // namespace strfnet
