// tests/cli_test.cc

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
#include "json.hpp"
#include "strfnet/cli.h"

namespace strfnet {
namespace {

namespace fs = std::filesystem;

const std::string kData = STRFNET_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run Cli(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

fs::path Scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("strfnet_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST_CASE("usage errors exit 2 with a JSON record") {
  const Run none = Cli({});
  CHECK(none.code == kExitUsage);
  const Run missing = Cli({"score"});
  CHECK(missing.code == kExitUsage);
  const auto rec = nlohmann::json::parse(missing.err);
  CHECK(rec["error"] == "usage");
  CHECK(rec["command"] == "score");
  CHECK(Cli({"train", "--bogus"}).code == kExitUsage);
  CHECK(Cli({"score", "--scores", "/nonexistent.jsonl"}).code == kExitUsage);
  CHECK(Cli({"--help"}).code == kExitOk);
}

TEST_CASE("score reports the six-score example") {
  const Run r = Cli({"score", "--scores", kData + "/six_scores.jsonl", "--max-gap", "0"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["eer"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(j["max_gap_segments"] == 0);
}

TEST_CASE("runtime failures exit 1") {
  const Run r = Cli({"score", "--scores", kData + "/six_scores.jsonl", "--out", "/proc/strfnet_cannot_write"});
  CHECK(r.code == kExitRuntime);
  CHECK(nlohmann::json::parse(r.err)["error"] == "runtime");
}

TEST_CASE("synth, train, eval and dump-kernels run end to end deterministically") {
  const std::string cfg = kData + "/tiny_experiment.json";
  const fs::path d1 = Scratch("data1"), d2 = Scratch("data2");
  REQUIRE(Cli({"synth-data", "--config", cfg, "--out", d1.string()}).code == kExitOk);
  REQUIRE(Cli({"synth-data", "--config", cfg, "--out", d2.string()}).code == kExitOk);
  CHECK(Slurp(d1 / "manifest.json") == Slurp(d2 / "manifest.json"));
  CHECK(Slurp(d1 / "dev" / "session_001.wav") == Slurp(d2 / "dev" / "session_001.wav"));
  CHECK(Slurp(d1 / "eval" / "session_000.timeline.jsonl") == Slurp(d2 / "eval" / "session_000.timeline.jsonl"));

  const fs::path t1 = Scratch("train1"), t2 = Scratch("train2");
  REQUIRE(Cli({"train", "--config", cfg, "--data", d1.string(), "--out", t1.string()}).code == kExitOk);
  REQUIRE(Cli({"train", "--config", cfg, "--data", d1.string(), "--out", t2.string()}).code == kExitOk);
  CHECK(Slurp(t1 / "checkpoint.json") == Slurp(t2 / "checkpoint.json"));
  CHECK(Slurp(t1 / "train_log.jsonl") == Slurp(t2 / "train_log.jsonl"));
  CHECK(fs::exists(t1 / "train_log.jsonl"));
  CHECK(fs::exists(t1 / "config.json"));

  const fs::path e1 = Scratch("eval1");
  const Run ev = Cli({"eval", "--config", (t1 / "config.json").string(), "--data", d1.string(), "--checkpoint",
                      (t1 / "checkpoint.json").string(), "--out", e1.string()});
  REQUIRE(ev.code == kExitOk);
  const auto metrics = nlohmann::json::parse(Slurp(e1 / "metrics.json"));
  CHECK(metrics["eval"]["threshold"] == metrics["dev"]["threshold"]);
  CHECK(fs::exists(e1 / "eval_scores.jsonl"));

  const fs::path k1 = Scratch("kernels");
  REQUIRE(Cli({"dump-kernels", "--checkpoint", (t1 / "checkpoint.json").string(), "--out", k1.string()}).code ==
          kExitOk);
  const auto manifest = nlohmann::json::parse(Slurp(k1 / "manifest.json"));
  REQUIRE(manifest["kernels"].size() == 4);
  for (const auto &k : manifest["kernels"]) {
    CHECK(fs::exists(k1 / k["file"].get<std::string>()));
    CHECK(fs::exists(k1 / k["dft_file"].get<std::string>()));
  }
  for (const fs::path &p : {d1, d2, t1, t2, e1, k1}) fs::remove_all(p);
}

TEST_CASE("a tampered checkpoint is a usage error") {
  const std::string cfg = kData + "/tiny_experiment.json";
  const fs::path t = Scratch("tampered");
  REQUIRE(Cli({"train", "--config", cfg, "--out", t.string()}).code == kExitOk);
  auto ck = nlohmann::json::parse(Slurp(t / "checkpoint.json"));
  ck["model_config"]["fc_dim"] = 5;
  std::ofstream(t / "bad.json") << ck.dump();
  const Run r = Cli({"eval", "--config", cfg, "--checkpoint", (t / "bad.json").string(), "--out",
                     (t / "eval").string()});
  CHECK(r.code == kExitUsage);
  CHECK(nlohmann::json::parse(r.err)["error"] == "usage");
  fs::remove_all(t);
}

}  // namespace
}  // namespace strfnet
