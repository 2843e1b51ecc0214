// Copyright 2026 The stanceshift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <cstdlib>

#include "stanceshift/pipeline.hpp"
#include "test_support.hpp"

using namespace stanceshift;
using namespace stanceshift::pipeline;
namespace fs = std::filesystem;

namespace {

PipelineConfig fixture_config() {
  auto cfg = PipelineConfig::load(testing::data_dir() / "fixture" / "config.json");
  cfg.eval_bow = false;  // keeps the unit suite fast; the acceptance run covers it
  return cfg;
}

}  // namespace

TEST_CASE("stage names") {
  for (Stage s : kAllStages) CHECK(parse_stage(stage_name(s)) == s);
  CHECK_FALSE(parse_stage("deploy").has_value());
}

TEST_CASE("fixture config loads and round trips through canonical json") {
  const auto cfg = PipelineConfig::load(testing::data_dir() / "fixture" / "config.json");
  CHECK(cfg.name == "fixture");
  CHECK(cfg.countries.size() == 5);
  CHECK(cfg.paths.tweets.is_absolute());
  CHECK(fs::exists(cfg.paths.lexicon));
  CHECK(cfg.keywords.size() == 8);
  CHECK(cfg.adapter_json.find("batch_size") != std::string::npos);
  const auto again = PipelineConfig::parse(cfg.to_json(), "/");
  CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("invalid configurations raise ConfigError") {
  const fs::path base = testing::data_dir() / "fixture";
  CHECK_THROWS_AS(PipelineConfig::parse("{", base), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::parse(R"({"nmae":"x"})", base), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::parse(R"({"bucketing":"day"})", base), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::parse(R"({"granger":{"max_lag":0}})", base), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::parse(R"({"stages":["ingest","deploy"]})", base), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::parse(
                      R"({"window":{"start":"2022-09-01T00:00:00Z","end":"2021-09-01T00:00:00Z"}})", base),
                  ConfigError);
  CHECK_THROWS_AS(PipelineConfig::parse(R"({"countries":["pl"]})", base), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::load(base / "missing.json"), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::parse(R"({"eval":{"l2_grid":[1.0,-2.0]}})", base), ConfigError);
  CHECK_NOTHROW(PipelineConfig::parse(R"({"filter":{"min_replies":0}})", base));
  const auto grid = PipelineConfig::parse(R"({"eval":{"l2_grid":[0.1,1.0,10.0]}})", base);
  CHECK(grid.bow_l2_grid == std::vector<double>{0.1, 1.0, 10.0});
  CHECK(PipelineConfig::parse(grid.to_json(), base).bow_l2_grid == grid.bow_l2_grid);
}

TEST_CASE("output directory precedence") {
  auto cfg = fixture_config();
  ::unsetenv(kOutputRootEnv);
  CHECK(resolve_output_dir(cfg, std::nullopt) == fs::path("stanceshift-out") / "fixture");
  cfg.output_dir = "/tmp/configured";
  CHECK(resolve_output_dir(cfg, std::nullopt) == fs::path("/tmp/configured"));
  ::setenv(kOutputRootEnv, "/tmp/root", 1);
  CHECK(resolve_output_dir(cfg, std::nullopt) == fs::path("/tmp/root") / "fixture");
  CHECK(resolve_output_dir(cfg, fs::path("/tmp/flag")) == fs::path("/tmp/flag"));
  ::unsetenv(kOutputRootEnv);
}

TEST_CASE("run hash tracks config fields and input contents") {
  testing::TempDir tmp("hash");
  auto cfg = fixture_config();
  const fs::path tweets = tmp.path() / "tweets.jsonl";
  fs::copy_file(cfg.paths.tweets, tweets);
  cfg.paths.tweets = tweets;
  const auto h0 = run_hash(cfg, digest_inputs(cfg));
  CHECK(h0 == run_hash(cfg, digest_inputs(cfg)));
  CHECK(h0.size() == 64);

  auto seed = cfg;
  seed.seed = 43;
  CHECK(run_hash(seed, digest_inputs(seed)) != h0);
  auto lag = cfg;
  lag.max_lag = 3;
  CHECK(run_hash(lag, digest_inputs(lag)) != h0);
  auto out = cfg;
  out.output_dir = "/elsewhere";
  CHECK(run_hash(out, digest_inputs(out)) == h0);

  testing::write_file(tweets, testing::read_file(tweets) + "\n");
  CHECK(run_hash(cfg, digest_inputs(cfg)) != h0);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fixture pipeline completes with a full bundle") {
  testing::TempDir tmp("run");
  const auto cfg = fixture_config();
  const auto bundle = run_pipeline(cfg, tmp.path() / "out");
  for (const auto& s : bundle.stages) {
    CHECK_MESSAGE(s.status == StageStatus::kOk, stage_name(s.stage) << ": " << s.message);
  }
  CHECK(bundle.exit_code() == kExitOk);
  const fs::path root = tmp.path() / "out";
  for (const char* f : {"stages.csv", "run_manifest.json", "tables/granger.csv", "tables/termshift.csv",
                        "tables/agreement.csv", "tables/eval_crossval.csv",
                        "tables/eval_crosslingual.csv", "data/rehydration_manifest.txt"}) {
    CHECK_MESSAGE(fs::exists(root / f), f);
  }
  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(root / "figures")) {
    if (e.path().extension() != ".svg") continue;
    ++svgs;
    auto twin = e.path();
    twin.replace_extension(".csv");
    CHECK_MESSAGE(fs::exists(twin), twin.string());
  }
  CHECK(svgs == 2 * (cfg.countries.size() + 1));
  CHECK(std::is_sorted(bundle.files.begin(), bundle.files.end()));
}

TEST_CASE("a missing lexicon fails sentiment and blocks granger only") {
  testing::TempDir tmp("nolex");
  auto cfg = fixture_config();
  cfg.paths.lexicon = tmp.path() / "absent.tsv";
  const auto bundle = run_pipeline(cfg, tmp.path() / "out");
  CHECK(bundle.stage(Stage::kSentiment).status == StageStatus::kFailed);
  CHECK(bundle.stage(Stage::kGranger).status == StageStatus::kBlocked);
  for (Stage s : {Stage::kIngest, Stage::kFilter, Stage::kStance, Stage::kTermshift, Stage::kEval}) {
    CHECK(bundle.stage(s).status == StageStatus::kOk);
  }
  CHECK(bundle.exit_code() == kExitStageFailure);
  const auto stages = testing::read_file(tmp.path() / "out" / "stages.csv");
  CHECK(stages.find("sentiment,failed") != std::string::npos);
}

TEST_CASE("unrequested stages are skipped") {
  testing::TempDir tmp("subset");
  auto cfg = fixture_config();
  cfg.stages = {Stage::kIngest, Stage::kFilter, Stage::kTermshift};
  const auto bundle = run_pipeline(cfg, tmp.path());
  CHECK(bundle.exit_code() == kExitOk);
  CHECK(bundle.stage(Stage::kTermshift).status == StageStatus::kOk);
  CHECK(bundle.stage(Stage::kGranger).status == StageStatus::kSkipped);
}

TEST_CASE("bundle regenerates byte-identically from its manifest") {
  testing::TempDir tmp("regen");
  auto cfg = fixture_config();
  const fs::path tweets = tmp.path() / "in" / "tweets.jsonl";
  fs::create_directories(tweets.parent_path());
  fs::copy_file(cfg.paths.tweets, tweets);
  cfg.paths.tweets = tweets;
  run_pipeline(cfg, tmp.path() / "a");
  const auto replay = config_from_manifest(tmp.path() / "a" / "run_manifest.json");
  CHECK(replay.to_json() == cfg.to_json());
  run_pipeline(replay, tmp.path() / "b");
  CHECK(testing::snapshot(tmp.path() / "a") == testing::snapshot(tmp.path() / "b"));

  testing::write_file(tweets, testing::read_file(tweets) + "\n");
  CHECK_THROWS_AS(config_from_manifest(tmp.path() / "a" / "run_manifest.json"), ConfigError);
}
