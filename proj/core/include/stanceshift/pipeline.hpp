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

#ifndef STANCESHIFT_PIPELINE_HPP_
#define STANCESHIFT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stanceshift/annotation.hpp"
#include "stanceshift/common.hpp"
#include "stanceshift/series.hpp"
#include "stanceshift/timeutil.hpp"

namespace stanceshift::pipeline {

inline constexpr const char* kOutputRootEnv = "STANCESHIFT_OUTPUT_ROOT";

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitStageFailure = 1;
inline constexpr int kExitConfigError = 2;

// Invalid or unreadable configuration (maps to kExitConfigError).
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string_view tool_version();

enum class Stage { kIngest, kFilter, kSentiment, kStance, kTermshift, kGranger, kEval };

inline constexpr Stage kAllStages[] = {Stage::kIngest,    Stage::kFilter,  Stage::kSentiment,
                                       Stage::kStance,    Stage::kTermshift, Stage::kGranger,
                                       Stage::kEval};

std::string_view stage_name(Stage s);
std::optional<Stage> parse_stage(std::string_view s);

struct PipelinePaths {
  std::filesystem::path tweets;
  std::filesystem::path outlets;
  std::filesystem::path labels;       // optional
  std::filesystem::path predictions;  // optional; replaces labels for the stance series
  std::filesystem::path lexicon;
  std::filesystem::path stopwords;  // optional
  std::filesystem::path entities;   // optional
  std::filesystem::path lemmas;     // optional
};

struct PipelineConfig {
  std::string name = "run";
  PipelinePaths paths;
  TimeWindow window;  // defaults to 2021-09-01 .. 2022-09-01 UTC
  bool window_filter = true;
  std::vector<std::string> countries;  // empty keeps every country
  std::set<std::string> keywords;      // defaults to the migration keywords
  Bucketing bucketing = Bucketing::kWeek;
  std::uint64_t seed = 42;
  std::size_t min_replies = 5;
  std::string reply_lang;  // empty keeps every language
  bool exclude_zero = true;
  series::StanceScalar stance_scalar = series::StanceScalar::kSignedMean;
  annotation::MergePolicy label_merge = annotation::MergePolicy::kKeepFirst;
  std::string termshift_foreground = "2022-03";
  std::string termshift_background = "2021-11";
  std::size_t termshift_k = 10;
  int max_lag = 4;
  std::size_t folds = 5;
  bool eval_bow = false;
  std::vector<double> bow_l2_grid;  // empty: fixed L2
  std::vector<Stage> stages;  // defaults to every stage
  std::optional<std::filesystem::path> output_dir;
  // The adapter block of the shared config, carried through verbatim.
  std::string adapter_json = "{}";

  PipelineConfig();

  // Throws ConfigError. Relative paths resolve against `base_dir`.
  static PipelineConfig parse(std::string_view json_text,
                              const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);

  // Canonical form: sorted keys, absolute paths, every field spelled out,
  // output_dir omitted. parse(to_json()) reproduces the config.
  std::string to_json() const;

  void validate() const;
  bool requested(Stage s) const;
};

enum class StageStatus { kOk, kFailed, kBlocked, kSkipped };

std::string_view stage_status_name(StageStatus s);

struct StageResult {
  Stage stage = Stage::kIngest;
  StageStatus status = StageStatus::kSkipped;
  std::string message;
};

struct InputDigest {
  std::string role;
  std::filesystem::path path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct ReportBundle {
  std::filesystem::path root;
  std::vector<StageResult> stages;
  std::vector<std::filesystem::path> files;  // relative to root, sorted
  std::string config_hash;
  std::string run_hash;

  // 1 when a requested stage failed or was blocked, else 0.
  int exit_code() const;
  const StageResult& stage(Stage s) const;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Digests of every configured input file that exists.
std::vector<InputDigest> digest_inputs(const PipelineConfig& config);

// Hash over the canonical config and the input digests.
std::string run_hash(const PipelineConfig& config, const std::vector<InputDigest>& inputs);

// --out flag, then $STANCESHIFT_OUTPUT_ROOT/<name>, then the config's
// output_dir, then ./stanceshift-out/<name>.
std::filesystem::path resolve_output_dir(const PipelineConfig& config,
                                         const std::optional<std::filesystem::path>& flag);

// Writes tables/, figures/, stages.csv and run_manifest.json under `out`.
// Stage failures are recorded, not thrown; ConfigError propagates.
ReportBundle run_pipeline(const PipelineConfig& config, const std::filesystem::path& out);

// Reads run_manifest.json, checks the recorded input digests and returns
// the embedded config. Throws ConfigError when an input changed.
PipelineConfig config_from_manifest(const std::filesystem::path& manifest);

}  // namespace stanceshift::pipeline

#endif  // STANCESHIFT_PIPELINE_HPP_
