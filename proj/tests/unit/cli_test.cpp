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

#include <sys/wait.h>

#include <cstdlib>

#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

// Runs the CLI through the shell, capturing stdout.
Result run(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = env + " " + quote(STANCESHIFT_CLI_PATH) + " " + args + " > " +
                          quote(out.string()) + " 2> " + quote((dir / "stderr.txt").string());
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testing::read_file(out);
  return r;
}

std::string fixture(const char* name) { return quote((testing::data_dir() / "fixture" / name).string()); }
std::string lexicon() { return quote((testing::data_dir() / "lexicon" / "sentiment_lexicon.tsv").string()); }

}  // namespace

TEST_CASE("version, usage and parse errors") {
  testing::TempDir tmp("cli");
  CHECK(run("--version", tmp.path()).code == 0);
  CHECK(run("", tmp.path()).code == 2);
  CHECK(run("deploy", tmp.path()).code == 2);
  CHECK(run("series granger --x /nonexistent.csv --y /nonexistent.csv", tmp.path()).code == 2);
}

TEST_CASE("sentiment score of a single text") {
  testing::TempDir tmp("cli");
  const auto r = run("sentiment score --lexicon " + lexicon() + " --text good", tmp.path());
  CHECK(r.code == 0);
  CHECK(r.out == "0.440434\n");
  CHECK(run("sentiment score --lexicon /missing.tsv --text good", tmp.path()).code == 1);
}

TEST_CASE("annotation commands") {
  testing::TempDir tmp("cli");
  const auto a = run("annotate alpha --labels " + fixture("labels.csv"), tmp.path());
  CHECK(a.code == 0);
  CHECK(a.out.find("alpha") != std::string::npos);
  const auto s = run("annotate stats --labels " + fixture("labels.csv") + " --tag PL", tmp.path());
  CHECK(s.code == 0);
  CHECK(s.out.find("PL") != std::string::npos);
}

TEST_CASE("corpus filter, series and figure chain") {
  testing::TempDir tmp("cli");
  const std::string cfg = " --config " + fixture("config.json");
  const auto pairs = tmp.path() / "pairs.jsonl";
  CHECK(run("corpus filter" + cfg + " --min-replies 0 --out " + quote(pairs.string()), tmp.path()).code == 0);
  CHECK(fs::file_size(pairs) > 0);

  const auto stance = tmp.path() / "stance.csv";
  const auto scalar = tmp.path() / "stance_scalar.csv";
  CHECK(run("series stance" + cfg + " --pairs " + quote(pairs.string()) + " --bucket month --out " +
                quote(stance.string()) + " --scalar-out " + quote(scalar.string()),
            tmp.path())
            .code == 0);
  const auto sent = tmp.path() / "sentiment.csv";
  CHECK(run("series sentiment" + cfg + " --bucket month --out " + quote(sent.string()), tmp.path()).code == 0);
  const auto granger = run("series granger --x " + quote(sent.string()) + " --y " +
                               quote(scalar.string()) + " --max-lag 1",
                           tmp.path());
  CHECK(granger.code == 0);
  CHECK(granger.out.rfind("cause,effect,lag,status", 0) == 0);

  const auto svg = tmp.path() / "fig.svg";
  CHECK(run("figure --kind stacked-shares --csv " + quote(stance.string()) + " --out " + quote(svg.string()),
            tmp.path())
            .code == 0);
  CHECK(testing::read_file(svg).find("<svg") == 0);
  CHECK(run("figure --kind pie --csv " + quote(stance.string()), tmp.path()).code == 2);
}

TEST_CASE("eval commands") {
  testing::TempDir tmp("cli");
  const auto cv = run("eval crossval --labels " + fixture("labels.csv") + " --model zero_r --k 5 --seed 42",
                      tmp.path());
  CHECK(cv.code == 0);
  CHECK(cv.out.find("zero_r") != std::string::npos);
  CHECK(run("eval crossval --labels " + fixture("labels.csv") + " --model coinflip", tmp.path()).code == 2);
}

TEST_CASE("report exit codes and output root") {
  testing::TempDir tmp("cli");
  const std::string base = (testing::data_dir() / "fixture").string();
  auto config = [&](const std::string& lexicon_path, const std::string& extra) {
    return std::string("{\"name\":\"cli\",\"paths\":{\"tweets\":\"") + base + "/tweets.jsonl\",\"outlets\":\"" +
           base + "/outlets.csv\",\"labels\":\"" + base + "/labels.csv\",\"lexicon\":\"" + lexicon_path +
           "\"},\"stages\":[\"ingest\",\"filter\",\"sentiment\",\"stance\",\"granger\"]" + extra + "}";
  };
  const fs::path good = tmp.path() / "good.json";
  const fs::path nolex = tmp.path() / "nolex.json";
  const fs::path bad = tmp.path() / "bad.json";
  testing::write_file(good, config(base + "/../lexicon/sentiment_lexicon.tsv", ""));
  testing::write_file(nolex, config(base + "/absent.tsv", ""));
  testing::write_file(bad, config(base + "/absent.tsv", ",\"colour\":\"blue\""));

  CHECK(run("report --config " + quote(good.string()) + " --out " + quote((tmp.path() / "g").string()),
            tmp.path())
            .code == 0);
  CHECK(fs::exists(tmp.path() / "g" / "run_manifest.json"));
  CHECK(run("report --config " + quote(nolex.string()) + " --out " + quote((tmp.path() / "n").string()),
            tmp.path())
            .code == 1);
  CHECK(run("report --config " + quote(bad.string()), tmp.path()).code == 2);
  CHECK(run("report", tmp.path()).code == 2);

  const fs::path root = tmp.path() / "root";
  const std::string env = "STANCESHIFT_OUTPUT_ROOT=" + quote(root.string());
  CHECK(run("report --config " + quote(good.string()) + " --stages ingest,filter", tmp.path(), env).code == 0);
  CHECK(fs::exists(root / "cli" / "stages.csv"));
  CHECK(run("report --manifest " + quote((tmp.path() / "g" / "run_manifest.json").string()) + " --out " +
                quote((tmp.path() / "g2").string()),
            tmp.path())
            .code == 0);
  CHECK(testing::snapshot(tmp.path() / "g") == testing::snapshot(tmp.path() / "g2"));
}
