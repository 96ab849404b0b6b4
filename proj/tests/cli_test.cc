// Copyright 2026 The FedVote Simulator Authors. All Rights Reserved.
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
// =============================================================================

// End-to-end checks of the fedvote command-line tool.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "fedvote/data.h"
#include "json.hpp"

namespace fedvote {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("fedvote_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(FEDVOTE_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  fs::path WriteConfig(const nlohmann::json& j, const std::string& name = "c.json") const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  static nlohmann::json Minimal() {
    return {{"dataset", {{"n_train", 300}, {"n_test", 100}, {"input_dim", 8}}},
            {"model", {{"hidden", {6}}}},
            {"M", 3},
            {"rounds", 4},
            {"tau", 3},
            {"batch_size", 20}};
  }

  fs::path dir_;
};

TEST_F(CliTest, MissingConfig) {
  const Result r = Run("run " + (dir_ / "absent.json").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err, "config: not found\n");
}

TEST_F(CliTest, InvalidConfigIsOneLine) {
  const Result r = Run("run " + WriteConfig({{"M", 0}, {"tau", 0}}).string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("config: ", 0), 0u);
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
}

TEST_F(CliTest, RunWritesOneLinePerRound) {
  const fs::path out = dir_ / "out";
  const Result r = Run("--output " + out.string() + " run " + WriteConfig(Minimal()).string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream metrics(out / "metrics.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(metrics, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["round"], lines);
    ++lines;
  }
  EXPECT_EQ(lines, 4);
  const auto resolved = nlohmann::json::parse(Slurp(out / "resolved_config.json"));
  EXPECT_EQ(resolved["M"], 3);
  EXPECT_TRUE(resolved.contains("eval_seed"));
  EXPECT_EQ(resolved["output_dir"], out.string());
}

TEST_F(CliTest, RerunAndThreadCountAreByteIdentical) {
  auto cfg = Minimal();
  cfg["aggregator"] = "byzantine_fedvote";
  cfg["attack"] = {{"kind", "inverse_sign"}, {"num_attackers", 1}};
  const std::string path = WriteConfig(cfg).string();
  ASSERT_EQ(Run("--threads 1 --output " + (dir_ / "a").string() + " run " + path).code, 0);
  ASSERT_EQ(Run("--threads 1 --output " + (dir_ / "b").string() + " run " + path).code, 0);
  ASSERT_EQ(Run("--threads 3 --output " + (dir_ / "c").string() + " run " + path).code, 0);
  const std::string a = Slurp(dir_ / "a" / "metrics.jsonl");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, Slurp(dir_ / "b" / "metrics.jsonl"));
  EXPECT_EQ(a, Slurp(dir_ / "c" / "metrics.jsonl"));
  ASSERT_EQ(Run("--seed 9 --output " + (dir_ / "d").string() + " run " + path).code, 0);
  EXPECT_NE(a, Slurp(dir_ / "d" / "metrics.jsonl"));
}

TEST_F(CliTest, VerifyLemmas) {
  Result r = Run("verify-lemmas --trials 20000");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("bound="), std::string::npos);
  r = Run("verify-lemmas --trials 20000 --inject-rounding-bias 0.1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(Run("verify-lemmas --trials 10").code, 2);
}

TEST_F(CliTest, PartitionWritesShardsAndManifest) {
  RandomStream rng(4);
  Dataset d = SyntheticClassification(100, 4, 4, 3.0, rng);
  for (double& v : d.inputs.data()) v = std::min(1.0, std::max(0.0, (v + 3.0) / 6.0));
  d.image_rows = 2;
  d.image_cols = 2;
  WriteIdx(d, dir_ / "images.idx", dir_ / "labels.idx");
  const fs::path out = dir_ / "shards";
  const Result r = Run("partition " + (dir_ / "images.idx").string() + " " +
                       (dir_ / "labels.idx").string() + " " + out.string() +
                       " --clients 4");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = nlohmann::json::parse(Slurp(out / "manifest.json"));
  ASSERT_EQ(manifest["shards"].size(), 4u);
  std::vector<std::size_t> totals(4, 0);
  for (const auto& s : manifest["shards"]) {
    EXPECT_EQ(s["size"], 25);
    const Dataset shard = LoadIdx(out / s["images"].get<std::string>(),
                                  out / s["labels"].get<std::string>());
    EXPECT_EQ(shard.size(), 25u);
    for (std::size_t c = 0; c < 4; ++c) totals[c] += s["class_histogram"][c].get<std::size_t>();
  }
  EXPECT_EQ(totals, ClassHistogram(d));
}

TEST_F(CliTest, PartitionBadFile) {
  std::ofstream(dir_ / "junk") << "not an idx file";
  const Result r = Run("partition " + (dir_ / "junk").string() + " " +
                       (dir_ / "junk").string() + " " + (dir_ / "o").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("io: ", 0), 0u);
}

TEST_F(CliTest, OpCount) {
  const Result r = Run("opcount " + WriteConfig(Minimal()).string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("float"), std::string::npos);
  EXPECT_NE(r.out.find("binary"), std::string::npos);
}

}  // namespace
}  // namespace fedvote
