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

#include <omp.h>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fedvote/commands.h"
#include "fedvote/config.h"
#include "fedvote/errors.h"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string OneLine(std::string s) {
  for (char& c : s) {
    if (c == '\n') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fedvote: federated voting simulator"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string output;
  app.add_option("--seed", seed, "master seed override");
  app.add_option("--threads", threads, "OpenMP worker threads (0 = default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--output", output, "output directory override");

  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string run_config;
  run->add_option("config", run_config)->required();

  auto* verify = app.add_subcommand("verify-lemmas", "Monte-Carlo suites");
  std::size_t trials = 100000;
  double bias = 0.0;
  verify->add_option("--trials", trials)->check(CLI::Range(10000, 100000000));
  verify->add_option("--inject-rounding-bias", bias)->group("");

  auto* partition = app.add_subcommand("partition", "split an IDX dataset");
  std::string images, labels, out_dir, kind = "iid";
  double alpha = 0.5;
  std::size_t clients = 10;
  partition->add_option("images", images)->required();
  partition->add_option("labels", labels)->required();
  partition->add_option("out_dir", out_dir);
  partition->add_option("--kind", kind)->check(CLI::IsMember({"iid", "dirichlet"}));
  partition->add_option("--alpha", alpha);
  partition->add_option("--clients", clients)->check(CLI::PositiveNumber);

  auto* opcount = app.add_subcommand("opcount", "forward-pass op counts");
  std::string opcount_config;
  opcount->add_option("config", opcount_config)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage: " << OneLine(e.what()) << '\n';
    return kExitConfig;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*run) {
      fedvote::ExperimentConfig config = fedvote::LoadConfig(run_config);
      if (seed) config.master_seed = *seed;
      if (!output.empty()) config.output_dir = output;
      const std::size_t records =
          fedvote::WriteExperimentArtifacts(config, config.output_dir);
      std::cout << "wrote " << records << " records to "
                << (std::filesystem::path(config.output_dir) / "metrics.jsonl")
                       .string()
                << '\n';
      return 0;
    }
    if (*verify) {
      fedvote::LemmaOptions options;
      options.trials = trials;
      options.seed = seed.value_or(1);
      options.rounding_bias = bias;
      const auto reports = fedvote::VerifyAllLemmas(options);
      std::cout << fedvote::FormatLemmaReports(reports);
      for (const auto& r : reports) {
        if (!r.passed) return kExitVerifyFailed;
      }
      return 0;
    }
    if (*partition) {
      if (out_dir.empty()) out_dir = output;
      if (out_dir.empty()) {
        std::cerr << "usage: partition needs out_dir or --output\n";
        return kExitConfig;
      }
      const fedvote::Dataset data = fedvote::LoadIdx(images, labels);
      fedvote::PartitionSpec spec{fedvote::ParsePartitionKind(kind), alpha,
                                  clients};
      const auto manifest =
          fedvote::WritePartition(data, spec, seed.value_or(1), out_dir);
      std::cout << "wrote " << manifest["shards"].size() << " shards to "
                << out_dir << '\n';
      return 0;
    }
    if (*opcount) {
      fedvote::ExperimentConfig config = fedvote::LoadConfig(opcount_config);
      if (seed) config.master_seed = *seed;
      std::cout << fedvote::FormatOpCounts(fedvote::CompareOpCounts(config));
      return 0;
    }
  } catch (const fedvote::ConfigNotFound&) {
    std::cerr << "config: not found\n";
    return kExitConfig;
  } catch (const fedvote::ConfigError& e) {
    std::cerr << "config: " << OneLine(e.what()) << '\n';
    return kExitConfig;
  } catch (const fedvote::InvalidArgument& e) {
    std::cerr << "config: " << OneLine(e.what()) << '\n';
    return kExitConfig;
  } catch (const fedvote::IoError& e) {
    std::cerr << "io: " << OneLine(e.what()) << '\n';
    return kExitIo;
  } catch (const fedvote::FormatError& e) {
    std::cerr << "io: " << OneLine(e.what()) << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << OneLine(e.what()) << '\n';
    return kExitIo;
  }
  return kExitConfig;
}
