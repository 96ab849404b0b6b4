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

#include "fedvote/config.h"

#include <fstream>
#include <functional>
#include <set>

#include "fedvote/errors.h"

namespace fedvote {
namespace {

using nlohmann::json;

// Walks one JSON object, collecting violations instead of throwing, and
// flags keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path,
               std::vector<std::string>& violations)
      : object_(object), path_(std::move(path)), violations_(violations) {
    if (!object_.is_object()) {
      violations_.push_back(Where() + ": expected an object");
    }
  }

  ~ObjectReader() {
    if (!object_.is_object()) return;
    for (const auto& [key, _] : object_.items()) {
      if (!seen_.count(key)) {
        violations_.push_back(Join(key) + ": unknown key");
      }
    }
  }

  template <typename T>
  void Read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!object_.is_object() || !object_.contains(key)) return;
    try {
      const json& v = object_.at(key);
      if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_unsigned() &&
            !(v.is_number_integer() && v.get<long long>() >= 0)) {
          violations_.push_back(Join(key) + ": expected a non-negative integer");
          return;
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) {
          violations_.push_back(Join(key) + ": expected a number");
          return;
        }
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) {
          violations_.push_back(Join(key) + ": expected a boolean");
          return;
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) {
          violations_.push_back(Join(key) + ": expected a string");
          return;
        }
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      violations_.push_back(Join(key) + ": " + e.what());
    }
  }

  // Reads a string and maps it through `parse`, reporting unknown names.
  template <typename E>
  void ReadEnum(const std::string& key, E& out,
                const std::function<E(const std::string&)>& parse) {
    std::string name;
    const std::size_t before = violations_.size();
    Read(key, name);
    if (name.empty() || violations_.size() != before) return;
    try {
      out = parse(name);
    } catch (const std::exception& e) {
      violations_.push_back(Join(key) + ": " + e.what());
    }
  }

  // Nested object; calls `fn` only when present.
  void Section(const std::string& key,
               const std::function<void(ObjectReader&)>& fn) {
    seen_.insert(key);
    if (!object_.is_object() || !object_.contains(key)) return;
    ObjectReader child(object_.at(key), Join(key), violations_);
    fn(child);
  }

 private:
  std::string Where() const { return path_.empty() ? "config" : path_; }
  std::string Join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& object_;
  std::string path_;
  std::vector<std::string>& violations_;
  std::set<std::string> seen_;
};

std::string ToString(QuantizedEval e) {
  return e == QuantizedEval::kStochastic ? "stochastic" : "sign";
}

QuantizedEval ParseQuantizedEval(const std::string& name) {
  if (name == "stochastic") return QuantizedEval::kStochastic;
  if (name == "sign") return QuantizedEval::kSign;
  throw InvalidArgument("unknown eval_quantized '" + name + "'");
}

}  // namespace

std::string ToString(AggregatorKind kind) {
  switch (kind) {
    case AggregatorKind::kFedVoteOptionI:
      return "fedvote";
    case AggregatorKind::kFedVoteOptionII:
      return "byzantine_fedvote";
    case AggregatorKind::kFedAvg:
      return "fedavg";
    case AggregatorKind::kSignSgd:
      return "signsgd";
    case AggregatorKind::kFedPaq:
      return "fedpaq";
    case AggregatorKind::kCoordMedian:
      return "coord_median";
    case AggregatorKind::kKrum:
      return "krum";
  }
  return "?";
}

AggregatorKind ParseAggregatorKind(const std::string& name) {
  for (AggregatorKind k :
       {AggregatorKind::kFedVoteOptionI, AggregatorKind::kFedVoteOptionII,
        AggregatorKind::kFedAvg, AggregatorKind::kSignSgd,
        AggregatorKind::kFedPaq, AggregatorKind::kCoordMedian,
        AggregatorKind::kKrum}) {
    if (ToString(k) == name) return k;
  }
  throw InvalidArgument("unknown aggregator '" + name + "'");
}

std::string ToString(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind ParseOptimizerKind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw InvalidArgument("unknown optimizer '" + name + "'");
}

std::vector<std::string> ExperimentConfig::Violations(bool check_files) const {
  std::vector<std::string> v;
  if (dataset.kind == "synthetic") {
    if (dataset.classes < 2) v.push_back("dataset.classes must be >= 2");
    if (dataset.input_dim < dataset.classes) {
      v.push_back("dataset.input_dim must be >= dataset.classes");
    }
    if (dataset.n_train < clients) {
      v.push_back("dataset.n_train must be >= M");
    }
    if (dataset.n_test < 2) v.push_back("dataset.n_test must be >= 2");
    if (!(dataset.separation > 0.0)) {
      v.push_back("dataset.separation must be positive");
    }
  } else if (dataset.kind == "idx") {
    for (const auto& [name, path] :
         {std::pair{"train_images", dataset.train_images},
          std::pair{"train_labels", dataset.train_labels},
          std::pair{"test_images", dataset.test_images},
          std::pair{"test_labels", dataset.test_labels}}) {
      if (path.empty()) {
        v.push_back(std::string("dataset.") + name + " is required for idx");
      } else if (check_files && !std::filesystem::exists(path)) {
        v.push_back(std::string("dataset.") + name + ": file not found: " +
                    path);
      }
    }
  } else {
    v.push_back("dataset.kind must be 'synthetic' or 'idx'");
  }
  if (model.hidden.empty()) v.push_back("model.hidden must not be empty");
  for (std::size_t h : model.hidden) {
    if (h == 0) v.push_back("model.hidden entries must be positive");
  }
  if (!(model.bn_epsilon > 0.0)) v.push_back("model.bn_epsilon must be > 0");
  if (!(model.init_scale >= 0.0)) v.push_back("model.init_scale must be >= 0");
  if (partition_kind == PartitionKind::kDirichlet &&
      !(partition_alpha > 0.0)) {
    v.push_back("partition.alpha must be positive");
  }
  if (clients == 0) v.push_back("M must be positive");
  if (!(participation > 0.0 && participation <= 1.0)) {
    v.push_back("participation must lie in (0, 1]");
  }
  if (tau == 0) v.push_back("tau must be positive");
  if (batch_size == 0) v.push_back("batch_size must be positive");
  if (!(optimizer.eta >= 0.0)) v.push_back("optimizer.eta must be >= 0");
  if (!(optimizer.server_eta > 0.0)) {
    v.push_back("optimizer.server_eta must be positive");
  }
  if (phi.family == NormalizationFamily::kIdentity) {
    v.push_back("phi.family must be 'tanh' or 'erf'");
  }
  if (!(phi.shape > 0.0)) v.push_back("phi.a must be positive");
  if (!(clip.p_min > 0.0 && clip.p_min < 0.5)) {
    v.push_back("clip.p_min must lie in (0, 0.5)");
  }
  if (!(clip.p_max > 0.5 && clip.p_max < 1.0)) {
    v.push_back("clip.p_max must lie in (0.5, 1)");
  }
  if (!(reputation_beta > 0.0 && reputation_beta < 1.0)) {
    v.push_back("reputation.beta must lie in (0, 1)");
  }
  if (aggregator == AggregatorKind::kFedVoteOptionII && participation != 1.0) {
    v.push_back(
        "aggregator byzantine_fedvote requires full participation "
        "(participation = 1)");
  }
  if (num_attackers > 0 && num_attackers >= clients) {
    v.push_back("attack.num_attackers must be < M");
  }
  if (aggregator == AggregatorKind::kKrum && clients < num_attackers + 3) {
    v.push_back("krum requires M >= num_attackers + 3");
  }
  if (eval_every == 0) v.push_back("eval_every must be positive");
  return v;
}

void ExperimentConfig::Validate(bool check_files) const {
  auto v = Violations(check_files);
  if (!v.empty()) throw ConfigError(std::move(v));
}

ExperimentConfig ConfigFromJson(const nlohmann::json& j) {
  ExperimentConfig c;
  std::vector<std::string> v;
  {
    ObjectReader root(j, "", v);
    root.Section("dataset", [&](ObjectReader& r) {
      r.Read("kind", c.dataset.kind);
      r.Read("n_train", c.dataset.n_train);
      r.Read("n_test", c.dataset.n_test);
      r.Read("input_dim", c.dataset.input_dim);
      r.Read("classes", c.dataset.classes);
      r.Read("separation", c.dataset.separation);
      r.Read("train_images", c.dataset.train_images);
      r.Read("train_labels", c.dataset.train_labels);
      r.Read("test_images", c.dataset.test_images);
      r.Read("test_labels", c.dataset.test_labels);
      r.Read("max_train", c.dataset.max_train);
      r.Read("max_test", c.dataset.max_test);
    });
    root.Section("model", [&](ObjectReader& r) {
      r.Read("hidden", c.model.hidden);
      r.ReadEnum<Activation>("activation", c.model.activation,
                             ParseActivation);
      r.Read("static_bn", c.model.static_bn);
      r.Read("bn_epsilon", c.model.bn_epsilon);
      r.Read("init_scale", c.model.init_scale);
    });
    root.Section("partition", [&](ObjectReader& r) {
      r.ReadEnum<PartitionKind>("kind", c.partition_kind, ParsePartitionKind);
      r.Read("alpha", c.partition_alpha);
    });
    root.Read("M", c.clients);
    root.Read("participation", c.participation);
    root.Read("rounds", c.rounds);
    root.Read("tau", c.tau);
    root.Read("batch_size", c.batch_size);
    root.Section("optimizer", [&](ObjectReader& r) {
      r.ReadEnum<OptimizerKind>("kind", c.optimizer.kind, ParseOptimizerKind);
      r.Read("eta", c.optimizer.eta);
      r.Read("server_eta", c.optimizer.server_eta);
      r.Read("beta1", c.optimizer.adam_beta1);
      r.Read("beta2", c.optimizer.adam_beta2);
      r.Read("epsilon", c.optimizer.adam_epsilon);
    });
    root.Section("phi", [&](ObjectReader& r) {
      r.ReadEnum<NormalizationFamily>("family", c.phi.family,
                                      ParseNormalizationFamily);
      r.Read("a", c.phi.shape);
    });
    root.ReadEnum<Levels>("quantizer", c.quantizer, ParseLevels);
    root.ReadEnum<AggregatorKind>("aggregator", c.aggregator,
                                  ParseAggregatorKind);
    root.Section("clip", [&](ObjectReader& r) {
      r.Read("p_min", c.clip.p_min);
      r.Read("p_max", c.clip.p_max);
    });
    root.Section("reputation",
                 [&](ObjectReader& r) { r.Read("beta", c.reputation_beta); });
    root.Section("attack", [&](ObjectReader& r) {
      r.ReadEnum<AttackKind>("kind", c.attack, ParseAttackKind);
      r.Read("num_attackers", c.num_attackers);
    });
    root.Section("seeds",
                 [&](ObjectReader& r) { r.Read("master", c.master_seed); });
    root.Read("eval_every", c.eval_every);
    root.Read("eval_seed", c.eval_seed);
    root.ReadEnum<QuantizedEval>("eval_quantized", c.eval_quantized,
                                 ParseQuantizedEval);
    root.Read("output_dir", c.output_dir);
  }
  for (auto& problem : c.Violations()) v.push_back(std::move(problem));
  if (!v.empty()) throw ConfigError(std::move(v));
  return c;
}

nlohmann::json ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["dataset"] = {
      {"kind", c.dataset.kind},
      {"n_train", c.dataset.n_train},
      {"n_test", c.dataset.n_test},
      {"input_dim", c.dataset.input_dim},
      {"classes", c.dataset.classes},
      {"separation", c.dataset.separation},
      {"train_images", c.dataset.train_images},
      {"train_labels", c.dataset.train_labels},
      {"test_images", c.dataset.test_images},
      {"test_labels", c.dataset.test_labels},
      {"max_train", c.dataset.max_train},
      {"max_test", c.dataset.max_test},
  };
  j["model"] = {
      {"hidden", c.model.hidden},
      {"activation", ToString(c.model.activation)},
      {"static_bn", c.model.static_bn},
      {"bn_epsilon", c.model.bn_epsilon},
      {"init_scale", c.model.init_scale},
  };
  j["partition"] = {{"kind", ToString(c.partition_kind)},
                    {"alpha", c.partition_alpha}};
  j["M"] = c.clients;
  j["participation"] = c.participation;
  j["rounds"] = c.rounds;
  j["tau"] = c.tau;
  j["batch_size"] = c.batch_size;
  j["optimizer"] = {{"kind", ToString(c.optimizer.kind)},
                    {"eta", c.optimizer.eta},
                    {"server_eta", c.optimizer.server_eta},
                    {"beta1", c.optimizer.adam_beta1},
                    {"beta2", c.optimizer.adam_beta2},
                    {"epsilon", c.optimizer.adam_epsilon}};
  j["phi"] = {{"family", ToString(c.phi.family)}, {"a", c.phi.shape}};
  j["quantizer"] = ToString(c.quantizer);
  j["aggregator"] = ToString(c.aggregator);
  j["clip"] = {{"p_min", c.clip.p_min}, {"p_max", c.clip.p_max}};
  j["reputation"] = {{"beta", c.reputation_beta}};
  j["attack"] = {{"kind", ToString(c.attack)},
                 {"num_attackers", c.num_attackers}};
  j["seeds"] = {{"master", c.master_seed}};
  j["eval_every"] = c.eval_every;
  j["eval_seed"] = c.eval_seed;
  j["eval_quantized"] = ToString(c.eval_quantized);
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigNotFound("config: not found");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  return ConfigFromJson(j);
}

}  // namespace fedvote
