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

#include "fedvote/data.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>

#include "fedvote/errors.h"

namespace fedvote {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t ReadBigEndian(const std::vector<std::uint8_t>& bytes,
                            std::size_t offset, const std::string& what) {
  if (offset + 4 > bytes.size()) {
    throw FormatError(what + ": truncated header", bytes.size());
  }
  return (std::uint32_t{bytes[offset]} << 24) |
         (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) |
         std::uint32_t{bytes[offset + 3]};
}

void PutBigEndian(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

void WriteFile(const std::filesystem::path& path,
               const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

// Random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
Matrix RandomRotation(std::size_t dim, RandomStream& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix q(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    auto row = q.row(r);
    for (;;) {
      for (double& v : row) v = gauss(rng);
      for (std::size_t p = 0; p < r; ++p) {
        const auto prev = q.row(p);
        double dot = 0.0;
        for (std::size_t c = 0; c < dim; ++c) dot += row[c] * prev[c];
        for (std::size_t c = 0; c < dim; ++c) row[c] -= dot * prev[c];
      }
      double norm = 0.0;
      for (double v : row) norm += v * v;
      norm = std::sqrt(norm);
      if (norm > 1e-8) {
        for (double& v : row) v /= norm;
        break;
      }
    }
  }
  return q;
}

std::vector<double> SampleDirichlet(std::size_t k, double alpha,
                                    RandomStream& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> q(k);
  double total = 0.0;
  for (double& v : q) {
    v = gamma(rng);
    total += v;
  }
  if (!(total > 0.0)) {
    // Every component underflowed (tiny alpha): all mass on one class.
    std::fill(q.begin(), q.end(), 0.0);
    q[rng.UniformInt(k)] = 1.0;
    return q;
  }
  for (double& v : q) v /= total;
  return q;
}

std::size_t SampleProportional(std::span<const double> weights, double total,
                               RandomStream& rng) {
  const double target = rng.Uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace

Dataset Subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.classes = data.classes;
  out.image_rows = data.image_rows;
  out.image_cols = data.image_cols;
  out.inputs = Matrix(indices.size(), data.inputs.cols());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto src = data.inputs.row(indices[r]);
    std::copy(src.begin(), src.end(), out.inputs.row(r).begin());
    out.labels.push_back(data.labels[indices[r]]);
  }
  return out;
}

std::vector<std::size_t> ClassHistogram(const Dataset& data) {
  std::vector<std::size_t> hist(data.classes, 0);
  for (int y : data.labels) ++hist[static_cast<std::size_t>(y)];
  return hist;
}

Dataset SyntheticClassification(std::size_t n, std::size_t input_dim,
                                std::size_t classes, double separation,
                                RandomStream& rng) {
  if (classes < 2 || n < classes) {
    throw InvalidArgument("synthetic: need classes >= 2 and n >= classes");
  }
  if (input_dim < classes) {
    throw InvalidArgument("synthetic: need input_dim >= classes");
  }
  if (!(separation > 0.0)) {
    throw InvalidArgument("synthetic: separation must be positive");
  }
  // Scaled basis vectors e_c * s / sqrt(2) are exactly s apart; the tiny
  // inflation keeps rounded distances from dipping below s.
  const double radius = separation / std::sqrt(2.0) * (1.0 + 1e-9);
  const Matrix rotation = RandomRotation(input_dim, rng);

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % classes);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset data;
  data.classes = classes;
  data.labels = labels;
  data.inputs = Matrix(n, input_dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.inputs.row(i);
    const auto centroid = rotation.row(static_cast<std::size_t>(labels[i]));
    for (std::size_t c = 0; c < input_dim; ++c) {
      row[c] = radius * centroid[c] + gauss(rng);
    }
  }
  return data;
}

Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path) {
  const std::vector<std::uint8_t> images = ReadFile(images_path);
  const std::vector<std::uint8_t> labels = ReadFile(labels_path);

  const std::uint32_t image_magic = ReadBigEndian(images, 0, "images");
  if (image_magic != kImageMagic) throw FormatError("images: bad magic", 0);
  const std::uint32_t n = ReadBigEndian(images, 4, "images");
  const std::uint32_t rows = ReadBigEndian(images, 8, "images");
  const std::uint32_t cols = ReadBigEndian(images, 12, "images");
  const std::size_t pixels = std::size_t{rows} * cols;
  const std::size_t image_bytes = 16 + std::size_t{n} * pixels;
  if (images.size() < image_bytes) {
    throw FormatError("images: truncated pixel data", images.size());
  }

  const std::uint32_t label_magic = ReadBigEndian(labels, 0, "labels");
  if (label_magic != kLabelMagic) throw FormatError("labels: bad magic", 0);
  const std::uint32_t label_count = ReadBigEndian(labels, 4, "labels");
  if (label_count != n) {
    throw FormatError("labels: count " + std::to_string(label_count) +
                          " does not match image count " + std::to_string(n),
                      4);
  }
  if (labels.size() < 8 + std::size_t{n}) {
    throw FormatError("labels: truncated label data", labels.size());
  }

  Dataset data;
  data.image_rows = rows;
  data.image_cols = cols;
  data.inputs = Matrix(n, pixels);
  data.labels.resize(n);
  int max_label = -1;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.inputs.row(i);
    const std::uint8_t* src = images.data() + 16 + i * pixels;
    for (std::size_t p = 0; p < pixels; ++p) row[p] = src[p] / 255.0;
    data.labels[i] = labels[8 + i];
    max_label = std::max(max_label, data.labels[i]);
  }
  data.classes = static_cast<std::size_t>(std::max(max_label + 1, 2));
  return data;
}

void WriteIdx(const Dataset& data, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path) {
  std::size_t rows = data.image_rows;
  std::size_t cols = data.image_cols;
  if (rows * cols != data.inputs.cols()) {
    rows = 1;
    cols = data.inputs.cols();
  }
  std::vector<std::uint8_t> images;
  images.reserve(16 + data.inputs.data().size());
  PutBigEndian(images, kImageMagic);
  PutBigEndian(images, static_cast<std::uint32_t>(data.size()));
  PutBigEndian(images, static_cast<std::uint32_t>(rows));
  PutBigEndian(images, static_cast<std::uint32_t>(cols));
  for (double v : data.inputs.data()) {
    images.push_back(
        static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0))));
  }
  std::vector<std::uint8_t> labels;
  PutBigEndian(labels, kLabelMagic);
  PutBigEndian(labels, static_cast<std::uint32_t>(data.size()));
  for (int y : data.labels) {
    if (y < 0 || y > 255) throw InvalidArgument("idx: label outside [0,255]");
    labels.push_back(static_cast<std::uint8_t>(y));
  }
  WriteFile(images_path, images);
  WriteFile(labels_path, labels);
}

std::string ToString(PartitionKind kind) {
  return kind == PartitionKind::kIID ? "iid" : "dirichlet";
}

PartitionKind ParsePartitionKind(const std::string& name) {
  if (name == "iid") return PartitionKind::kIID;
  if (name == "dirichlet") return PartitionKind::kDirichlet;
  throw InvalidArgument("unknown partition kind '" + name + "'");
}

std::vector<std::vector<std::size_t>> PartitionIndices(
    std::span<const int> labels, std::size_t classes, const PartitionSpec& spec,
    RandomStream& rng) {
  const std::size_t n = labels.size();
  const std::size_t clients = spec.clients;
  if (clients == 0) throw InvalidArgument("partition: need at least 1 client");
  if (clients > n) {
    throw InvalidArgument("partition: more clients (" +
                          std::to_string(clients) + ") than examples (" +
                          std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::size_t> capacity(clients, n / clients);
  for (std::size_t m = 0; m < n % clients; ++m) ++capacity[m];

  std::vector<std::vector<std::size_t>> shards(clients);
  if (spec.kind == PartitionKind::kIID) {
    std::size_t next = 0;
    for (std::size_t m = 0; m < clients; ++m) {
      shards[m].assign(order.begin() + static_cast<std::ptrdiff_t>(next),
                       order.begin() +
                           static_cast<std::ptrdiff_t>(next + capacity[m]));
      next += capacity[m];
    }
    return shards;
  }

  if (!(spec.alpha > 0.0)) {
    throw InvalidArgument("partition: Dirichlet alpha must be positive");
  }
  std::vector<std::vector<double>> mix(clients);
  for (auto& q : mix) q = SampleDirichlet(classes, spec.alpha, rng);

  std::vector<double> weights(clients);
  for (std::size_t idx : order) {
    const auto c = static_cast<std::size_t>(labels[idx]);
    double total = 0.0;
    for (std::size_t m = 0; m < clients; ++m) {
      weights[m] = capacity[m] > 0 ? mix[m][c] : 0.0;
      total += weights[m];
    }
    if (!(total > 0.0)) {
      total = 0.0;
      for (std::size_t m = 0; m < clients; ++m) {
        weights[m] = static_cast<double>(capacity[m]);
        total += weights[m];
      }
    }
    const std::size_t m = SampleProportional(weights, total, rng);
    shards[m].push_back(idx);
    --capacity[m];
  }

  // Guard: training requires non-empty shards.
  for (auto& shard : shards) {
    if (!shard.empty()) continue;
    auto largest = std::max_element(
        shards.begin(), shards.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    const std::size_t pick = rng.UniformInt(largest->size());
    shard.push_back((*largest)[pick]);
    largest->erase(largest->begin() + static_cast<std::ptrdiff_t>(pick));
  }
  for (auto& shard : shards) std::sort(shard.begin(), shard.end());
  return shards;
}

std::vector<DatasetShard> Partition(const Dataset& data,
                                    const PartitionSpec& spec,
                                    RandomStream& rng) {
  const auto index_sets =
      PartitionIndices(data.labels, data.classes, spec, rng);
  std::vector<DatasetShard> shards;
  shards.reserve(index_sets.size());
  for (const auto& indices : index_sets) shards.push_back(Subset(data, indices));
  return shards;
}

}  // namespace fedvote
