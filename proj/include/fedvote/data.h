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

#ifndef FEDVOTE_DATA_H_
#define FEDVOTE_DATA_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fedvote/matrix.h"
#include "fedvote/nn.h"
#include "fedvote/rng.h"

namespace fedvote {

// Labeled examples. A client's shard is just a Dataset.
struct Dataset {
  Matrix inputs;
  std::vector<int> labels;
  std::size_t classes = 0;
  // Image geometry when loaded from IDX; rows * cols == inputs.cols().
  std::size_t image_rows = 0;
  std::size_t image_cols = 0;

  std::size_t size() const { return labels.size(); }
  Batch AsBatch() const { return {inputs, labels}; }
};
using DatasetShard = Dataset;

Dataset Subset(const Dataset& data, std::span<const std::size_t> indices);
std::vector<std::size_t> ClassHistogram(const Dataset& data);

// Gaussian blobs with unit-variance noise around one centroid per class.
// Centroids are pairwise `separation` apart (randomly rotated scaled basis
// vectors), so C <= d_in is required. Class counts differ by at most one.
Dataset SyntheticClassification(std::size_t n, std::size_t input_dim,
                                std::size_t classes, double separation,
                                RandomStream& rng);

// IDX container (big-endian). Images: magic 0x00000803 with dims (n, rows,
// cols) of unsigned bytes scaled to [0,1]. Labels: magic 0x00000801 with dim
// (n). Malformed input throws FormatError naming the byte offset.
Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path);
// Pixels are written as round(255 * clamp(x, 0, 1)).
void WriteIdx(const Dataset& data, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path);

enum class PartitionKind { kIID, kDirichlet };

std::string ToString(PartitionKind kind);
PartitionKind ParsePartitionKind(const std::string& name);

struct PartitionSpec {
  PartitionKind kind = PartitionKind::kIID;
  double alpha = 0.5;
  std::size_t clients = 1;
};

// Disjoint index sets covering [0, n). IID shards differ in size by at most
// one. Dirichlet: client m draws class mix q_m ~ Dir(alpha); each example (in
// random order) goes to a client with spare capacity with probability
// proportional to q_m[class], falling back to spare capacity when no such
// client has demand left.
std::vector<std::vector<std::size_t>> PartitionIndices(
    std::span<const int> labels, std::size_t classes, const PartitionSpec& spec,
    RandomStream& rng);
std::vector<DatasetShard> Partition(const Dataset& data,
                                    const PartitionSpec& spec,
                                    RandomStream& rng);

}  // namespace fedvote

#endif  // FEDVOTE_DATA_H_
