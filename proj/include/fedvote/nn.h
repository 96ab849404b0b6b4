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

#ifndef FEDVOTE_NN_H_
#define FEDVOTE_NN_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fedvote/matrix.h"
#include "fedvote/normalization.h"
#include "fedvote/rng.h"

namespace fedvote {

enum class Activation { kReLU, kTanh, kIdentity };

std::string ToString(Activation activation);
Activation ParseActivation(const std::string& name);

// One trainable (quantizable) weight matrix, stored row-major as
// rows = fan-in, cols = fan-out, at `offset` inside the flat vector.
struct LayerShape {
  std::size_t layer = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;

  std::size_t size() const { return rows * cols; }
  bool operator==(const LayerShape&) const = default;
};

// Flat latent vector h plus the layer-major, row-major flattening layout.
struct LatentWeights {
  std::vector<double> values;
  std::vector<LayerShape> shapes;

  std::size_t dim() const { return values.size(); }
  // Per-layer matrices. Flatten(Reshape()) reproduces `values` exactly.
  std::vector<Matrix> Reshape() const;
  static LatentWeights Flatten(const std::vector<Matrix>& layers);
};

struct ModelSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims;
  std::size_t classes = 2;
  Activation activation = Activation::kReLU;
  bool static_bn = true;
  double bn_epsilon = 1e-5;
};

// Dense feedforward network: input -> trainable hidden layers -> a fixed,
// floating-point output layer shared by every client.
class Model {
 public:
  // The output layer is drawn U(-1/sqrt(fan_in), 1/sqrt(fan_in)) from `init`.
  static Model Create(const ModelSpec& spec, RandomStream init);
  // Explicit output layer (hidden_dims.back() or input_dim rows, classes cols).
  static Model WithFinalLayer(const ModelSpec& spec, Matrix final_layer);

  const ModelSpec& spec() const { return spec_; }
  const Matrix& final_layer() const { return final_layer_; }
  const std::vector<LayerShape>& shapes() const { return shapes_; }
  std::size_t num_weights() const { return num_weights_; }

  // Latent initialization U(-scale, scale) for the trainable layers.
  LatentWeights InitLatent(RandomStream& rng, double scale) const;

 private:
  ModelSpec spec_;
  Matrix final_layer_;
  std::vector<LayerShape> shapes_;
  std::size_t num_weights_ = 0;
};

struct Batch {
  Matrix inputs;            // n_b x d_in
  std::vector<int> labels;  // n_b, each in [0, classes)

  std::size_t size() const { return labels.size(); }
};

// Parameter-free batch standardization per column, population variance.
// Requires at least two rows.
Matrix StaticBatchNorm(const Matrix& x, double epsilon);

// Logits (n_b x classes) for normalized weights w (length num_weights).
Matrix Forward(const Model& model, std::span<const double> normalized,
               const Batch& batch);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d normalized weights
};

// Mean softmax cross-entropy over the batch and its gradient with respect to
// the normalized weights, by manual backpropagation.
LossAndGrad LossAndGradNormalized(const Model& model,
                                  std::span<const double> normalized,
                                  const Batch& batch);

double CrossEntropy(const Matrix& logits, std::span<const int> labels);
double Accuracy(const Matrix& logits, std::span<const int> labels);

enum class WeightType { kFloat, kBinary };

struct LayerOps {
  std::string name;
  std::size_t adds = 0;
  std::size_t muls = 0;
};

struct OpCount {
  std::vector<LayerOps> layers;
  std::size_t adds = 0;
  std::size_t muls = 0;
  double energy_mj = 0.0;
};

// Picojoules per floating-point operation used by OpCount.
inline constexpr double kMulEnergyPj = 3.7;
inline constexpr double kAddEnergyPj = 0.9;

// Forward-pass arithmetic for one batch. With binary weights every multiply
// in a trainable weight matrix is recorded as an addition; the fixed output
// layer and batch-norm arithmetic stay floating point in both variants.
OpCount CountForwardOps(const Model& model, WeightType weight_type,
                        std::size_t batch_size);

}  // namespace fedvote

#endif  // FEDVOTE_NN_H_
