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

#include "fedvote/nn.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedvote/errors.h"

namespace fedvote {
namespace {

struct LayerCache {
  Matrix input;       // activation entering the layer
  Matrix normalized;  // post-BN (or raw linear output when BN is off)
  std::vector<double> inv_std;
};

struct ForwardState {
  std::vector<LayerCache> layers;
  Matrix last_activation;
  Matrix logits;
};

double Activate(Activation act, double v) {
  switch (act) {
    case Activation::kReLU:
      return v > 0.0 ? v : 0.0;
    case Activation::kTanh:
      return std::tanh(v);
    case Activation::kIdentity:
      return v;
  }
  return v;
}

double ActivationSlope(Activation act, double v) {
  switch (act) {
    case Activation::kReLU:
      return v > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: {
      const double t = std::tanh(v);
      return 1.0 - t * t;
    }
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

void CheckCompatible(const Model& model, std::span<const double> normalized,
                     const Batch& batch) {
  if (normalized.size() != model.num_weights()) {
    throw InvalidArgument("forward: weight vector has " +
                          std::to_string(normalized.size()) +
                          " entries, model expects " +
                          std::to_string(model.num_weights()));
  }
  if (batch.inputs.cols() != model.spec().input_dim) {
    throw InvalidArgument("forward: batch has " +
                          std::to_string(batch.inputs.cols()) +
                          " features, model expects " +
                          std::to_string(model.spec().input_dim));
  }
  if (batch.inputs.rows() != batch.labels.size()) {
    throw InvalidArgument("forward: inputs/labels row count mismatch");
  }
  if (batch.size() == 0) throw InvalidArgument("forward: empty batch");
}

// Column-wise standardization; also returns 1/sqrt(var + eps) per column.
Matrix BatchNormWithStats(const Matrix& x, double epsilon,
                          std::vector<double>& inv_std) {
  if (x.rows() < 2) {
    throw InvalidArgument("static_batch_norm: batch size must be >= 2, got " +
                          std::to_string(x.rows()));
  }
  if (!(epsilon > 0.0)) {
    throw InvalidArgument("static_batch_norm: epsilon must be positive");
  }
  const std::size_t n = x.rows();
  const std::size_t cols = x.cols();
  std::vector<double> mean(cols, 0.0);
  std::vector<double> var(cols, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < cols; ++c) mean[c] += row[c];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double dev = row[c] - mean[c];
      var[c] += dev * dev;
    }
  }
  inv_std.assign(cols, 0.0);
  for (std::size_t c = 0; c < cols; ++c) {
    inv_std[c] = 1.0 / std::sqrt(var[c] / static_cast<double>(n) + epsilon);
  }
  Matrix out(n, cols);
  for (std::size_t r = 0; r < n; ++r) {
    const auto in = x.row(r);
    auto o = out.row(r);
    for (std::size_t c = 0; c < cols; ++c) {
      o[c] = (in[c] - mean[c]) * inv_std[c];
    }
  }
  return out;
}

ForwardState RunForward(const Model& model, std::span<const double> normalized,
                        const Batch& batch) {
  CheckCompatible(model, normalized, batch);
  const ModelSpec& spec = model.spec();
  ForwardState state;
  state.layers.reserve(model.shapes().size());
  Matrix activation = batch.inputs;
  for (const LayerShape& shape : model.shapes()) {
    LayerCache cache;
    Matrix linear =
        MatMul(activation, normalized.subspan(shape.offset, shape.size()),
               shape.cols);
    if (spec.static_bn) {
      cache.normalized = BatchNormWithStats(linear, spec.bn_epsilon,
                                            cache.inv_std);
    } else {
      cache.normalized = std::move(linear);
    }
    Matrix next(cache.normalized.rows(), cache.normalized.cols());
    auto& src = cache.normalized.data();
    auto& dst = next.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = Activate(spec.activation, src[i]);
    }
    cache.input = std::move(activation);
    activation = std::move(next);
    state.layers.push_back(std::move(cache));
  }
  const Matrix& final_layer = model.final_layer();
  state.logits = MatMul(activation, final_layer.data(), final_layer.cols());
  state.last_activation = std::move(activation);
  return state;
}

// Row-wise softmax probabilities.
Matrix Softmax(const Matrix& logits) {
  Matrix probs(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto z = logits.row(r);
    auto p = probs.row(r);
    const double peak = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
      p[c] = std::exp(z[c] - peak);
      total += p[c];
    }
    for (double& v : p) v /= total;
  }
  return probs;
}

}  // namespace

std::string ToString(Activation activation) {
  switch (activation) {
    case Activation::kReLU:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kIdentity:
      return "identity";
  }
  return "?";
}

Activation ParseActivation(const std::string& name) {
  if (name == "relu") return Activation::kReLU;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw InvalidArgument("unknown activation '" + name + "'");
}

std::vector<Matrix> LatentWeights::Reshape() const {
  std::vector<Matrix> layers;
  layers.reserve(shapes.size());
  for (const LayerShape& s : shapes) {
    if (s.offset + s.size() > values.size()) {
      throw InvalidArgument("reshape: layout exceeds weight vector");
    }
    std::vector<double> block(values.begin() + s.offset,
                              values.begin() + s.offset + s.size());
    layers.emplace_back(s.rows, s.cols, std::move(block));
  }
  return layers;
}

LatentWeights LatentWeights::Flatten(const std::vector<Matrix>& layers) {
  LatentWeights out;
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Matrix& m = layers[l];
    out.shapes.push_back({l, m.rows(), m.cols(), offset});
    out.values.insert(out.values.end(), m.data().begin(), m.data().end());
    offset += m.rows() * m.cols();
  }
  return out;
}

Model Model::WithFinalLayer(const ModelSpec& spec, Matrix final_layer) {
  if (spec.input_dim == 0 || spec.classes < 2) {
    throw InvalidArgument("model: need input_dim >= 1 and classes >= 2");
  }
  if (spec.hidden_dims.empty()) {
    throw InvalidArgument("model: at least one trainable layer is required");
  }
  Model model;
  model.spec_ = spec;
  std::size_t fan_in = spec.input_dim;
  std::size_t offset = 0;
  for (std::size_t l = 0; l < spec.hidden_dims.size(); ++l) {
    const std::size_t fan_out = spec.hidden_dims[l];
    if (fan_out == 0) throw InvalidArgument("model: zero-width hidden layer");
    model.shapes_.push_back({l, fan_in, fan_out, offset});
    offset += fan_in * fan_out;
    fan_in = fan_out;
  }
  model.num_weights_ = offset;
  if (final_layer.rows() != fan_in || final_layer.cols() != spec.classes) {
    throw InvalidArgument("model: final layer must be " +
                          std::to_string(fan_in) + "x" +
                          std::to_string(spec.classes));
  }
  model.final_layer_ = std::move(final_layer);
  return model;
}

Model Model::Create(const ModelSpec& spec, RandomStream init) {
  if (spec.hidden_dims.empty()) {
    throw InvalidArgument("model: at least one trainable layer is required");
  }
  const std::size_t fan_in = spec.hidden_dims.back();
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Matrix final_layer(fan_in, spec.classes);
  for (double& v : final_layer.data()) v = bound * (2.0 * init.Uniform() - 1.0);
  return WithFinalLayer(spec, std::move(final_layer));
}

LatentWeights Model::InitLatent(RandomStream& rng, double scale) const {
  LatentWeights latent;
  latent.shapes = shapes_;
  latent.values.resize(num_weights_);
  for (double& v : latent.values) v = scale * (2.0 * rng.Uniform() - 1.0);
  return latent;
}

Matrix StaticBatchNorm(const Matrix& x, double epsilon) {
  std::vector<double> inv_std;
  return BatchNormWithStats(x, epsilon, inv_std);
}

Matrix Forward(const Model& model, std::span<const double> normalized,
               const Batch& batch) {
  return RunForward(model, normalized, batch).logits;
}

double CrossEntropy(const Matrix& logits, std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto z = logits.row(r);
    const double peak = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - peak);
    total += std::log(sum) + peak - z[static_cast<std::size_t>(labels[r])];
  }
  return total / static_cast<double>(logits.rows());
}

double Accuracy(const Matrix& logits, std::span<const int> labels) {
  if (logits.rows() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto z = logits.row(r);
    const auto best = std::max_element(z.begin(), z.end()) - z.begin();
    if (best == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(logits.rows());
}

LossAndGrad LossAndGradNormalized(const Model& model,
                                  std::span<const double> normalized,
                                  const Batch& batch) {
  for (int label : batch.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= model.spec().classes) {
      throw InvalidArgument("loss: label out of range");
    }
  }
  ForwardState state = RunForward(model, normalized, batch);
  const std::size_t n = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  LossAndGrad result;
  result.loss = CrossEntropy(state.logits, batch.labels);
  result.grad.assign(model.num_weights(), 0.0);

  Matrix dlogits = Softmax(state.logits);
  for (std::size_t r = 0; r < n; ++r) {
    dlogits(r, static_cast<std::size_t>(batch.labels[r])) -= 1.0;
  }
  for (double& v : dlogits.data()) v *= inv_n;

  const Matrix& final_layer = model.final_layer();
  Matrix dact =
      MatMulTransposeB(dlogits, final_layer.data(), final_layer.rows());

  const ModelSpec& spec = model.spec();
  for (std::size_t l = model.shapes().size(); l-- > 0;) {
    const LayerShape& shape = model.shapes()[l];
    const LayerCache& cache = state.layers[l];
    const std::size_t cols = shape.cols;

    Matrix dnorm(n, cols);
    for (std::size_t i = 0; i < dnorm.data().size(); ++i) {
      dnorm.data()[i] = dact.data()[i] *
                        ActivationSlope(spec.activation,
                                        cache.normalized.data()[i]);
    }

    Matrix dlinear;
    if (spec.static_bn) {
      // d/dx of (x - mean)/sqrt(var + eps):
      //   inv_std * (dy - mean(dy) - y * mean(dy * y))
      std::vector<double> mean_dy(cols, 0.0);
      std::vector<double> mean_dy_y(cols, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        const auto dy = dnorm.row(r);
        const auto y = cache.normalized.row(r);
        for (std::size_t c = 0; c < cols; ++c) {
          mean_dy[c] += dy[c];
          mean_dy_y[c] += dy[c] * y[c];
        }
      }
      for (std::size_t c = 0; c < cols; ++c) {
        mean_dy[c] *= inv_n;
        mean_dy_y[c] *= inv_n;
      }
      dlinear = Matrix(n, cols);
      for (std::size_t r = 0; r < n; ++r) {
        const auto dy = dnorm.row(r);
        const auto y = cache.normalized.row(r);
        auto dx = dlinear.row(r);
        for (std::size_t c = 0; c < cols; ++c) {
          dx[c] = cache.inv_std[c] * (dy[c] - mean_dy[c] - y[c] * mean_dy_y[c]);
        }
      }
    } else {
      dlinear = std::move(dnorm);
    }

    Matrix dweights = MatMulTransposeA(cache.input, dlinear);
    std::copy(dweights.data().begin(), dweights.data().end(),
              result.grad.begin() + static_cast<std::ptrdiff_t>(shape.offset));
    if (l > 0) {
      dact = MatMulTransposeB(dlinear,
                              normalized.subspan(shape.offset, shape.size()),
                              shape.rows);
    }
  }
  return result;
}

OpCount CountForwardOps(const Model& model, WeightType weight_type,
                        std::size_t batch_size) {
  OpCount count;
  const std::size_t n = batch_size;
  for (const LayerShape& s : model.shapes()) {
    LayerOps ops{"hidden" + std::to_string(s.layer), 0, 0};
    // One output needs rows products and rows - 1 sums.
    if (weight_type == WeightType::kFloat) {
      ops.muls = n * s.rows * s.cols;
      ops.adds = n * s.cols * (s.rows - 1);
    } else {
      ops.muls = 0;
      ops.adds = n * s.cols * (2 * s.rows - 1);
    }
    count.layers.push_back(ops);
    if (model.spec().static_bn) {
      // Per column: mean, centered squares, variance, scale by 1/std.
      LayerOps bn{"bn" + std::to_string(s.layer), 0, 0};
      bn.adds = s.cols * (3 * n - 1);
      bn.muls = s.cols * (2 * n + 2);
      count.layers.push_back(bn);
    }
  }
  const Matrix& f = model.final_layer();
  count.layers.push_back(
      {"output", n * f.cols() * (f.rows() - 1), n * f.rows() * f.cols()});
  for (const LayerOps& ops : count.layers) {
    count.adds += ops.adds;
    count.muls += ops.muls;
  }
  count.energy_mj = (kMulEnergyPj * static_cast<double>(count.muls) +
                     kAddEnergyPj * static_cast<double>(count.adds)) *
                    1e-9;
  return count;
}

}  // namespace fedvote
