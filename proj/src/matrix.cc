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

#include "fedvote/matrix.h"

#include <string>

#include "fedvote/errors.h"

namespace fedvote {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidArgument("matrix: data length " +
                          std::to_string(data_.size()) + " != " +
                          std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

Matrix MatMul(const Matrix& a, std::span<const double> b, std::size_t cols) {
  const std::size_t inner = a.cols();
  if (b.size() != inner * cols) {
    throw InvalidArgument("matmul: inner dimension mismatch");
  }
  Matrix out(a.rows(), cols);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double* o = out.row(r).data();
    const double* ar = a.row(r).data();
    for (std::size_t k = 0; k < inner; ++k) {
      const double v = ar[k];
      if (v == 0.0) continue;
      const double* br = b.data() + k * cols;
      for (std::size_t c = 0; c < cols; ++c) o[c] += v * br[c];
    }
  }
  return out;
}

Matrix MatMulTransposeA(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw InvalidArgument("matmul_ta: row count mismatch");
  }
  Matrix out(a.cols(), b.cols());
  for (std::size_t n = 0; n < a.rows(); ++n) {
    const double* ar = a.row(n).data();
    const double* br = b.row(n).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double v = ar[p];
      if (v == 0.0) continue;
      double* o = out.row(p).data();
      for (std::size_t q = 0; q < b.cols(); ++q) o[q] += v * br[q];
    }
  }
  return out;
}

Matrix MatMulTransposeB(const Matrix& a, std::span<const double> b,
                        std::size_t rows_b) {
  const std::size_t inner = a.cols();
  if (b.size() != rows_b * inner) {
    throw InvalidArgument("matmul_tb: inner dimension mismatch");
  }
  Matrix out(a.rows(), rows_b);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double* ar = a.row(r).data();
    for (std::size_t j = 0; j < rows_b; ++j) {
      const double* br = b.data() + j * inner;
      double acc = 0.0;
      for (std::size_t k = 0; k < inner; ++k) acc += ar[k] * br[k];
      out(r, j) = acc;
    }
  }
  return out;
}

}  // namespace fedvote
