// Copyright 2026 The ALEM Authors.
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

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alem {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  std::span<double> row(std::size_t i) {
    assert(i < rows);
    return {data.data() + i * cols, cols};
  }
  std::span<const double> row(std::size_t i) const {
    assert(i < rows);
    return {data.data() + i * cols, cols};
  }

  void append_row(std::span<const double> r) {
    if (rows == 0 && cols == 0) cols = r.size();
    if (r.size() != cols) {
      throw std::invalid_argument("row length " + std::to_string(r.size()) +
                                  " does not match matrix width " +
                                  std::to_string(cols));
    }
    data.insert(data.end(), r.begin(), r.end());
    ++rows;
  }

  bool operator==(const Matrix&) const = default;
};

/// Paired inputs and oracle outputs, one sample per row.
struct Dataset {
  Matrix inputs;
  Matrix targets;

  std::size_t size() const { return inputs.rows; }
  bool empty() const { return inputs.rows == 0; }
  std::span<const double> x(std::size_t i) const { return inputs.row(i); }
  std::span<const double> y(std::size_t i) const { return targets.row(i); }

  void append(std::span<const double> x_row, std::span<const double> y_row) {
    inputs.append_row(x_row);
    targets.append_row(y_row);
  }
};

}  // namespace alem
