// Copyright 2026 The Authors.
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

#include <cstddef>
#include <span>
#include <vector>

#include "sas/pool.hpp"

namespace sas {

// Inner products are clamped to [-1 + eps, 1 - eps] before arccos.
inline constexpr double kClampEpsilon = 1e-6;

// arccos of the clamped inner product of two unit vectors, in radians.
// Output lies in [arccos(1 - eps), arccos(-1 + eps)], so identical vectors
// are ~1.414e-3 apart, not 0. Throws ArgumentError on dimension mismatch or
// non-finite input. Does not renormalize.
double angular_distance(std::span<const double> a, std::span<const double> b);

// Same as angular_distance without argument checks, for hot loops whose
// rows were already validated. Bitwise identical results.
double angular_distance_unchecked(const double* a, const double* b, std::size_t dim);

/// Row-major float64 copy of a float32 matrix with each row renormalized to
/// unit length. Scores are computed on these rows.
class UnitRows {
 public:
  UnitRows() = default;
  UnitRows(std::span<const float> values, std::size_t dim);

  static UnitRows features_of(const EmbeddingPool& pool) { return {pool.features, pool.dim}; }
  static UnitRows prototypes_of(const EmbeddingPool& pool) { return {pool.prototypes, pool.dim}; }

  std::size_t rows() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }
  const double* row_ptr(std::size_t r) const { return data_.data() + r * dim_; }

 private:
  std::vector<double> data_;
  std::size_t dim_ = 0;
};

// Float64 unit copy of a single float32 row.
std::vector<double> to_unit(std::span<const float> v);

}  // namespace sas
