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

#include "sas/angular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sas/errors.hpp"

namespace sas {

double angular_distance_unchecked(const double* a, const double* b, std::size_t dim) {
  double dot = 0.0;
  for (std::size_t k = 0; k < dim; ++k) dot += a[k] * b[k];
  dot = std::clamp(dot, -1.0 + kClampEpsilon, 1.0 - kClampEpsilon);
  return std::acos(dot);
}

double angular_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ArgumentError("angular_distance: dimension mismatch (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::isfinite(a[k]) || !std::isfinite(b[k])) {
      throw ArgumentError("angular_distance: non-finite input");
    }
  }
  return angular_distance_unchecked(a.data(), b.data(), a.size());
}

std::vector<double> to_unit(std::span<const float> v) {
  std::vector<double> out(v.begin(), v.end());
  double sq = 0.0;
  for (double x : out) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ArgumentError("cannot normalize a zero or non-finite vector");
  }
  for (double& x : out) x /= norm;
  return out;
}

UnitRows::UnitRows(std::span<const float> values, std::size_t dim) : dim_(dim) {
  if (dim == 0 || values.size() % dim != 0) {
    throw ArgumentError("UnitRows: matrix size is not a multiple of dim");
  }
  data_.reserve(values.size());
  for (std::size_t off = 0; off < values.size(); off += dim) {
    const auto unit = to_unit(values.subspan(off, dim));
    data_.insert(data_.end(), unit.begin(), unit.end());
  }
}

}  // namespace sas
