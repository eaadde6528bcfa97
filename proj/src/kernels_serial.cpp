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

#include <algorithm>
#include <cmath>
#include <limits>

#include "sas/kernels.hpp"

namespace sas::kernels {

// Upper triangle only, mirrored. Products commute bitwise, so this matches
// the full-matrix OpenMP kernel exactly.
DistanceMatrix pairwise_angular_serial(const UnitRows& rows, std::span<const std::size_t> subset) {
  DistanceMatrix m;
  m.n = subset.size();
  m.values.assign(m.n * m.n, 0.0);
  const std::size_t dim = rows.dim();
  for (std::size_t i = 0; i < m.n; ++i) {
    const double* a = rows.row_ptr(subset[i]);
    for (std::size_t j = i; j < m.n; ++j) {
      const double d = angular_distance_unchecked(a, rows.row_ptr(subset[j]), dim);
      m.values[i * m.n + j] = d;
      m.values[j * m.n + i] = d;
    }
  }
  return m;
}

void relevance_separation_serial(const UnitRows& features, const UnitRows& prototypes,
                                 std::span<const std::uint32_t> labels,
                                 std::span<double> relevance, std::span<double> separation) {
  const std::size_t dim = features.dim();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double nearest_other = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < prototypes.rows(); ++c) {
      const double d = angular_distance_unchecked(features.row_ptr(i), prototypes.row_ptr(c), dim);
      if (c == labels[i]) {
        relevance[i] = -d;
      } else {
        nearest_other = std::min(nearest_other, d);
      }
    }
    separation[i] = nearest_other;
  }
}

void class_mean_distances_serial(const UnitRows& features,
                                 const std::vector<std::vector<std::size_t>>& classes,
                                 std::span<double> out) {
  for (const auto& members : classes) {
    if (members.size() == 1) {
      out[members[0]] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const DistanceMatrix d = pairwise_angular_serial(features, members);
    for (std::size_t i = 0; i < d.n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < d.n; ++j) {
        if (j != i) sum += d(i, j);
      }
      out[members[i]] = sum / static_cast<double>(d.n - 1);
    }
  }
}

}  // namespace sas::kernels
