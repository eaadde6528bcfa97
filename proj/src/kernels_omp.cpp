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

#include <omp.h>

#include <cmath>
#include <limits>

#include "sas/kernels.hpp"

namespace sas::kernels {

DistanceMatrix pairwise_angular(const UnitRows& rows, std::span<const std::size_t> subset) {
  DistanceMatrix m;
  m.n = subset.size();
  m.values.assign(m.n * m.n, 0.0);
  const std::size_t dim = rows.dim();
  const auto n = static_cast<std::int64_t>(m.n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    const double* a = rows.row_ptr(subset[i]);
    for (std::int64_t j = 0; j < n; ++j) {
      m.values[i * n + j] = angular_distance_unchecked(a, rows.row_ptr(subset[j]), dim);
    }
  }
  return m;
}

void relevance_separation(const UnitRows& features, const UnitRows& prototypes,
                          std::span<const std::uint32_t> labels, std::span<double> relevance,
                          std::span<double> separation) {
  const std::size_t dim = features.dim();
  const std::size_t n_classes = prototypes.rows();
  const auto n = static_cast<std::int64_t>(labels.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double* v = features.row_ptr(i);
    double nearest_other = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n_classes; ++c) {
      const double d = angular_distance_unchecked(v, prototypes.row_ptr(c), dim);
      if (c == labels[i]) {
        relevance[i] = -d;
      } else if (d < nearest_other) {
        nearest_other = d;
      }
    }
    separation[i] = nearest_other;
  }
}

void class_mean_distances(const UnitRows& features,
                          const std::vector<std::vector<std::size_t>>& classes,
                          std::span<double> out) {
  // Flatten (class, position) so one parallel loop covers every image.
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t p = 0; p < classes[c].size(); ++p) work.emplace_back(c, p);
  }
  const std::size_t dim = features.dim();
  const auto n = static_cast<std::int64_t>(work.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t w = 0; w < n; ++w) {
    const auto& members = classes[work[w].first];
    const std::size_t self = members[work[w].second];
    if (members.size() < 2) {
      out[self] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double* v = features.row_ptr(self);
    double sum = 0.0;
    for (std::size_t j : members) {
      if (j != self) sum += angular_distance_unchecked(v, features.row_ptr(j), dim);
    }
    out[self] = sum / static_cast<double>(members.size() - 1);
  }
}

}  // namespace sas::kernels
