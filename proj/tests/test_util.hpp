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

#include <cmath>
#include <string>
#include <vector>

#include "sas/pool.hpp"

namespace testutil {

inline void push_unit(std::vector<float>& out, const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  for (double x : v) out.push_back(static_cast<float>(x / std::sqrt(sq)));
}

// Builds a pool from unnormalized rows; rows are normalized on the way in.
inline sas::EmbeddingPool make_pool(const std::vector<std::vector<double>>& prototypes,
                                    const std::vector<std::uint32_t>& labels,
                                    const std::vector<std::vector<double>>& features) {
  sas::EmbeddingPool p;
  p.dim = static_cast<std::uint32_t>(prototypes.at(0).size());
  for (std::size_t c = 0; c < prototypes.size(); ++c) {
    p.class_names.push_back("c" + std::to_string(c));
    push_unit(p.prototypes, prototypes[c]);
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    p.image_ids.push_back("img" + std::to_string(i));
    p.labels.push_back(labels.at(i));
    push_unit(p.features, features[i]);
  }
  return p;
}

inline std::vector<double> basis(std::size_t dim, std::size_t k, double sign = 1.0) {
  std::vector<double> v(dim, 0.0);
  v[k] = sign;
  return v;
}

}  // namespace testutil
