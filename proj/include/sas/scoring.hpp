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
#include <optional>
#include <span>
#include <vector>

#include "sas/pool.hpp"

namespace sas {

/// Per-image semantic scores, indexed by pool row.
///
///   relevance         -angle(image, own prototype)             in [-pi, 0]
///   separation        min angle(image, other prototypes)       in [0, pi]
///   diversity_static  mean angle(image, other same-class rows) in [0, pi]
///   margin            relevance + separation
///
/// diversity_static is NaN for images that are alone in their class; those
/// classes are listed in `singleton_classes`.
struct ScoreTable {
  std::vector<double> relevance;
  std::vector<double> separation;
  std::vector<double> diversity_static;
  std::vector<double> margin;
  std::optional<std::vector<double>> mixed;
  std::vector<std::size_t> singleton_classes;

  std::size_t size() const { return margin.size(); }
};

double target_relevance(const EmbeddingPool& pool, std::size_t image);
double non_target_separation(const EmbeddingPool& pool, std::size_t image);

// Mean angular distance from `image` to the other entries of `members`.
// `members` must contain `image`, hold >= 2 entries, and share its class.
// Over the whole class this is the static diversity; over an evolving
// selection it is the dynamic diversity used by the two-stage sampler.
double diversity(const EmbeddingPool& pool, std::size_t image,
                 std::span<const std::size_t> members);

// OpenMP kernel. Every image's scores are computed independently, so the
// result is bitwise identical to score_pool_serial for any thread count.
ScoreTable score_pool(const EmbeddingPool& pool);
// Single-threaded reference kept for tests and benchmarks.
ScoreTable score_pool_serial(const EmbeddingPool& pool);

// Per-class population z-score of `values`; a class whose values are all
// equal maps to 0. Throws ArgumentError if any value is NaN.
std::vector<double> zscore_by_class(const EmbeddingPool& pool, std::span<const double> values);

// margin + lambda * zscore_by_class(diversity_static).
std::vector<double> mixed_score(const ScoreTable& table, const EmbeddingPool& pool,
                                double lambda);

}  // namespace sas
