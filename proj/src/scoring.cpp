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

#include "sas/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sas/angular.hpp"
#include "sas/errors.hpp"
#include "sas/kernels.hpp"

namespace sas {

namespace {

void check_image(const EmbeddingPool& pool, std::size_t image) {
  if (image >= pool.n_images()) {
    throw ArgumentError("image index " + std::to_string(image) + " out of range (n_images " +
                        std::to_string(pool.n_images()) + ")");
  }
}

void check_scorable(const EmbeddingPool& pool) {
  if (pool.n_classes() < 2) {
    throw ArgumentError("scoring needs at least 2 classes, got " +
                        std::to_string(pool.n_classes()));
  }
  validate(pool, /*require_every_class=*/false);
}

template <typename Kernels>
ScoreTable score_with(const EmbeddingPool& pool, Kernels k) {
  check_scorable(pool);
  const std::size_t n = pool.n_images();
  const auto features = UnitRows::features_of(pool);
  const auto prototypes = UnitRows::prototypes_of(pool);
  const auto classes = pool.members_by_class();

  ScoreTable t;
  t.relevance.resize(n);
  t.separation.resize(n);
  t.diversity_static.resize(n);
  t.margin.resize(n);
  k.relevance_separation(features, prototypes, pool.labels, t.relevance, t.separation);
  k.class_mean_distances(features, classes, t.diversity_static);
  for (std::size_t i = 0; i < n; ++i) t.margin[i] = t.relevance[i] + t.separation[i];
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].size() == 1) t.singleton_classes.push_back(c);
  }
  return t;
}

struct ParallelKernels {
  static void relevance_separation(const UnitRows& f, const UnitRows& p,
                                   std::span<const std::uint32_t> l, std::span<double> r,
                                   std::span<double> s) {
    kernels::relevance_separation(f, p, l, r, s);
  }
  static void class_mean_distances(const UnitRows& f,
                                   const std::vector<std::vector<std::size_t>>& c,
                                   std::span<double> out) {
    kernels::class_mean_distances(f, c, out);
  }
};

struct SerialKernels {
  static void relevance_separation(const UnitRows& f, const UnitRows& p,
                                   std::span<const std::uint32_t> l, std::span<double> r,
                                   std::span<double> s) {
    kernels::relevance_separation_serial(f, p, l, r, s);
  }
  static void class_mean_distances(const UnitRows& f,
                                   const std::vector<std::vector<std::size_t>>& c,
                                   std::span<double> out) {
    kernels::class_mean_distances_serial(f, c, out);
  }
};

}  // namespace

double target_relevance(const EmbeddingPool& pool, std::size_t image) {
  check_image(pool, image);
  const auto v = to_unit(pool.feature(image));
  const auto t = to_unit(pool.prototype(pool.labels[image]));
  return -angular_distance(v, t);
}

double non_target_separation(const EmbeddingPool& pool, std::size_t image) {
  check_image(pool, image);
  if (pool.n_classes() < 2) throw ArgumentError("separation needs at least 2 classes");
  const auto v = to_unit(pool.feature(image));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < pool.n_classes(); ++c) {
    if (c == pool.labels[image]) continue;
    best = std::min(best, angular_distance(v, to_unit(pool.prototype(c))));
  }
  return best;
}

double diversity(const EmbeddingPool& pool, std::size_t image,
                 std::span<const std::size_t> members) {
  check_image(pool, image);
  if (members.size() < 2) throw ArgumentError("diversity undefined for singleton set");
  const auto cls = pool.labels[image];
  bool found = false;
  for (std::size_t j : members) {
    check_image(pool, j);
    if (pool.labels[j] != cls) {
      throw ArgumentError("diversity members mix classes (image " + std::to_string(j) +
                          " is not class " + std::to_string(cls) + ")");
    }
    found = found || j == image;
  }
  if (!found) throw ArgumentError("diversity members must include the image itself");
  const auto v = to_unit(pool.feature(image));
  double sum = 0.0;
  for (std::size_t j : members) {
    if (j != image) sum += angular_distance(v, to_unit(pool.feature(j)));
  }
  return sum / static_cast<double>(members.size() - 1);
}

ScoreTable score_pool(const EmbeddingPool& pool) { return score_with(pool, ParallelKernels{}); }

ScoreTable score_pool_serial(const EmbeddingPool& pool) {
  return score_with(pool, SerialKernels{});
}

std::vector<double> zscore_by_class(const EmbeddingPool& pool, std::span<const double> values) {
  if (values.size() != pool.n_images()) {
    throw ArgumentError("zscore_by_class: value count does not match pool");
  }
  std::vector<double> z(values.size(), 0.0);
  for (const auto& members : pool.members_by_class()) {
    if (members.empty()) continue;
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i : members) {
      if (std::isnan(values[i])) {
        throw ArgumentError("diversity undefined for singleton set (class " +
                            std::to_string(pool.labels[i]) + ")");
      }
      sum += values[i];
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    if (lo == hi) continue;
    const double mean = sum / static_cast<double>(members.size());
    double sq = 0.0;
    for (std::size_t i : members) sq += (values[i] - mean) * (values[i] - mean);
    const double sd = std::sqrt(sq / static_cast<double>(members.size()));
    for (std::size_t i : members) z[i] = (values[i] - mean) / sd;
  }
  return z;
}

std::vector<double> mixed_score(const ScoreTable& table, const EmbeddingPool& pool,
                                double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("lambda must be a finite value >= 0");
  }
  if (table.size() != pool.n_images()) {
    throw ArgumentError("score table does not match pool");
  }
  const auto z = zscore_by_class(pool, table.diversity_static);
  std::vector<double> mixed(table.size());
  for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = table.margin[i] + lambda * z[i];
  return mixed;
}

}  // namespace sas
