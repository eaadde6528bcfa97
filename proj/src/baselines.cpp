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

#include "sas/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sas/angular.hpp"
#include "sas/errors.hpp"
#include "sas/rng.hpp"
#include "selection_util.hpp"

namespace sas {

namespace detail {

Selection random_selection(const EmbeddingPool& pool, const ScoreTable& table,
                           const SelectionConfig& config) {
  validate(config);
  check_table(pool, table);
  const auto features = UnitRows::features_of(pool);
  const auto classes = pool.members_by_class();
  Selection sel;
  sel.config = config;
  sel.warnings = short_class_warnings(pool, config.ipc);
  sel.classes = per_class(pool.n_classes(), [&](std::size_t c) {
    auto members = classes[c];
    const std::size_t k = std::min(members.size(), config.ipc);
    auto rng = SplitMix64::for_stream(config.seed, c);
    // Partial Fisher-Yates: the first k slots become the sample.
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng.below(members.size() - i);
      std::swap(members[i], members[j]);
    }
    members.resize(k);
    return finish_class(pool, table, features, c, members);
  });
  return sel;
}

}  // namespace detail

Selection select_random(const EmbeddingPool& pool, const ScoreTable& table,
                        const SelectionConfig& config) {
  if (config.selector != SelectorKind::kRandom) {
    throw ArgumentError("select_random requires selector \"random\"");
  }
  return detail::random_selection(pool, table, config);
}

Selection select_random(const EmbeddingPool& pool, const SelectionConfig& config) {
  return select_random(pool, score_pool(pool), config);
}

Selection select_kcenter(const EmbeddingPool& pool, const ScoreTable& table,
                         const SelectionConfig& config) {
  if (config.selector != SelectorKind::kKCenter) {
    throw ArgumentError("select_kcenter requires selector \"kcenter\"");
  }
  validate(config);
  detail::check_table(pool, table);
  const auto features = UnitRows::features_of(pool);
  const auto classes = pool.members_by_class();
  Selection sel;
  sel.config = config;
  sel.warnings = detail::short_class_warnings(pool, config.ipc);
  sel.classes = detail::per_class(pool.n_classes(), [&](std::size_t c) {
    const auto& members = classes[c];
    const std::size_t k = std::min(members.size(), config.ipc);
    std::vector<std::size_t> chosen;
    if (k == 0) return detail::finish_class(pool, table, features, c, chosen);

    // Members are ascending, so strict comparisons keep the lowest index on ties.
    std::size_t first = 0;
    for (std::size_t p = 1; p < members.size(); ++p) {
      if (table.relevance[members[p]] > table.relevance[members[first]]) first = p;
    }
    std::vector<bool> taken(members.size(), false);
    std::vector<double> nearest(members.size(), std::numeric_limits<double>::infinity());
    std::size_t last = first;
    taken[first] = true;
    chosen.push_back(members[first]);
    while (chosen.size() < k) {
      std::size_t best = members.size();
      for (std::size_t p = 0; p < members.size(); ++p) {
        if (taken[p]) continue;
        const double d = angular_distance_unchecked(features.row_ptr(members[p]),
                                                    features.row_ptr(members[last]),
                                                    features.dim());
        nearest[p] = std::min(nearest[p], d);
        if (best == members.size() || nearest[p] > nearest[best]) best = p;
      }
      taken[best] = true;
      chosen.push_back(members[best]);
      last = best;
    }
    return detail::finish_class(pool, table, features, c, chosen);
  });
  return sel;
}

Selection select_kcenter(const EmbeddingPool& pool, const SelectionConfig& config) {
  return select_kcenter(pool, score_pool(pool), config);
}

}  // namespace sas
