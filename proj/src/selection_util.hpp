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

// Helpers shared by the selectors: per-class parallel dispatch and final
// Selection assembly.

#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "sas/angular.hpp"
#include "sas/errors.hpp"
#include "sas/sampler.hpp"

namespace sas::detail {

// Runs fn(class_index) for every class, possibly in parallel. Results are
// stored by class index; the first exception (lowest class) is rethrown.
template <typename Fn>
std::vector<ClassSelection> per_class(std::size_t n_classes, Fn&& fn) {
  std::vector<ClassSelection> out(n_classes);
  std::vector<std::exception_ptr> errors(n_classes);
  const auto n = static_cast<std::int64_t>(n_classes);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < n; ++c) {
    try {
      out[c] = fn(static_cast<std::size_t>(c));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Fills a ClassSelection for `chosen` (in output order), computing each
// member's mean angle to the rest of the final set from raw features.
inline ClassSelection finish_class(const EmbeddingPool& pool, const ScoreTable& table,
                                   const UnitRows& features, std::size_t cls,
                                   const std::vector<std::size_t>& chosen,
                                   std::vector<Removal> removals = {}) {
  ClassSelection cs;
  cs.class_index = cls;
  cs.class_name = pool.class_names[cls];
  cs.removals = std::move(removals);
  cs.selected.reserve(chosen.size());
  for (std::size_t i : chosen) {
    double div = std::numeric_limits<double>::quiet_NaN();
    if (chosen.size() >= 2) {
      double sum = 0.0;
      for (std::size_t j : chosen) {
        if (j != i) {
          sum += angular_distance_unchecked(features.row_ptr(i), features.row_ptr(j),
                                            features.dim());
        }
      }
      div = sum / static_cast<double>(chosen.size() - 1);
    }
    cs.selected.push_back({i, pool.image_ids[i], table.margin[i], div});
  }
  return cs;
}

inline std::vector<std::string> short_class_warnings(const EmbeddingPool& pool,
                                                     std::size_t ipc) {
  std::vector<std::string> warnings;
  const auto classes = pool.members_by_class();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].size() < ipc) {
      warnings.push_back("class " + pool.class_names[c] + " has " +
                         std::to_string(classes[c].size()) + " images, fewer than ipc " +
                         std::to_string(ipc) + "; selected in full");
    }
  }
  return warnings;
}

inline void check_table(const EmbeddingPool& pool, const ScoreTable& table) {
  if (table.size() != pool.n_images() || table.relevance.size() != pool.n_images() ||
      table.separation.size() != pool.n_images()) {
    throw ArgumentError("score table does not match pool (" + std::to_string(table.size()) +
                        " rows vs " + std::to_string(pool.n_images()) + " images)");
  }
}

}  // namespace sas::detail
