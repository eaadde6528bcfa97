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
#include <string>
#include <vector>

#include <json.hpp>

#include "sas/pool.hpp"
#include "sas/sampler.hpp"
#include "sas/scoring.hpp"

namespace sas {

/// Semantic-quality metrics for one class of a selection (or the whole
/// selection when `class_index` is npos). Everything is recomputed from raw
/// features; the Selection's cached margins and diversities are only
/// compared against the recomputed values.
struct ClassReport {
  static constexpr std::size_t kOverall = static_cast<std::size_t>(-1);

  std::size_t class_index = kOverall;
  std::string class_name = "overall";
  std::size_t n_selected = 0;
  std::size_t class_size = 0;
  double mean_margin = 0.0;
  double min_margin = 0.0;
  double max_margin = 0.0;
  // Mean pairwise angle inside the selection; NaN ("undefined") below 2.
  double intra_diversity = 0.0;
  std::size_t n_candidates = 0;
  // Fraction of selected images that are stage-1 candidates.
  double candidate_retention = 0.0;
};

struct SelectionReport {
  std::vector<ClassReport> classes;
  ClassReport overall;
  // Largest |cached - recomputed| over selected margins and diversities.
  double cache_max_abs_diff = 0.0;
  bool cache_consistent = true;
};

struct ReportOptions {
  double cache_tolerance = 1e-9;
  // Set when cached values went through 9-significant-digit JSON; widens
  // the tolerance by the rounding half-unit (5e-9 relative).
  bool cached_values_rounded = false;
};

SelectionReport selection_report(const EmbeddingPool& pool, const ScoreTable& table,
                                 const Selection& selection, const ReportOptions& options = {});

nlohmann::ordered_json report_to_json(const SelectionReport& report);
std::string report_to_csv(const SelectionReport& report);
std::string report_to_table(const SelectionReport& report);

/// One row of a sweep: a (grid entry, class) pair or the grid entry's
/// overall row. Failed entries carry `error` and no metrics.
struct SweepRow {
  std::size_t grid_index = 0;
  SelectionConfig config;
  std::optional<ClassReport> metrics;
  std::string error;
  // Reserved for accuracies measured outside this tool; empty here.
  std::optional<double> external_accuracy;
};

// Restricts every class to its first `per_class` images (pool order).
EmbeddingPool truncate_classes(const EmbeddingPool& pool, std::size_t per_class);

std::vector<SweepRow> sweep(const EmbeddingPool& pool, const std::vector<SelectionConfig>& grid);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace sas
