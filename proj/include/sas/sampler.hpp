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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sas/pool.hpp"
#include "sas/scoring.hpp"

namespace sas {

enum class SelectorKind { kSas, kMarginOnly, kRandom, kKCenter, kMixed };

std::string_view selector_name(SelectorKind kind);
// Accepts sas, margin (or margin_only), random, kcenter, mixed.
SelectorKind parse_selector(std::string_view name);

// Which score components a two-stage run uses. Stage 1 ranks by
// relevance + separation, either one alone, or (neither) skips filtering.
// Without use_div the stage-1 top-ipc is returned directly; with all three
// disabled the run falls back to random selection.
struct Ablation {
  bool use_rel = true;
  bool use_sep = true;
  bool use_div = true;

  friend bool operator==(const Ablation&, const Ablation&) = default;
};

struct SelectionConfig {
  std::size_t ipc = 10;
  double candidate_ratio = 0.5;
  SelectorKind selector = SelectorKind::kSas;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  Ablation ablation;
  // Sweep-only: when > 0, restrict each class to its first
  // pool_multiplier * ipc images before selecting.
  std::size_t pool_multiplier = 0;

  friend bool operator==(const SelectionConfig&, const SelectionConfig&) = default;
};

// Throws ArgumentError for ipc == 0, ratio outside (0, 1), negative lambda.
void validate(const SelectionConfig& config);

struct SelectedImage {
  std::size_t index = 0;
  std::string image_id;
  double margin = 0.0;
  // Mean angle to the other members of the final selection; NaN if alone.
  double dynamic_diversity = 0.0;
};

struct Removal {
  std::size_t step = 0;  // 1-based count of candidates inserted so far
  std::size_t index = 0;
  std::string image_id;
  double diversity = 0.0;
};

struct ClassSelection {
  std::size_t class_index = 0;
  std::string class_name;
  std::vector<SelectedImage> selected;
  std::vector<Removal> removals;
};

struct Selection {
  SelectionConfig config;
  std::vector<std::string> warnings;
  std::vector<ClassSelection> classes;  // pool class order
};

// k_c = max(ipc, round_half_up(ratio * n_c)), capped at n_c.
std::size_t candidate_count(std::size_t class_size, std::size_t ipc, double ratio);

// Score used by stage 1 under the given ablation flags.
std::vector<double> stage1_scores(const ScoreTable& table, const Ablation& ablation);

// Indices of `members` ordered by descending score, ties by ascending index.
std::vector<std::size_t> rank_descending(std::span<const double> scores,
                                         std::span<const std::size_t> members);

// Per-class stage-1 candidates, in descending stage-1 score order.
std::vector<std::vector<std::size_t>> filter_candidates(const EmbeddingPool& pool,
                                                        const ScoreTable& table,
                                                        const SelectionConfig& config);

Selection select_sas(const EmbeddingPool& pool, const ScoreTable& table,
                     const SelectionConfig& config);
Selection select_margin_only(const EmbeddingPool& pool, const ScoreTable& table,
                             const SelectionConfig& config);
Selection select_mixed(const EmbeddingPool& pool, const ScoreTable& table,
                       const SelectionConfig& config);

// Dispatches on config.selector (including the baselines).
Selection run_selector(const EmbeddingPool& pool, const ScoreTable& table,
                       const SelectionConfig& config);

}  // namespace sas
