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

#include "sas/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sas/baselines.hpp"
#include "sas/errors.hpp"
#include "sas/kernels.hpp"
#include "selection_util.hpp"

namespace sas {

std::string_view selector_name(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::kSas:
      return "sas";
    case SelectorKind::kMarginOnly:
      return "margin";
    case SelectorKind::kRandom:
      return "random";
    case SelectorKind::kKCenter:
      return "kcenter";
    case SelectorKind::kMixed:
      return "mixed";
  }
  return "unknown";
}

SelectorKind parse_selector(std::string_view name) {
  if (name == "sas") return SelectorKind::kSas;
  if (name == "margin" || name == "margin_only") return SelectorKind::kMarginOnly;
  if (name == "random") return SelectorKind::kRandom;
  if (name == "kcenter") return SelectorKind::kKCenter;
  if (name == "mixed") return SelectorKind::kMixed;
  throw ArgumentError("unknown selector \"" + std::string(name) + "\"");
}

void validate(const SelectionConfig& config) {
  if (config.ipc == 0) throw ArgumentError("ipc must be >= 1");
  if (!(config.candidate_ratio > 0.0 && config.candidate_ratio < 1.0)) {
    throw ArgumentError("candidate ratio must lie in (0, 1), got " +
                        std::to_string(config.candidate_ratio));
  }
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
    throw ArgumentError("lambda must be a finite value >= 0");
  }
}

std::size_t candidate_count(std::size_t class_size, std::size_t ipc, double ratio) {
  const auto rounded =
      static_cast<std::size_t>(std::floor(ratio * static_cast<double>(class_size) + 0.5));
  return std::min(class_size, std::max(ipc, rounded));
}

std::vector<double> stage1_scores(const ScoreTable& table, const Ablation& ablation) {
  if (ablation.use_rel && ablation.use_sep) return table.margin;
  if (ablation.use_rel) return table.relevance;
  if (ablation.use_sep) return table.separation;
  return std::vector<double>(table.size(), 0.0);
}

std::vector<std::size_t> rank_descending(std::span<const double> scores,
                                         std::span<const std::size_t> members) {
  std::vector<std::size_t> order(members.begin(), members.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return order;
}

std::vector<std::vector<std::size_t>> filter_candidates(const EmbeddingPool& pool,
                                                        const ScoreTable& table,
                                                        const SelectionConfig& config) {
  validate(config);
  detail::check_table(pool, table);
  const bool unfiltered = !config.ablation.use_rel && !config.ablation.use_sep;
  const auto scores = stage1_scores(table, config.ablation);
  auto classes = pool.members_by_class();
  for (auto& members : classes) {
    if (unfiltered) continue;  // diversity-only: every image is a candidate, pool order
    auto ranked = rank_descending(scores, members);
    ranked.resize(candidate_count(members.size(), config.ipc, config.candidate_ratio));
    members = std::move(ranked);
  }
  return classes;
}

namespace {

void require_selector(const SelectionConfig& config, SelectorKind kind) {
  if (config.selector != kind) {
    throw ArgumentError("selector is \"" + std::string(selector_name(config.selector)) +
                        "\", expected \"" + std::string(selector_name(kind)) + "\"");
  }
}

// Insert candidates in order; whenever the set holds ipc + 1 members, drop
// the one with the lowest mean angle to the rest (ties: lower margin, then
// higher pool index).
std::vector<std::size_t> diversity_aware_pass(const ScoreTable& table, const UnitRows& features,
                                              const std::vector<std::size_t>& candidates,
                                              std::size_t ipc, std::vector<Removal>& removals,
                                              const EmbeddingPool& pool) {
  const auto dist = kernels::pairwise_angular(features, candidates);
  std::vector<std::size_t> current;  // positions into `candidates`, insertion order
  current.reserve(ipc + 1);
  std::vector<double> div(ipc + 1);
  for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
    current.push_back(pos);
    if (current.size() <= ipc) continue;

    const double denom = static_cast<double>(current.size() - 1);
    for (std::size_t a = 0; a < current.size(); ++a) {
      double sum = 0.0;
      for (std::size_t b = 0; b < current.size(); ++b) {
        if (b != a) sum += dist(current[a], current[b]);
      }
      div[a] = sum / denom;
    }
    std::size_t victim = 0;
    for (std::size_t a = 1; a < current.size(); ++a) {
      const std::size_t ia = candidates[current[a]];
      const std::size_t iv = candidates[current[victim]];
      if (div[a] != div[victim]) {
        if (div[a] < div[victim]) victim = a;
      } else if (table.margin[ia] != table.margin[iv]) {
        if (table.margin[ia] < table.margin[iv]) victim = a;
      } else if (ia > iv) {
        victim = a;
      }
    }
    const std::size_t removed = candidates[current[victim]];
    removals.push_back({pos + 1, removed, pool.image_ids[removed], div[victim]});
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  std::vector<std::size_t> chosen;
  chosen.reserve(current.size());
  for (std::size_t p : current) chosen.push_back(candidates[p]);
  return chosen;
}

Selection top_k_selection(const EmbeddingPool& pool, const ScoreTable& table,
                          const SelectionConfig& config, std::span<const double> scores,
                          const std::vector<std::vector<std::size_t>>& pools_by_class) {
  const auto features = UnitRows::features_of(pool);
  Selection sel;
  sel.config = config;
  sel.warnings = detail::short_class_warnings(pool, config.ipc);
  sel.classes = detail::per_class(pool.n_classes(), [&](std::size_t c) {
    auto ranked = rank_descending(scores, pools_by_class[c]);
    ranked.resize(std::min(ranked.size(), config.ipc));
    return detail::finish_class(pool, table, features, c, ranked);
  });
  return sel;
}

}  // namespace

Selection select_sas(const EmbeddingPool& pool, const ScoreTable& table,
                     const SelectionConfig& config) {
  require_selector(config, SelectorKind::kSas);
  validate(config);
  detail::check_table(pool, table);
  const auto& ab = config.ablation;
  if (!ab.use_rel && !ab.use_sep && !ab.use_div) {
    // Nothing left to rank by: the ablation degenerates to random selection.
    auto sel = detail::random_selection(pool, table, config);
    sel.config = config;
    return sel;
  }
  const auto candidates = filter_candidates(pool, table, config);
  const auto features = UnitRows::features_of(pool);
  Selection sel;
  sel.config = config;
  sel.warnings = detail::short_class_warnings(pool, config.ipc);
  sel.classes = detail::per_class(pool.n_classes(), [&](std::size_t c) {
    const auto& cand = candidates[c];
    if (!ab.use_div) {
      std::vector<std::size_t> top(cand.begin(),
                                   cand.begin() + std::min(cand.size(), config.ipc));
      return detail::finish_class(pool, table, features, c, top);
    }
    std::vector<Removal> removals;
    const auto chosen = diversity_aware_pass(table, features, cand, config.ipc, removals, pool);
    return detail::finish_class(pool, table, features, c, chosen, std::move(removals));
  });
  return sel;
}

Selection select_margin_only(const EmbeddingPool& pool, const ScoreTable& table,
                             const SelectionConfig& config) {
  require_selector(config, SelectorKind::kMarginOnly);
  validate(config);
  detail::check_table(pool, table);
  return top_k_selection(pool, table, config, table.margin, pool.members_by_class());
}

Selection select_mixed(const EmbeddingPool& pool, const ScoreTable& table,
                       const SelectionConfig& config) {
  require_selector(config, SelectorKind::kMixed);
  validate(config);
  detail::check_table(pool, table);
  const auto mixed = mixed_score(table, pool, config.lambda);
  return top_k_selection(pool, table, config, mixed, pool.members_by_class());
}

Selection run_selector(const EmbeddingPool& pool, const ScoreTable& table,
                       const SelectionConfig& config) {
  switch (config.selector) {
    case SelectorKind::kSas:
      return select_sas(pool, table, config);
    case SelectorKind::kMarginOnly:
      return select_margin_only(pool, table, config);
    case SelectorKind::kMixed:
      return select_mixed(pool, table, config);
    case SelectorKind::kRandom:
      return select_random(pool, table, config);
    case SelectorKind::kKCenter:
      return select_kcenter(pool, table, config);
  }
  throw ArgumentError("unknown selector");
}

}  // namespace sas
