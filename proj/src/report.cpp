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

#include "sas/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "sas/angular.hpp"
#include "sas/errors.hpp"
#include "sas/json_io.hpp"

namespace sas {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_pairwise(const std::vector<std::vector<double>>& units) {
  if (units.size() < 2) return kNaN;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < units.size(); ++a) {
    for (std::size_t b = a + 1; b < units.size(); ++b) {
      sum += angular_distance(units[a], units[b]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

// |cached - fresh|, treating NaN == NaN as agreement.
double discrepancy(double cached, double fresh) {
  if (std::isnan(cached) && std::isnan(fresh)) return 0.0;
  if (std::isnan(cached) || std::isnan(fresh)) return std::numeric_limits<double>::infinity();
  return std::abs(cached - fresh);
}

struct MarginStats {
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;

  void add(double m) {
    sum += m;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    ++n;
  }
  void fill(ClassReport& r) const {
    r.n_selected = n;
    r.mean_margin = n ? sum / static_cast<double>(n) : kNaN;
    r.min_margin = n ? lo : kNaN;
    r.max_margin = n ? hi : kNaN;
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

SelectionReport selection_report(const EmbeddingPool& pool, const ScoreTable& table,
                                 const Selection& selection, const ReportOptions& options) {
  std::unordered_map<std::string, std::size_t> by_id;
  by_id.reserve(pool.n_images());
  for (std::size_t i = 0; i < pool.n_images(); ++i) by_id.emplace(pool.image_ids[i], i);

  const auto classes = pool.members_by_class();
  const auto candidates = filter_candidates(pool, table, selection.config);

  SelectionReport report;
  MarginStats overall_margins;
  std::size_t overall_in_candidates = 0;
  double diversity_sum = 0.0;
  std::size_t diversity_classes = 0;

  auto check_cache = [&](double cached, double fresh) {
    const double diff = discrepancy(cached, fresh);
    double tol = options.cache_tolerance;
    if (options.cached_values_rounded && std::isfinite(cached)) tol += 5e-9 * std::abs(cached);
    report.cache_max_abs_diff = std::max(report.cache_max_abs_diff, diff);
    if (!(diff <= tol)) report.cache_consistent = false;
  };

  for (const auto& cs : selection.classes) {
    if (cs.class_index >= pool.n_classes()) {
      throw ArgumentError("selection refers to class " + std::to_string(cs.class_index) +
                          " but pool has " + std::to_string(pool.n_classes()));
    }
    ClassReport r;
    r.class_index = cs.class_index;
    r.class_name = pool.class_names[cs.class_index];
    r.class_size = classes[cs.class_index].size();
    const auto& cand = candidates[cs.class_index];
    r.n_candidates = cand.size();

    std::vector<std::size_t> chosen;
    for (const auto& img : cs.selected) {
      auto it = by_id.find(img.image_id);
      if (it == by_id.end()) throw ArgumentError("unknown image_id \"" + img.image_id + "\"");
      if (pool.labels[it->second] != cs.class_index) {
        throw ArgumentError("image \"" + img.image_id + "\" is not in class " + r.class_name);
      }
      chosen.push_back(it->second);
    }

    MarginStats margins;
    std::vector<std::vector<double>> units;
    std::size_t in_candidates = 0;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      const std::size_t i = chosen[k];
      const double margin = target_relevance(pool, i) + non_target_separation(pool, i);
      check_cache(cs.selected[k].margin, margin);
      const double dyn = chosen.size() >= 2 ? diversity(pool, i, chosen) : kNaN;
      check_cache(cs.selected[k].dynamic_diversity, dyn);
      margins.add(margin);
      overall_margins.add(margin);
      units.push_back(to_unit(pool.feature(i)));
      if (std::find(cand.begin(), cand.end(), i) != cand.end()) ++in_candidates;
    }
    margins.fill(r);
    r.intra_diversity = mean_pairwise(units);
    r.candidate_retention =
        chosen.empty() ? kNaN : static_cast<double>(in_candidates) / chosen.size();
    overall_in_candidates += in_candidates;
    if (!std::isnan(r.intra_diversity)) {
      diversity_sum += r.intra_diversity;
      ++diversity_classes;
    }
    report.overall.class_size += r.class_size;
    report.overall.n_candidates += r.n_candidates;
    report.classes.push_back(std::move(r));
  }
  overall_margins.fill(report.overall);
  report.overall.intra_diversity =
      diversity_classes ? diversity_sum / static_cast<double>(diversity_classes) : kNaN;
  report.overall.candidate_retention =
      overall_margins.n ? static_cast<double>(overall_in_candidates) / overall_margins.n : kNaN;
  return report;
}

namespace {

nlohmann::ordered_json class_report_json(const ClassReport& r) {
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return "undefined";
    return round_sig9(v);
  };
  return {{"class_name", r.class_name},
          {"n_selected", r.n_selected},
          {"class_size", r.class_size},
          {"mean_margin", num(r.mean_margin)},
          {"min_margin", num(r.min_margin)},
          {"max_margin", num(r.max_margin)},
          {"intra_diversity", num(r.intra_diversity)},
          {"n_candidates", r.n_candidates},
          {"candidate_retention", num(r.candidate_retention)}};
}

std::string text_or_undefined(double v) {
  return std::isnan(v) ? "undefined" : format_sig9(v);
}

}  // namespace

nlohmann::ordered_json report_to_json(const SelectionReport& report) {
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const auto& r : report.classes) classes.push_back(class_report_json(r));
  return {{"classes", classes},
          {"overall", class_report_json(report.overall)},
          {"cache_max_abs_diff", round_sig9(report.cache_max_abs_diff)},
          {"cache_consistent", report.cache_consistent}};
}

std::string report_to_csv(const SelectionReport& report) {
  std::ostringstream out;
  out << "class,n_selected,class_size,mean_margin,min_margin,max_margin,intra_diversity,"
         "n_candidates,candidate_retention\n";
  auto row = [&](const ClassReport& r) {
    out << csv_field(r.class_name) << ',' << r.n_selected << ',' << r.class_size << ','
        << text_or_undefined(r.mean_margin) << ',' << text_or_undefined(r.min_margin) << ','
        << text_or_undefined(r.max_margin) << ',' << text_or_undefined(r.intra_diversity) << ','
        << r.n_candidates << ',' << text_or_undefined(r.candidate_retention) << '\n';
  };
  for (const auto& r : report.classes) row(r);
  row(report.overall);
  return out.str();
}

std::string report_to_table(const SelectionReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %5s %5s %12s %12s %12s %12s %9s\n", "class", "sel",
                "pool", "mean_margin", "min_margin", "max_margin", "diversity", "retained");
  out << line;
  auto row = [&](const ClassReport& r) {
    std::snprintf(line, sizeof line, "%-20s %5zu %5zu %12s %12s %12s %12s %9s\n",
                  r.class_name.substr(0, 20).c_str(), r.n_selected, r.class_size,
                  text_or_undefined(r.mean_margin).c_str(),
                  text_or_undefined(r.min_margin).c_str(),
                  text_or_undefined(r.max_margin).c_str(),
                  text_or_undefined(r.intra_diversity).c_str(),
                  text_or_undefined(r.candidate_retention).c_str());
    out << line;
  };
  for (const auto& r : report.classes) row(r);
  row(report.overall);
  out << "cached scores " << (report.cache_consistent ? "consistent" : "INCONSISTENT")
      << " (max abs diff " << format_sig9(report.cache_max_abs_diff) << ")\n";
  return out.str();
}

EmbeddingPool truncate_classes(const EmbeddingPool& pool, std::size_t per_class) {
  std::vector<std::size_t> keep;
  std::vector<std::size_t> taken(pool.n_classes(), 0);
  for (std::size_t i = 0; i < pool.n_images(); ++i) {
    if (taken[pool.labels[i]] < per_class) {
      keep.push_back(i);
      ++taken[pool.labels[i]];
    }
  }
  return pool_subset(pool, keep);
}

std::vector<SweepRow> sweep(const EmbeddingPool& pool, const std::vector<SelectionConfig>& grid) {
  std::vector<std::vector<SweepRow>> per_entry(grid.size());
  std::optional<ScoreTable> full_table;
  if (!grid.empty()) full_table = score_pool(pool);

  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t g = 0; g < n; ++g) {
    const auto& config = grid[g];
    auto& rows = per_entry[g];
    try {
      validate(config);
      Selection sel;
      SelectionReport rep;
      if (config.pool_multiplier > 0) {
        const auto sub = truncate_classes(pool, config.pool_multiplier * config.ipc);
        const auto table = score_pool(sub);
        sel = run_selector(sub, table, config);
        rep = selection_report(sub, table, sel);
      } else {
        sel = run_selector(pool, *full_table, config);
        rep = selection_report(pool, *full_table, sel);
      }
      for (const auto& r : rep.classes) {
        rows.push_back({static_cast<std::size_t>(g), config, r, "", std::nullopt});
      }
      rows.push_back({static_cast<std::size_t>(g), config, rep.overall, "", std::nullopt});
    } catch (const std::exception& e) {
      rows.clear();
      rows.push_back({static_cast<std::size_t>(g), config, std::nullopt, e.what(), std::nullopt});
    }
  }
  std::vector<SweepRow> out;
  for (auto& rows : per_entry) {
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "grid_index,selector,ipc,ratio,lambda,seed,no_rel,no_sep,no_div,pool_multiplier,"
         "class,status,n_selected,class_size,mean_margin,min_margin,max_margin,"
         "intra_diversity,n_candidates,candidate_retention,external_accuracy\n";
  for (const auto& row : rows) {
    const auto& c = row.config;
    out << row.grid_index << ',' << selector_name(c.selector) << ',' << c.ipc << ','
        << format_sig9(c.candidate_ratio) << ',' << format_sig9(c.lambda) << ',' << c.seed
        << ',' << !c.ablation.use_rel << ',' << !c.ablation.use_sep << ','
        << !c.ablation.use_div << ',' << c.pool_multiplier << ',';
    if (!row.metrics) {
      out << ',' << csv_field("failed: " + row.error) << ",,,,,,,,,\n";
      continue;
    }
    const auto& m = *row.metrics;
    out << csv_field(m.class_name) << ",ok," << m.n_selected << ',' << m.class_size << ','
        << text_or_undefined(m.mean_margin) << ',' << text_or_undefined(m.min_margin) << ','
        << text_or_undefined(m.max_margin) << ',' << text_or_undefined(m.intra_diversity)
        << ',' << m.n_candidates << ',' << text_or_undefined(m.candidate_retention) << ','
        << (row.external_accuracy ? format_sig9(*row.external_accuracy) : "") << '\n';
  }
  return out.str();
}

}  // namespace sas
