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

// sas: command-line front end for the semantic-aware sampling engine.
//
//   sas validate <pool.sase>
//   sas score  --pool <file> --out <scores.csv> [--lambda <f>]
//   sas sample --pool <file> --ipc <n> --ratio <p> --selector sas|margin|mixed|random|kcenter
//              [--lambda <f>] [--seed <u64>] [--no-rel] [--no-sep] [--no-div]
//              --out <selection.json>
//   sas report --pool <file> --selection <file> --out <report.json|csv>
//   sas sweep  --pool <file> --grid <grid.json> --out <csv>
//   sas synth  --dim <d> --classes <k> --per-class <n> --kappa <f> --dup <f>
//              --seed <u64> --out <pool.sase>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sas/errors.hpp"
#include "sas/json_io.hpp"
#include "sas/pool.hpp"
#include "sas/report.hpp"
#include "sas/sampler.hpp"
#include "sas/scoring.hpp"
#include "sas/synth.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw sas::IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw sas::IoError("failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sas::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw sas::ArgumentError(path + ": " + e.what());
  }
}

int run_validate(const std::string& path) {
  const auto pool = sas::read_pool(std::filesystem::path(path));
  const auto classes = pool.members_by_class();
  std::cout << "dim: " << pool.dim << "\n"
            << "classes: " << pool.n_classes() << "\n"
            << "images: " << pool.n_images() << "\n";
  std::size_t widest = 0;
  for (const auto& c : classes) widest = std::max(widest, c.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const std::size_t bar = widest ? (classes[c].size() * 40 + widest - 1) / widest : 0;
    std::cout << "  " << pool.class_names[c] << "\t" << classes[c].size() << "\t"
              << std::string(bar, '#') << "\n";
  }
  return 0;
}

int run_score(const std::string& pool_path, const std::string& out_path,
              std::optional<double> lambda) {
  const auto pool = sas::read_pool(std::filesystem::path(pool_path));
  auto table = sas::score_pool(pool);
  if (lambda) table.mixed = sas::mixed_score(table, pool, *lambda);
  for (std::size_t c : table.singleton_classes) {
    std::cerr << "warning: class " << pool.class_names[c]
              << " has a single image; diversity_static undefined\n";
  }
  std::ostringstream csv;
  csv << "image_id,class,relevance,separation,diversity_static,margin";
  if (table.mixed) csv << ",mixed";
  csv << "\n";
  for (std::size_t i = 0; i < pool.n_images(); ++i) {
    csv << pool.image_ids[i] << ',' << pool.class_names[pool.labels[i]] << ','
        << sas::format_sig9(table.relevance[i]) << ',' << sas::format_sig9(table.separation[i])
        << ',' << sas::format_sig9(table.diversity_static[i]) << ','
        << sas::format_sig9(table.margin[i]);
    if (table.mixed) csv << ',' << sas::format_sig9((*table.mixed)[i]);
    csv << "\n";
  }
  write_text(out_path, csv.str());
  return 0;
}

int run_sample(const std::string& pool_path, const std::string& out_path,
               const sas::SelectionConfig& config) {
  const auto pool = sas::read_pool(std::filesystem::path(pool_path));
  const auto table = sas::score_pool(pool);
  const auto selection = sas::run_selector(pool, table, config);
  for (const auto& w : selection.warnings) std::cerr << "warning: " << w << "\n";
  write_text(out_path, sas::selection_json_text(selection));
  return 0;
}

int run_report(const std::string& pool_path, const std::string& selection_path,
               const std::string& out_path) {
  const auto pool = sas::read_pool(std::filesystem::path(pool_path));
  const auto table = sas::score_pool(pool);
  const auto selection = sas::selection_from_json(parse_json_file(selection_path), pool);
  sas::ReportOptions options;
  options.cached_values_rounded = true;
  const auto report = sas::selection_report(pool, table, selection, options);
  std::cout << sas::report_to_table(report);
  if (std::filesystem::path(out_path).extension() == ".csv") {
    write_text(out_path, sas::report_to_csv(report));
  } else {
    write_text(out_path, sas::report_to_json(report).dump(2) + "\n");
  }
  return report.cache_consistent ? 0 : 1;
}

int run_sweep(const std::string& pool_path, const std::string& grid_path,
              const std::string& out_path) {
  const auto pool = sas::read_pool(std::filesystem::path(pool_path));
  const auto grid_json = parse_json_file(grid_path);
  if (!grid_json.is_array()) throw sas::ArgumentError("grid must be a JSON list of configs");
  std::vector<sas::SelectionConfig> grid;
  for (const auto& entry : grid_json) grid.push_back(sas::config_from_json(entry));
  const auto rows = sas::sweep(pool, grid);
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.metrics) {
      ++failed;
      std::cerr << "warning: grid entry " << r.grid_index << " failed: " << r.error << "\n";
    }
  }
  write_text(out_path, sas::sweep_to_csv(rows));
  std::cout << grid.size() << " configs, " << rows.size() << " rows, " << failed << " failed\n";
  return 0;
}

int run_synth(const sas::SyntheticSpec& spec, const std::string& out_path) {
  const auto result = sas::generate_pool(spec);
  if (!result.orthonormal_prototypes) {
    std::cerr << "note: dim < classes; prototypes are random unit vectors, not orthonormal\n";
  }
  sas::write_pool(result.pool, std::filesystem::path(out_path));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-aware subset selection over embedding pools"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a pool file and summarize it");
  validate_cmd->add_option("pool", validate_path, "SASE pool file")->required();

  std::string pool_path, out_path;
  std::optional<double> score_lambda;
  auto* score_cmd = app.add_subcommand("score", "Write per-image semantic scores as CSV");
  score_cmd->add_option("--pool", pool_path)->required();
  score_cmd->add_option("--out", out_path)->required();
  score_cmd->add_option("--lambda", score_lambda, "Also emit the mixed score for this weight");

  sas::SelectionConfig config;
  std::string selector = "sas";
  bool no_rel = false, no_sep = false, no_div = false;
  auto* sample_cmd = app.add_subcommand("sample", "Select a per-class subset");
  sample_cmd->add_option("--pool", pool_path)->required();
  sample_cmd->add_option("--ipc", config.ipc, "Images per class")->required();
  sample_cmd->add_option("--ratio", config.candidate_ratio, "Stage-1 candidate ratio")
      ->default_val(0.5);
  sample_cmd->add_option("--selector", selector)
      ->check(CLI::IsMember({"sas", "margin", "mixed", "random", "kcenter"}))
      ->default_val("sas");
  sample_cmd->add_option("--lambda", config.lambda)->default_val(0.0);
  sample_cmd->add_option("--seed", config.seed)->default_val(0);
  sample_cmd->add_flag("--no-rel", no_rel);
  sample_cmd->add_flag("--no-sep", no_sep);
  sample_cmd->add_flag("--no-div", no_div);
  sample_cmd->add_option("--out", out_path)->required();

  std::string selection_path;
  auto* report_cmd = app.add_subcommand("report", "Semantic metrics for a selection");
  report_cmd->add_option("--pool", pool_path)->required();
  report_cmd->add_option("--selection", selection_path)->required();
  report_cmd->add_option("--out", out_path)->required();

  std::string grid_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of selection configs");
  sweep_cmd->add_option("--pool", pool_path)->required();
  sweep_cmd->add_option("--grid", grid_path)->required();
  sweep_cmd->add_option("--out", out_path)->required();

  sas::SyntheticSpec spec;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic pool");
  synth_cmd->add_option("--dim", spec.dim)->required();
  synth_cmd->add_option("--classes", spec.n_classes)->required();
  synth_cmd->add_option("--per-class", spec.per_class)->required();
  synth_cmd->add_option("--kappa", spec.concentration)->default_val(8.0);
  synth_cmd->add_option("--dup", spec.duplicate_fraction)->default_val(0.0);
  synth_cmd->add_option("--seed", spec.seed)->default_val(0);
  synth_cmd->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return run_validate(validate_path);
    if (*score_cmd) return run_score(pool_path, out_path, score_lambda);
    if (*sample_cmd) {
      config.selector = sas::parse_selector(selector);
      config.ablation = {!no_rel, !no_sep, !no_div};
      sas::validate(config);
      return run_sample(pool_path, out_path, config);
    }
    if (*report_cmd) return run_report(pool_path, selection_path, out_path);
    if (*sweep_cmd) return run_sweep(pool_path, grid_path, out_path);
    if (*synth_cmd) return run_synth(spec, out_path);
  } catch (const sas::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 1;
  } catch (const sas::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
