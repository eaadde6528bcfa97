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

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
// Tolerances and runtime budgets are pinned below.

#include <omp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "sas/angular.hpp"
#include "sas/baselines.hpp"
#include "sas/errors.hpp"
#include "sas/json_io.hpp"
#include "sas/pool.hpp"
#include "sas/report.hpp"
#include "sas/rng.hpp"
#include "sas/sampler.hpp"
#include "sas/scoring.hpp"
#include "sas/synth.hpp"

namespace {

constexpr double kAngleTol = 1e-12;
constexpr double kScoreTol = 1e-12;
constexpr double kSelfAngle = 0.001414213680224251763;     // arccos(1 - 1e-6)
constexpr double kOppositeAngle = 3.140178439909568987;    // arccos(-1 + 1e-6)

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(const char* name, double budget_s, const std::function<Outcome()>& fn) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s  %-22s %s (%.2fs, budget %.0fs%s)\n", pass ? "PASS" : "FAIL", name,
              out.detail.c_str(), secs, budget_s, in_time ? "" : ", OVER BUDGET");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> random_unit(sas::SplitMix64& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double sq = 0.0;
  for (auto& x : v) {
    x = rng.gaussian();
    sq += x * x;
  }
  for (auto& x : v) x /= std::sqrt(sq);
  return v;
}

sas::EmbeddingPool random_pool(sas::SplitMix64& rng, std::uint32_t max_classes,
                               std::uint32_t max_images, std::uint32_t max_dim,
                               std::uint32_t min_per_class = 1) {
  sas::SyntheticSpec spec;
  spec.n_classes = 2 + static_cast<std::uint32_t>(rng.below(max_classes - 1));
  const std::uint32_t cap = std::max(min_per_class, max_images / spec.n_classes);
  spec.per_class = min_per_class + static_cast<std::uint32_t>(rng.below(cap - min_per_class + 1));
  spec.dim = 2 + static_cast<std::uint32_t>(rng.below(max_dim - 1));
  spec.concentration = 6.0 * rng.uniform();
  spec.duplicate_fraction = 0.4 * rng.uniform();
  spec.seed = rng.next();
  return sas::generate_pool(spec).pool;
}

sas::SelectionConfig make_config(sas::SelectorKind kind, std::size_t ipc, double ratio = 0.5) {
  sas::SelectionConfig c;
  c.selector = kind;
  c.ipc = ipc;
  c.candidate_ratio = ratio;
  return c;
}

std::vector<std::size_t> indices(const sas::ClassSelection& cs) {
  std::vector<std::size_t> out;
  for (const auto& s : cs.selected) out.push_back(s.index);
  return out;
}

Outcome angular_oracle() {
  sas::SplitMix64 rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t dim = 2 + rng.below(511);
    const auto a = random_unit(rng, dim);
    std::vector<double> b;
    switch (t % 10) {
      case 0:
        b = a;
        break;
      case 1:
        b = a;
        for (auto& x : b) x = -x;
        break;
      default:
        b = random_unit(rng, dim);
    }
    const double got = sas::angular_distance(a, b);
    worst = std::max(worst, std::abs(got - static_cast<double>(oracle::angle_ld(a, b))));
  }
  const auto e = random_unit(rng, 300);
  auto neg = e;
  for (auto& x : neg) x = -x;
  const double self = sas::angular_distance(e, e);
  const double opp = sas::angular_distance(e, neg);
  const bool ends = std::abs(self - kSelfAngle) <= kAngleTol &&
                    std::abs(opp - kOppositeAngle) <= kAngleTol &&
                    std::abs(self - 1.4142136e-3) < 1e-10 && std::abs(opp - 3.1401784) < 5e-8;
  Outcome o{worst <= kAngleTol && ends, fmt("max err %.3g", worst)};
  o.detail += fmt(", d(v,v)=%.10g", self) + fmt(", d(v,-v)=%.10g", opp);
  return o;
}

Outcome score_oracle() {
  sas::SplitMix64 rng(7);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto p = random_pool(rng, 5, 50, 64, 2);
    const auto table = sas::score_pool(p);
    const auto naive = oracle::naive_scores(p);
    for (std::size_t i = 0; i < p.n_images(); ++i) {
      worst = std::max({worst, std::abs(table.relevance[i] - naive.rel[i]),
                        std::abs(table.separation[i] - naive.sep[i]),
                        std::abs(table.diversity_static[i] - naive.div[i]),
                        std::abs(table.margin[i] - naive.margin[i])});
    }
    for (double lambda : {0.0, 0.05, 0.1, 0.2}) {
      const auto got = sas::mixed_score(table, p, lambda);
      const auto want = oracle::naive_mixed(p, naive, lambda);
      for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    }
  }
  return {worst <= kScoreTol, fmt("200 pools, max err %.3g", worst)};
}

std::string log_text(const std::vector<std::size_t>& selected,
                     const std::vector<std::tuple<std::size_t, std::size_t, double>>& removals) {
  std::string s;
  char buf[96];
  for (auto i : selected) s += std::to_string(i) + ",";
  s += "|";
  for (const auto& [step, idx, div] : removals) {
    std::snprintf(buf, sizeof buf, "%zu:%zu:%.17g;", step, idx, div);
    s += buf;
  }
  return s;
}

Outcome sampler_oracle() {
  sas::SplitMix64 rng(99);
  const std::array<double, 3> ratios{0.3, 0.5, 0.8};
  int mismatched = 0;
  std::size_t removals_checked = 0;
  double worst_div = 0.0;
  for (int t = 0; t < 500; ++t) {
    sas::SyntheticSpec spec;
    spec.n_classes = 2 + static_cast<std::uint32_t>(rng.below(3));
    spec.per_class = 1 + static_cast<std::uint32_t>(rng.below(20));
    spec.dim = 2 + static_cast<std::uint32_t>(rng.below(31));
    spec.concentration = 5.0 * rng.uniform();
    spec.duplicate_fraction = 0.5 * rng.uniform();
    spec.seed = rng.next();
    const auto p = sas::generate_pool(spec).pool;
    const auto table = sas::score_pool(p);
    const auto cfg = make_config(sas::SelectorKind::kSas, 1 + rng.below(5), ratios[rng.below(3)]);
    const auto sel = sas::select_sas(p, table, cfg);
    for (std::size_t c = 0; c < p.n_classes(); ++c) {
      // Stage-1 candidates from the independent sort oracle.
      auto cand = oracle::sorted_desc(table.margin, p.class_members(c));
      cand.resize(oracle::candidate_count(cand.size(), cfg.ipc, cfg.candidate_ratio));
      const auto replay = oracle::replay_two_stage(p, table.margin, cand, cfg.ipc);

      std::vector<std::tuple<std::size_t, std::size_t, double>> want_log, got_log;
      for (const auto& r : replay.removals) want_log.emplace_back(r.step, r.index, r.diversity);
      for (const auto& r : sel.classes[c].removals) got_log.emplace_back(r.step, r.index, r.diversity);
      if (log_text(indices(sel.classes[c]), got_log) != log_text(replay.selected, want_log)) {
        ++mismatched;
      }
      for (std::size_t k = 0; k < std::min(want_log.size(), got_log.size()); ++k) {
        worst_div = std::max(worst_div, std::abs(std::get<2>(want_log[k]) - std::get<2>(got_log[k])));
      }
      removals_checked += got_log.size();
    }
  }
  Outcome o{mismatched == 0 && worst_div <= 1e-12,
            std::to_string(mismatched) + " mismatched classes, " +
                std::to_string(removals_checked) + " removals compared"};
  o.detail += fmt(", max div diff %.3g", worst_div);
  return o;
}

Outcome candidate_size() {
  std::string detail;
  bool ok = true;
  for (std::size_t ipc : {10, 20, 50}) {
    sas::SyntheticSpec spec;
    spec.dim = 32;
    spec.n_classes = 5;
    spec.per_class = static_cast<std::uint32_t>(4 * ipc);
    spec.seed = ipc;
    const auto p = sas::generate_pool(spec).pool;
    const auto table = sas::score_pool(p);
    const auto cands = sas::filter_candidates(p, table, make_config(sas::SelectorKind::kSas, ipc));
    for (const auto& c : cands) ok = ok && c.size() == 2 * ipc;
    detail += "IPC " + std::to_string(ipc) + " -> " + std::to_string(cands[0].size()) + "; ";
  }
  return {ok, detail};
}

Outcome ablation_coherence() {
  sas::SplitMix64 rng(31);
  int div_mismatch = 0, sep_mismatch = 0, tie_free = 0;
  for (int t = 0; t < 100; ++t) {
    const auto p = random_pool(rng, 5, 80, 24);
    const auto table = sas::score_pool(p);
    auto cfg = make_config(sas::SelectorKind::kSas, 1 + rng.below(6), 0.2 + 0.6 * rng.uniform());

    // no s_div: top-ipc by margin over the stage-1 candidates
    auto no_div = cfg;
    no_div.ablation.use_div = false;
    const auto sel = sas::select_sas(p, table, no_div);
    for (std::size_t c = 0; c < p.n_classes(); ++c) {
      auto cand = oracle::sorted_desc(table.margin, p.class_members(c));
      cand.resize(oracle::candidate_count(cand.size(), cfg.ipc, cfg.candidate_ratio));
      auto top = oracle::sorted_desc(table.margin, cand);
      top.resize(std::min(top.size(), cfg.ipc));
      const auto got = indices(sel.classes[c]);
      if (std::set<std::size_t>(got.begin(), got.end()) != std::set<std::size_t>(top.begin(), top.end())) {
        ++div_mismatch;
      }
    }

    // no s_sep: stage-1 order is relevance order
    std::set<double> distinct(table.relevance.begin(), table.relevance.end());
    if (distinct.size() != table.relevance.size()) continue;
    ++tie_free;
    auto no_sep = cfg;
    no_sep.ablation.use_sep = false;
    const auto cands = sas::filter_candidates(p, table, no_sep);
    for (std::size_t c = 0; c < p.n_classes(); ++c) {
      auto want = oracle::sorted_desc(table.relevance, p.class_members(c));
      want.resize(cands[c].size());
      if (cands[c] != want) ++sep_mismatch;
    }
  }
  return {div_mismatch == 0 && sep_mismatch == 0 && tie_free > 50,
          "no-div mismatches " + std::to_string(div_mismatch) + ", no-sep mismatches " +
              std::to_string(sep_mismatch) + " over " + std::to_string(tie_free) +
              " tie-free pools"};
}

Outcome diversity_benefit() {
  int div_wins = 0, margin_wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    sas::SyntheticSpec spec;
    spec.dim = 32;
    spec.n_classes = 5;
    spec.per_class = 40;
    spec.concentration = 8.0;
    spec.duplicate_fraction = 0.3;
    spec.seed = seed;
    const auto p = sas::generate_pool(spec).pool;
    const auto table = sas::score_pool(p);
    auto sas_cfg = make_config(sas::SelectorKind::kSas, 10);
    auto margin_cfg = make_config(sas::SelectorKind::kMarginOnly, 10);
    auto random_cfg = make_config(sas::SelectorKind::kRandom, 10);
    random_cfg.seed = seed;
    const auto a = sas::selection_report(p, table, sas::run_selector(p, table, sas_cfg));
    const auto b = sas::selection_report(p, table, sas::run_selector(p, table, margin_cfg));
    const auto r = sas::selection_report(p, table, sas::run_selector(p, table, random_cfg));
    if (a.overall.intra_diversity > b.overall.intra_diversity) ++div_wins;
    if (a.overall.mean_margin > r.overall.mean_margin) ++margin_wins;
  }
  return {div_wins >= 95 && margin_wins >= 95,
          "diversity > margin-only in " + std::to_string(div_wins) + "/100, margin > random in " +
              std::to_string(margin_wins) + "/100"};
}

Outcome kcenter_property() {
  sas::SplitMix64 rng(5150);
  int violations = 0;
  std::size_t steps = 0;
  for (int t = 0; t < 200; ++t) {
    const auto p = random_pool(rng, 4, 60, 16);
    const auto table = sas::score_pool(p);
    const auto sel = sas::select_kcenter(p, table, make_config(sas::SelectorKind::kKCenter, 1 + rng.below(8)));
    const auto naive = oracle::naive_scores(p);
    for (std::size_t c = 0; c < p.n_classes(); ++c) {
      const auto chosen = indices(sel.classes[c]);
      const auto members = p.class_members(c);
      for (auto i : members) {
        if (naive.rel[i] > naive.rel[chosen[0]]) ++violations;
      }
      for (std::size_t k = 1; k < chosen.size(); ++k) {
        const std::vector<std::size_t> before(chosen.begin(), chosen.begin() + k);
        const double got = oracle::min_angle_to(p, chosen[k], before);
        for (auto i : members) {
          if (std::find(chosen.begin(), chosen.begin() + k + 1, i) != chosen.begin() + k + 1) continue;
          if (oracle::min_angle_to(p, i, before) > got) ++violations;
        }
        ++steps;
      }
    }
  }
  return {violations == 0,
          std::to_string(violations) + " violations over " + std::to_string(steps) + " greedy steps"};
}

Outcome format_round_trip() {
  sas::SplitMix64 rng(8080);
  int bad_round_trips = 0;
  for (int t = 0; t < 100; ++t) {
    const auto p = random_pool(rng, 6, 60, 40);
    const auto first = sas::encode_pool(p);
    const auto again = sas::encode_pool(sas::decode_pool(first));
    if (again != first) ++bad_round_trips;
  }

  // Corruptions of one reference pool, each with its expected error.
  sas::SyntheticSpec spec;
  spec.dim = 6;
  spec.n_classes = 3;
  spec.per_class = 5;
  const auto ref = sas::generate_pool(spec).pool;
  const auto good = sas::encode_pool(ref);
  const std::size_t feature_base = good.size() - ref.features.size() * 4;

  struct Case {
    std::vector<std::uint8_t> bytes;
    bool expect_format;  // FormatError, else ValidationError
    std::string needle;
  };
  std::vector<Case> cases;
  for (int k = 0; k < 7; ++k) {
    auto b = good;
    b[k % 4] ^= static_cast<std::uint8_t>(1 + k);
    cases.push_back({b, true, "bad magic"});
  }
  for (std::size_t cut : {std::size_t{1}, std::size_t{3}, std::size_t{12}, std::size_t{30},
                          good.size() / 2, good.size() - 4, good.size() - 1}) {
    cases.push_back({std::vector<std::uint8_t>(good.begin(), good.begin() + cut), true, "truncated"});
  }
  for (std::size_t row : {0, 1, 4, 7, 11, 14}) {
    auto b = good;
    const float scaled = ref.features[row * ref.dim] * 1.5f + 0.5f;
    std::memcpy(&b[feature_base + row * ref.dim * 4], &scaled, 4);
    cases.push_back({b, false, "feature row " + std::to_string(row) + " not unit norm"});
  }
  int wrong_errors = 0;
  for (const auto& c : cases) {
    try {
      sas::decode_pool(c.bytes);
      ++wrong_errors;
    } catch (const sas::FormatError& e) {
      if (!c.expect_format || std::string(e.what()).find(c.needle) == std::string::npos) ++wrong_errors;
    } catch (const sas::ValidationError& e) {
      if (c.expect_format || std::string(e.what()).find(c.needle) == std::string::npos) ++wrong_errors;
    }
  }
  return {bad_round_trips == 0 && wrong_errors == 0 && cases.size() == 20,
          std::to_string(bad_round_trips) + "/100 round-trip diffs, " +
              std::to_string(wrong_errors) + "/" + std::to_string(cases.size()) +
              " corrupted cases with wrong error"};
}

Outcome determinism() {
  sas::SyntheticSpec spec;
  spec.dim = 32;
  spec.n_classes = 6;
  spec.per_class = 30;
  spec.duplicate_fraction = 0.3;
  spec.seed = 77;
  const auto p = sas::generate_pool(spec).pool;
  const int saved = omp_get_max_threads();
  int differing = 0;
  using K = sas::SelectorKind;
  for (K kind : {K::kSas, K::kMarginOnly, K::kRandom, K::kKCenter, K::kMixed}) {
    auto cfg = make_config(kind, 7);
    cfg.lambda = 0.1;
    cfg.seed = 12345;
    omp_set_num_threads(1);
    const auto a = sas::selection_json_text(sas::run_selector(p, sas::score_pool(p), cfg));
    omp_set_num_threads(4);
    const auto b = sas::selection_json_text(sas::run_selector(p, sas::score_pool(p), cfg));
    const auto c = sas::selection_json_text(sas::run_selector(p, sas::score_pool(p), cfg));
    if (a != b || b != c) ++differing;
  }
  omp_set_num_threads(saved);
  return {differing == 0, std::to_string(differing) + "/5 selectors differ across runs"};
}

}  // namespace

int main() {
  run("angular-oracle", 5, angular_oracle);
  run("score-oracle", 30, score_oracle);
  run("sampler-oracle", 60, sampler_oracle);
  run("candidate-size", 60, candidate_size);
  run("ablation-coherence", 60, ablation_coherence);
  run("diversity-benefit", 120, diversity_benefit);
  run("kcenter-maxmin", 60, kcenter_property);
  run("format-round-trip", 60, format_round_trip);
  run("determinism", 60, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
