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

#include "sas/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>
#include <unordered_map>

#include "sas/errors.hpp"

namespace sas {

using nlohmann::json;
using nlohmann::ordered_json;

double round_sig9(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::string format_sig9(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig9(v);
}

double number_or_nan(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

}  // namespace

ordered_json config_to_json(const SelectionConfig& c) {
  ordered_json j = {
      {"ipc", c.ipc},
      {"ratio", round_sig9(c.candidate_ratio)},
      {"selector", std::string(selector_name(c.selector))},
      {"lambda", round_sig9(c.lambda)},
      {"seed", c.seed},
      {"no_rel", !c.ablation.use_rel},
      {"no_sep", !c.ablation.use_sep},
      {"no_div", !c.ablation.use_div},
  };
  if (c.pool_multiplier > 0) j["pool_multiplier"] = c.pool_multiplier;
  return j;
}

SelectionConfig config_from_json(const json& j) {
  static const std::set<std::string> kKeys = {"ipc",    "ratio",  "selector", "lambda",
                                              "seed",   "no_rel", "no_sep",   "no_div",
                                              "pool_multiplier", "warnings"};
  if (!j.is_object()) throw ArgumentError("selection config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) throw ArgumentError("unknown config field \"" + key + "\"");
  }
  SelectionConfig c;
  try {
    if (j.contains("ipc")) {
      const auto ipc = j.at("ipc").get<std::int64_t>();
      if (ipc < 1) throw ArgumentError("ipc must be >= 1");
      c.ipc = static_cast<std::size_t>(ipc);
    }
    if (j.contains("ratio")) c.candidate_ratio = j.at("ratio").get<double>();
    if (j.contains("selector")) c.selector = parse_selector(j.at("selector").get<std::string>());
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("no_rel")) c.ablation.use_rel = !j.at("no_rel").get<bool>();
    if (j.contains("no_sep")) c.ablation.use_sep = !j.at("no_sep").get<bool>();
    if (j.contains("no_div")) c.ablation.use_div = !j.at("no_div").get<bool>();
    if (j.contains("pool_multiplier")) {
      c.pool_multiplier = j.at("pool_multiplier").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad config field: ") + e.what());
  }
  return c;
}

ordered_json selection_to_json(const Selection& s) {
  ordered_json config = config_to_json(s.config);
  config["warnings"] = s.warnings;
  ordered_json classes = ordered_json::array();
  for (const auto& cs : s.classes) {
    ordered_json selected = ordered_json::array();
    for (const auto& img : cs.selected) {
      selected.push_back({{"image_id", img.image_id},
                          {"margin", number_or_null(img.margin)},
                          {"dynamic_diversity", number_or_null(img.dynamic_diversity)}});
    }
    ordered_json removals = ordered_json::array();
    for (const auto& r : cs.removals) {
      removals.push_back({{"step", r.step},
                          {"image_id", r.image_id},
                          {"diversity", number_or_null(r.diversity)}});
    }
    classes.push_back(
        {{"class_name", cs.class_name}, {"selected", selected}, {"removals", removals}});
  }
  return {{"config", config}, {"classes", classes}};
}

std::string selection_json_text(const Selection& selection) {
  return selection_to_json(selection).dump(2) + "\n";
}

Selection selection_from_json(const json& j, const EmbeddingPool& pool) {
  std::unordered_map<std::string, std::size_t> by_id;
  by_id.reserve(pool.n_images());
  for (std::size_t i = 0; i < pool.n_images(); ++i) by_id.emplace(pool.image_ids[i], i);
  std::unordered_map<std::string, std::size_t> class_by_name;
  for (std::size_t c = 0; c < pool.n_classes(); ++c) class_by_name.emplace(pool.class_names[c], c);

  auto resolve = [&](const std::string& id) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ArgumentError("unknown image_id \"" + id + "\"");
    return it->second;
  };

  Selection s;
  try {
    s.config = config_from_json(j.at("config"));
    if (j.at("config").contains("warnings")) {
      s.warnings = j.at("config").at("warnings").get<std::vector<std::string>>();
    }
    for (const auto& jc : j.at("classes")) {
      ClassSelection cs;
      cs.class_name = jc.at("class_name").get<std::string>();
      auto it = class_by_name.find(cs.class_name);
      if (it == class_by_name.end()) {
        throw ArgumentError("unknown class_name \"" + cs.class_name + "\"");
      }
      cs.class_index = it->second;
      for (const auto& ji : jc.at("selected")) {
        SelectedImage img;
        img.image_id = ji.at("image_id").get<std::string>();
        img.index = resolve(img.image_id);
        img.margin = number_or_nan(ji.at("margin"));
        img.dynamic_diversity = number_or_nan(ji.at("dynamic_diversity"));
        cs.selected.push_back(std::move(img));
      }
      for (const auto& jr : jc.at("removals")) {
        Removal r;
        r.step = jr.at("step").get<std::size_t>();
        r.image_id = jr.at("image_id").get<std::string>();
        r.index = resolve(r.image_id);
        r.diversity = number_or_nan(jr.at("diversity"));
        cs.removals.push_back(std::move(r));
      }
      s.classes.push_back(std::move(cs));
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed selection JSON: ") + e.what());
  }
  return s;
}

}  // namespace sas
