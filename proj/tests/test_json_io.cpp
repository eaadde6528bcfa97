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

#include <doctest.h>

#include <cmath>

#include "sas/errors.hpp"
#include "sas/json_io.hpp"
#include "sas/sampler.hpp"
#include "sas/synth.hpp"

namespace {

sas::EmbeddingPool small_pool() {
  sas::SyntheticSpec spec;
  spec.dim = 8;
  spec.n_classes = 3;
  spec.per_class = 12;
  spec.duplicate_fraction = 0.25;
  spec.seed = 4;
  return sas::generate_pool(spec).pool;
}

}  // namespace

TEST_CASE("nine significant digits") {
  CHECK(sas::format_sig9(3.14159265358979) == "3.14159265");
  CHECK(sas::format_sig9(-0.00141421368022) == "-0.00141421368");
  CHECK(sas::format_sig9(2.0) == "2");
  CHECK(sas::format_sig9(std::nan("")) == "nan");
  CHECK(sas::round_sig9(1.23456789012) == 1.23456789);
  CHECK(std::isnan(sas::round_sig9(std::nan(""))));
}

TEST_CASE("config JSON round trip") {
  sas::SelectionConfig c;
  c.ipc = 7;
  c.candidate_ratio = 0.3;
  c.selector = sas::SelectorKind::kMixed;
  c.lambda = 0.05;
  c.seed = 123456789012345ull;
  c.ablation = {true, false, true};
  const auto j = sas::config_to_json(c);
  CHECK(j.dump() ==
        R"({"ipc":7,"ratio":0.3,"selector":"mixed","lambda":0.05,"seed":123456789012345,)"
        R"("no_rel":false,"no_sep":true,"no_div":false})");
  CHECK(sas::config_from_json(nlohmann::json::parse(j.dump())) == c);

  c.pool_multiplier = 4;
  CHECK(sas::config_to_json(c).contains("pool_multiplier"));
  CHECK(sas::config_from_json(nlohmann::json::parse(sas::config_to_json(c).dump())) == c);
}

TEST_CASE("config JSON defaults and errors") {
  const auto c = sas::config_from_json(nlohmann::json::parse(R"({"selector": "margin"})"));
  CHECK(c.ipc == 10);
  CHECK(c.candidate_ratio == 0.5);
  CHECK(c.selector == sas::SelectorKind::kMarginOnly);
  CHECK_THROWS_AS(sas::config_from_json(nlohmann::json::parse(R"({"ipcs": 3})")),
                  sas::ArgumentError);
  CHECK_THROWS_AS(sas::config_from_json(nlohmann::json::parse(R"({"ipc": 0})")),
                  sas::ArgumentError);
  CHECK_THROWS_AS(sas::config_from_json(nlohmann::json::parse(R"({"ipc": "ten"})")),
                  sas::ArgumentError);
  CHECK_THROWS_AS(sas::config_from_json(nlohmann::json::parse(R"([1, 2])")), sas::ArgumentError);
}

TEST_CASE("selection JSON layout") {
  const auto p = small_pool();
  const auto t = sas::score_pool(p);
  sas::SelectionConfig c;
  c.ipc = 3;
  const auto sel = sas::select_sas(p, t, c);
  const auto j = sas::selection_to_json(sel);

  std::vector<std::string> top;
  for (const auto& [k, _] : j.items()) top.push_back(k);
  CHECK(top == std::vector<std::string>{"config", "classes"});
  REQUIRE(j["classes"].size() == 3);
  const auto& c0 = j["classes"][0];
  CHECK(c0["class_name"] == "class_000");
  REQUIRE(c0["selected"].size() == 3);
  const auto& first = c0["selected"][0];
  CHECK(first["image_id"] == sel.classes[0].selected[0].image_id);
  CHECK(first["margin"].get<double>() == sas::round_sig9(sel.classes[0].selected[0].margin));
  CHECK(c0["removals"].size() == sel.classes[0].removals.size());
  if (!sel.classes[0].removals.empty()) {
    CHECK(c0["removals"][0]["step"] == sel.classes[0].removals[0].step);
  }
  CHECK(sas::selection_json_text(sel).back() == '\n');
}

TEST_CASE("selection JSON round trip") {
  const auto p = small_pool();
  const auto t = sas::score_pool(p);
  sas::SelectionConfig c;
  c.ipc = 1;  // singleton selections: diversity is NaN -> null
  const auto sel = sas::select_sas(p, t, c);
  const auto text = sas::selection_json_text(sel);
  CHECK(text.find("\"dynamic_diversity\": null") != std::string::npos);

  const auto back = sas::selection_from_json(nlohmann::json::parse(text), p);
  CHECK(back.config == sel.config);
  REQUIRE(back.classes.size() == sel.classes.size());
  for (std::size_t k = 0; k < sel.classes.size(); ++k) {
    CHECK(back.classes[k].class_index == k);
    REQUIRE(back.classes[k].selected.size() == sel.classes[k].selected.size());
    for (std::size_t i = 0; i < sel.classes[k].selected.size(); ++i) {
      CHECK(back.classes[k].selected[i].index == sel.classes[k].selected[i].index);
      CHECK(std::isnan(back.classes[k].selected[i].dynamic_diversity));
    }
    CHECK(back.classes[k].removals.size() == sel.classes[k].removals.size());
  }
  CHECK(sas::selection_json_text(back) == text);
}

TEST_CASE("selection JSON with an unknown image id") {
  const auto p = small_pool();
  const auto t = sas::score_pool(p);
  sas::SelectionConfig c;
  c.ipc = 2;
  auto j = nlohmann::json::parse(sas::selection_json_text(sas::select_sas(p, t, c)));
  j["classes"][1]["selected"][0]["image_id"] = "nope";
  CHECK_THROWS_WITH_AS(sas::selection_from_json(j, p), doctest::Contains("unknown image_id"),
                       sas::ArgumentError);
  j = nlohmann::json::parse(R"({"config": {}, "classes": [{"class_name": "class_000"}]})");
  CHECK_THROWS_AS(sas::selection_from_json(j, p), sas::ArgumentError);
}
