// Copyright 2026 The uavplan Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "uavplan/scenario.hpp"
#include "uavplan/units.hpp"

using namespace uavplan;

namespace {

nlohmann::json reference_doc() {
  return nlohmann::json::parse(R"({
    "users": [{"id": 1, "x": 800, "y": 800, "r_min": 3}],
    "nfzs": [{"x": 450, "y": 450, "radius": 150, "height": 200}],
    "uav": {"altitude": 100, "v_max": 50, "start": [0, 0], "finish": [0, 1000], "power_dbm": 10},
    "channel": {"beta0_db": -50, "noise_dbm": -100, "n_subcarriers": 16},
    "time": {"horizon_s": 50, "n_slots": 50}
  })");
}

std::string failing_field(const nlohmann::json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(dbm_to_watts(10.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(watts_to_dbm(0.01) == doctest::Approx(10.0).epsilon(1e-15));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-12.0, 12.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, exponent(rng));
    CHECK(std::abs(db_to_linear(linear_to_db(x)) - x) <= 1e-12 * x);
  }
}

TEST_CASE("reference SNR from the link budget") {
  const Scenario s = parse_scenario(reference_doc());
  CHECK(std::abs(s.channel().gamma0 - 1e8) <= 1e-9 * 1e8);
  CHECK(s.uav().power_w == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(std::abs(s.snr_numerator() - 1e6) <= 1e-9 * 1e6);
  CHECK(s.power_dbm() == doctest::Approx(10.0));
}

TEST_CASE("shipped single-user file") {
  const Scenario s = load_scenario(testing::scenario_path("single_user.json"));
  CHECK(s.grid().n_slots == 50);
  CHECK(s.grid().dt == 1.0);
  CHECK(s.grid().max_step == 50.0);
  CHECK(s.num_users() == 1);
  REQUIRE(s.nfzs().size() == 1);
  CHECK(s.nfzs()[0].radius == 150.0);
}

TEST_CASE("slot count defaults to one-second slots") {
  nlohmann::json doc = reference_doc();
  doc["time"].erase("n_slots");
  const Scenario s = parse_scenario(doc);
  CHECK(s.grid().n_slots == 50);
  CHECK(s.grid().dt == 1.0);
}

TEST_CASE("reachability") {
  nlohmann::json doc = reference_doc();
  doc["uav"]["finish"] = {0, 0};
  CHECK_NOTHROW(parse_scenario(doc));

  doc["uav"]["finish"] = {0, 3000};
  CHECK(failing_field(doc) == "uav.finish");

  doc["uav"]["finish"] = {0, 2500};  // exactly N * V
  CHECK_NOTHROW(parse_scenario(doc));
}

TEST_CASE("each invariant names its field") {
  struct Case {
    const char* name;
    void (*mutate)(nlohmann::json&);
    const char* field;
  };
  const Case cases[] = {
      {"r_min", [](nlohmann::json& d) { d["users"][0]["r_min"] = 0; }, "users[0].r_min"},
      {"duplicate id",
       [](nlohmann::json& d) { d["users"].push_back(d["users"][0]); }, "users[1].id"},
      {"altitude", [](nlohmann::json& d) { d["uav"]["altitude"] = -1; }, "uav.altitude"},
      {"v_max", [](nlohmann::json& d) { d["uav"]["v_max"] = 0; }, "uav.v_max"},
      {"radius", [](nlohmann::json& d) { d["nfzs"][0]["radius"] = 0; }, "nfzs[0].radius"},
      {"height", [](nlohmann::json& d) { d["nfzs"][0]["height"] = 100; }, "nfzs[0].height"},
      {"overlap",
       [](nlohmann::json& d) {
         d["nfzs"].push_back({{"x", 600}, {"y", 450}, {"radius", 100}, {"height", 200}});
       },
       "nfzs[1].radius"},
      {"start inside", [](nlohmann::json& d) { d["uav"]["start"] = {450, 400}; }, "uav.start"},
      {"finish inside", [](nlohmann::json& d) { d["uav"]["finish"] = {400, 450}; },
       "uav.finish"},
      {"subcarriers",
       [](nlohmann::json& d) {
         d["users"].push_back({{"id", 2}, {"x", 0}, {"y", 0}, {"r_min", 1}});
         d["channel"]["n_subcarriers"] = 1;
       },
       "channel.n_subcarriers"},
      {"horizon", [](nlohmann::json& d) { d["time"]["horizon_s"] = 0; }, "time.horizon_s"},
      {"slots", [](nlohmann::json& d) { d["time"]["n_slots"] = 0; }, "time.n_slots"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.name);
    nlohmann::json doc = reference_doc();
    c.mutate(doc);
    CHECK(failing_field(doc) == c.field);
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_scenario_text("{ not json"), ScenarioParseError);
  nlohmann::json doc = reference_doc();
  doc.erase("uav");
  CHECK_THROWS_AS(parse_scenario(doc), ScenarioParseError);
  doc = reference_doc();
  doc["uav"]["start"] = {1, 2, 3};
  CHECK_THROWS_AS(parse_scenario(doc), ScenarioParseError);
  doc = reference_doc();
  doc["users"][0]["x"] = "far";
  CHECK_THROWS_AS(parse_scenario(doc), ScenarioParseError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ScenarioParseError);
}

TEST_CASE("json round trip") {
  const Scenario a = load_scenario(testing::scenario_path("five_user.json"));
  const Scenario b = parse_scenario(scenario_to_json(a));
  CHECK(b.num_users() == a.num_users());
  CHECK(b.nfzs().size() == a.nfzs().size());
  CHECK(b.channel().gamma0 == a.channel().gamma0);
  CHECK(b.uav().power_w == doctest::Approx(a.uav().power_w).epsilon(1e-14));
  CHECK(b.grid().max_step == a.grid().max_step);
}

TEST_CASE("randomised files: valid ones load, broken ones are rejected") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::uniform_int_distribution<int> pick(0, 5);
  int rejected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Scenario base = testing::random_scenario(rng, 1 + trial % 4, 5 + trial % 40, trial % 3);
    nlohmann::json doc = scenario_to_json(base);
    const Scenario loaded = parse_scenario(doc);

    // Every loaded scenario satisfies the invariants.
    const double span = (loaded.uav().finish - loaded.uav().start).norm();
    CHECK(span <= loaded.grid().n_slots * loaded.grid().max_step);
    for (const NoFlyZone& z : loaded.nfzs()) {
      CHECK(z.height > loaded.uav().altitude);
      CHECK((loaded.uav().start - z.center).norm() >= z.radius);
      CHECK((loaded.uav().finish - z.center).norm() >= z.radius);
    }
    CHECK(loaded.channel().n_subcarriers >= loaded.num_users());

    switch (pick(rng)) {
      case 0:
        doc["users"][0]["r_min"] = -coord(rng);
        break;
      case 1:
        doc["uav"]["v_max"] = 0.0;
        break;
      case 2:
        doc["uav"]["finish"] = {1e6, 1e6};
        break;
      case 3:
        doc["channel"]["n_subcarriers"] = 0;
        break;
      case 4:
        doc["uav"]["altitude"] = 0.0;
        break;
      default:
        doc["time"]["n_slots"] = -3;
        break;
    }
    CHECK_THROWS_AS(parse_scenario(doc), ScenarioValidationError);
    ++rejected;
  }
  CHECK(rejected == 300);
}
