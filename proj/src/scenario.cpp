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

#include "uavplan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "uavplan/units.hpp"

namespace uavplan {
namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ScenarioValidationError(field, what);
}

bool finite(const Point& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

std::string indexed(const char* list, std::size_t i, const char* field) {
  return std::string(list) + "[" + std::to_string(i) + "]." + field;
}

Point read_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ScenarioParseError("expected a two-element [x, y] array");
  }
  return Point(j.at(0).get<double>(), j.at(1).get<double>());
}

}  // namespace

Scenario Scenario::create(std::vector<UserNode> users,
                          std::vector<NoFlyZone> nfzs, UavConfig uav,
                          double beta0_db, double noise_dbm, int n_subcarriers,
                          double horizon_s, int n_slots) {
  require(!users.empty(), "users", "at least one user is required");
  std::set<int> ids;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const UserNode& u = users[i];
    require(finite(u.position), indexed("users", i, "x"), "position must be finite");
    require(std::isfinite(u.r_min) && u.r_min > 0.0, indexed("users", i, "r_min"),
            "must be > 0");
    require(ids.insert(u.id).second, indexed("users", i, "id"),
            "duplicate user id " + std::to_string(u.id));
  }

  require(std::isfinite(uav.altitude) && uav.altitude > 0.0, "uav.altitude", "must be > 0");
  require(std::isfinite(uav.v_max) && uav.v_max > 0.0, "uav.v_max", "must be > 0");
  require(std::isfinite(uav.power_w) && uav.power_w > 0.0, "uav.power_dbm",
          "per-subcarrier power must be > 0 W");
  require(finite(uav.start), "uav.start", "must be finite");
  require(finite(uav.finish), "uav.finish", "must be finite");

  for (std::size_t j = 0; j < nfzs.size(); ++j) {
    const NoFlyZone& z = nfzs[j];
    require(finite(z.center), indexed("nfzs", j, "x"), "center must be finite");
    require(std::isfinite(z.radius) && z.radius > 0.0, indexed("nfzs", j, "radius"),
            "must be > 0");
    require(std::isfinite(z.height) && z.height > uav.altitude,
            indexed("nfzs", j, "height"),
            "must exceed the UAV altitude, otherwise the zone could be overflown");
    for (std::size_t i = 0; i < j; ++i) {
      const double gap = (z.center - nfzs[i].center).norm();
      require(gap >= z.radius + nfzs[i].radius, indexed("nfzs", j, "radius"),
              "overlaps nfzs[" + std::to_string(i) + "]");
    }
    require((uav.start - z.center).norm() >= z.radius, "uav.start",
            "lies inside nfzs[" + std::to_string(j) + "]");
    require((uav.finish - z.center).norm() >= z.radius, "uav.finish",
            "lies inside nfzs[" + std::to_string(j) + "]");
  }

  require(std::isfinite(beta0_db), "channel.beta0_db", "must be finite");
  require(std::isfinite(noise_dbm), "channel.noise_dbm", "must be finite");
  require(n_subcarriers >= static_cast<int>(users.size()), "channel.n_subcarriers",
          "must be at least the number of users");

  require(std::isfinite(horizon_s) && horizon_s > 0.0, "time.horizon_s", "must be > 0");
  require(n_slots >= 1, "time.n_slots", "must be >= 1");

  Scenario s;
  s.channel_.beta0_db = beta0_db;
  s.channel_.noise_dbm = noise_dbm;
  s.channel_.n_subcarriers = n_subcarriers;
  s.channel_.gamma0 = db_to_linear(beta0_db) / dbm_to_watts(noise_dbm);
  require(std::isfinite(s.channel_.gamma0) && s.channel_.gamma0 > 0.0, "channel.beta0_db",
          "reference SNR must be finite and > 0");

  s.grid_.horizon = horizon_s;
  s.grid_.n_slots = n_slots;
  s.grid_.dt = horizon_s / n_slots;
  s.grid_.max_step = uav.v_max * s.grid_.dt;

  const double span = (uav.finish - uav.start).norm();
  const double reach = n_slots * s.grid_.max_step;
  if (span > reach) {
    std::ostringstream msg;
    msg << "unreachable: endpoint distance " << span << " m exceeds N*V = " << reach << " m";
    throw ScenarioValidationError("uav.finish", msg.str());
  }

  s.users_ = std::move(users);
  s.nfzs_ = std::move(nfzs);
  s.uav_ = uav;
  return s;
}

double Scenario::power_dbm() const { return watts_to_dbm(uav_.power_w); }

Scenario Scenario::with_power_dbm(double power_dbm) const {
  UavConfig uav = uav_;
  uav.power_w = dbm_to_watts(power_dbm);
  return create(users_, nfzs_, uav, channel_.beta0_db, channel_.noise_dbm,
                channel_.n_subcarriers, grid_.horizon, grid_.n_slots);
}

Scenario Scenario::without_nfzs() const {
  Scenario copy = *this;
  copy.nfzs_.clear();
  return copy;
}

Scenario parse_scenario(const nlohmann::json& doc) {
  std::vector<UserNode> users;
  std::vector<NoFlyZone> nfzs;
  UavConfig uav;
  double beta0_db = 0.0;
  double noise_dbm = 0.0;
  int n_subcarriers = 0;
  double horizon = 0.0;
  int n_slots = 0;
  try {
    for (const auto& u : doc.at("users")) {
      users.push_back(UserNode{u.at("id").get<int>(),
                               Point(u.at("x").get<double>(), u.at("y").get<double>()),
                               u.at("r_min").get<double>()});
    }
    if (doc.contains("nfzs")) {
      for (const auto& z : doc.at("nfzs")) {
        nfzs.push_back(NoFlyZone{Point(z.at("x").get<double>(), z.at("y").get<double>()),
                                 z.at("radius").get<double>(), z.at("height").get<double>()});
      }
    }
    const auto& u = doc.at("uav");
    uav.altitude = u.at("altitude").get<double>();
    uav.v_max = u.at("v_max").get<double>();
    uav.start = read_point(u.at("start"));
    uav.finish = read_point(u.at("finish"));
    uav.power_w = dbm_to_watts(u.at("power_dbm").get<double>());

    const auto& c = doc.at("channel");
    beta0_db = c.at("beta0_db").get<double>();
    noise_dbm = c.at("noise_dbm").get<double>();
    n_subcarriers = c.at("n_subcarriers").get<int>();

    const auto& t = doc.at("time");
    horizon = t.at("horizon_s").get<double>();
    // One-second slots unless stated otherwise.
    n_slots = t.contains("n_slots") ? t.at("n_slots").get<int>()
                                    : static_cast<int>(std::lround(horizon));
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioParseError(std::string("malformed scenario: ") + e.what());
  }
  return Scenario::create(std::move(users), std::move(nfzs), uav, beta0_db, noise_dbm,
                          n_subcarriers, horizon, n_slots);
}

Scenario parse_scenario_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
  nlohmann::json doc;
  doc["users"] = nlohmann::json::array();
  for (const UserNode& u : scenario.users()) {
    doc["users"].push_back(
        {{"id", u.id}, {"x", u.position.x()}, {"y", u.position.y()}, {"r_min", u.r_min}});
  }
  doc["nfzs"] = nlohmann::json::array();
  for (const NoFlyZone& z : scenario.nfzs()) {
    doc["nfzs"].push_back({{"x", z.center.x()},
                           {"y", z.center.y()},
                           {"radius", z.radius},
                           {"height", z.height}});
  }
  const UavConfig& uav = scenario.uav();
  doc["uav"] = {{"altitude", uav.altitude},
                {"v_max", uav.v_max},
                {"start", {uav.start.x(), uav.start.y()}},
                {"finish", {uav.finish.x(), uav.finish.y()}},
                {"power_dbm", scenario.power_dbm()}};
  doc["channel"] = {{"beta0_db", scenario.channel().beta0_db},
                    {"noise_dbm", scenario.channel().noise_dbm},
                    {"n_subcarriers", scenario.channel().n_subcarriers}};
  doc["time"] = {{"horizon_s", scenario.grid().horizon}, {"n_slots", scenario.grid().n_slots}};
  return doc;
}

}  // namespace uavplan
