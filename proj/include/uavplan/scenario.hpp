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

#ifndef UAVPLAN_SCENARIO_HPP_
#define UAVPLAN_SCENARIO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavplan/types.hpp"

namespace uavplan {

struct UserNode {
  int id = 0;
  Point position = Point::Zero();
  double r_min = 0.0;  // bps/Hz per time slot
};

// Cylindrical exclusion region; only the ground disk constrains the UAV.
struct NoFlyZone {
  Point center = Point::Zero();
  double radius = 0.0;
  double height = 0.0;
};

struct UavConfig {
  double altitude = 0.0;
  double v_max = 0.0;
  Point start = Point::Zero();
  Point finish = Point::Zero();
  double power_w = 0.0;  // per subcarrier
};

struct ChannelConfig {
  double beta0_db = 0.0;
  double noise_dbm = 0.0;
  int n_subcarriers = 0;
  double gamma0 = 0.0;  // beta0 / sigma^2, per watt
};

struct TimeGrid {
  double horizon = 0.0;
  int n_slots = 0;
  double dt = 0.0;
  double max_step = 0.0;  // v_max * dt
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScenarioParseError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

// Raised when an invariant fails; field() names the offending entry, e.g.
// "uav.finish" or "nfzs[1].radius".
class ScenarioValidationError : public ScenarioError {
 public:
  ScenarioValidationError(std::string field, const std::string& what)
      : ScenarioError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Immutable, validated problem instance.
class Scenario {
 public:
  // Derives gamma0, dt and max_step and checks every invariant.
  // Throws ScenarioValidationError.
  static Scenario create(std::vector<UserNode> users,
                         std::vector<NoFlyZone> nfzs, UavConfig uav,
                         double beta0_db, double noise_dbm, int n_subcarriers,
                         double horizon_s, int n_slots);

  const std::vector<UserNode>& users() const noexcept { return users_; }
  const std::vector<NoFlyZone>& nfzs() const noexcept { return nfzs_; }
  const UavConfig& uav() const noexcept { return uav_; }
  const ChannelConfig& channel() const noexcept { return channel_; }
  const TimeGrid& grid() const noexcept { return grid_; }

  int num_users() const noexcept { return static_cast<int>(users_.size()); }
  int num_slots() const noexcept { return grid_.n_slots; }
  // gamma0 * P, the received SNR numerator shared by every subcarrier.
  double snr_numerator() const noexcept { return channel_.gamma0 * uav_.power_w; }
  double power_dbm() const;

  Scenario with_power_dbm(double power_dbm) const;
  Scenario without_nfzs() const;

 private:
  Scenario() = default;

  std::vector<UserNode> users_;
  std::vector<NoFlyZone> nfzs_;
  UavConfig uav_;
  ChannelConfig channel_;
  TimeGrid grid_;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace uavplan

#endif  // UAVPLAN_SCENARIO_HPP_
