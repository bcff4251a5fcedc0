#include "irlteach/environment_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "irlteach/common.hpp"

namespace irlteach {
namespace {

template <typename T>
std::size_t index_in(const std::vector<T>& values, T v, const char* what) {
  auto it = std::find(values.begin(), values.end(), v);
  if (it == values.end()) throw ConfigError(std::string("value not in grid: ") + what);
  return static_cast<std::size_t>(it - values.begin());
}

std::size_t profile_index(const EnvironmentSpec& spec) {
  if (spec.accel_time == 0.0) return 0;
  const std::size_t t = index_in(accel_time_values(), spec.accel_time, "accel_time");
  const std::size_t f = index_in(final_velocity_values(), spec.other_car_vf.value(), "vf");
  return 1 + (t - 1) * final_velocity_values().size() + f;
}

}  // namespace

const std::vector<int>& offset_values() {
  static const std::vector<int> values = [] {
    std::vector<int> v;
    for (int d = -240; d <= -100; d += 20) v.push_back(d);
    for (int d = 100; d <= 240; d += 20) v.push_back(d);
    return v;
  }();
  return values;
}

const std::vector<int>& other_v0_values() {
  static const std::vector<int> values = [] {
    std::vector<int> v;
    for (int s = 20; s <= 80; s += 5) v.push_back(s);
    return v;
  }();
  return values;
}

const std::vector<double>& accel_time_values() {
  static const std::vector<double> values{0.0, 0.5, 1.0, 1.5, 2.0};
  return values;
}

const std::vector<int>& final_velocity_values() {
  static const std::vector<int> values{20, 30, 70, 80};
  return values;
}

std::vector<EnvironmentSpec> enumerate_environments() {
  std::vector<EnvironmentSpec> out;
  out.reserve(21216);
  for (Goal goal : {Goal::MergeRight, Goal::DriveForward}) {
    for (int offset : offset_values()) {
      for (Lane lane : {Lane::Left, Lane::Center, Lane::Right}) {
        for (int v0 : other_v0_values()) {
          out.push_back({goal, offset, lane, v0, 0.0, std::nullopt});
          for (double at : accel_time_values()) {
            if (at == 0.0) continue;
            for (int vf : final_velocity_values()) out.push_back({goal, offset, lane, v0, at, vf});
          }
        }
      }
    }
  }
  return out;
}

bool is_valid(const EnvironmentSpec& spec) {
  const auto& offs = offset_values();
  const auto& v0s = other_v0_values();
  const auto& ats = accel_time_values();
  const auto& vfs = final_velocity_values();
  if (std::find(offs.begin(), offs.end(), spec.other_car_offset) == offs.end()) return false;
  if (std::find(v0s.begin(), v0s.end(), spec.other_car_v0) == v0s.end()) return false;
  if (std::find(ats.begin(), ats.end(), spec.accel_time) == ats.end()) return false;
  if (spec.accel_time == 0.0) return !spec.other_car_vf.has_value();
  return spec.other_car_vf.has_value() &&
         std::find(vfs.begin(), vfs.end(), *spec.other_car_vf) != vfs.end();
}

std::size_t catalog_index(const EnvironmentSpec& spec) {
  if (!is_valid(spec)) throw ConfigError("catalog_index: spec not on the grid");
  std::size_t idx = static_cast<std::size_t>(spec.goal);
  idx = idx * offset_values().size() + index_in(offset_values(), spec.other_car_offset, "offset");
  idx = idx * 3 + static_cast<std::size_t>(spec.other_car_lane);
  idx = idx * other_v0_values().size() + index_in(other_v0_values(), spec.other_car_v0, "v0");
  idx = idx * (1 + (accel_time_values().size() - 1) * final_velocity_values().size()) +
        profile_index(spec);
  return idx;
}

EnvClass classify_environment(const EnvironmentSpec& spec) {
  if (spec.other_car_lane == Lane::Right && spec.goal == Goal::MergeRight) {
    return {EnvClassKind::Merging, {StrategyVariant::MergeAhead, StrategyVariant::MergeBehind}};
  }
  if (spec.other_car_lane == Lane::Center && spec.goal == Goal::DriveForward) {
    if (spec.other_car_offset > 0) {
      return {EnvClassKind::Braking, {StrategyVariant::StayBehind, StrategyVariant::PassLane}};
    }
    if (spec.other_car_offset < 0) {
      return {EnvClassKind::Tailgating,
              {StrategyVariant::AvoidTailgater, StrategyVariant::SpeedUp}};
    }
  }
  return {EnvClassKind::Other, {StrategyVariant::OtherMerge, StrategyVariant::OtherForward}};
}

std::vector<VehicleState> other_car_trajectory(const EnvironmentSpec& spec, double lane_x,
                                               std::size_t horizon, double dt) {
  const double v0 = spec.other_car_v0;
  const double vf = spec.other_car_vf.value_or(spec.other_car_v0);
  auto speed_at = [&](double t) {
    if (spec.accel_time <= 0.0) return v0;
    return v0 + (vf - v0) * std::min(t / spec.accel_time, 1.0);
  };

  std::vector<VehicleState> states(horizon + 1);
  double y = static_cast<double>(spec.other_car_offset);
  for (std::size_t i = 0; i <= horizon; ++i) {
    const double v = speed_at(static_cast<double>(i) * dt);
    if (i > 0) y += 0.5 * (states[i - 1].v + v) * dt;
    states[i] = VehicleState{lane_x, y, std::numbers::pi / 2.0, v, 0.0};
  }
  return states;
}

Environment instantiate(const EnvironmentSpec& spec, const EnvironmentConfig& config) {
  if (!is_valid(spec)) throw ConfigError("instantiate: spec not on the grid");
  if (!(config.lane_width > 0.0) || !(config.dt > 0.0) || config.horizon == 0) {
    throw ConfigError("instantiate: lane_width, dt and horizon must be positive");
  }
  Environment env;
  env.spec = spec;
  env.lane_width = config.lane_width;
  env.lane_centers = {-config.lane_width, 0.0, config.lane_width};
  env.robot_start = VehicleState{env.lane_center(Lane::Center), 0.0, std::numbers::pi / 2.0,
                                 config.robot_v0, 0.0};
  env.horizon = config.horizon;
  env.dt = config.dt;
  env.other_car_states =
      other_car_trajectory(spec, env.lane_center(spec.other_car_lane), config.horizon, config.dt);
  return env;
}

std::string_view to_string(Goal goal) {
  return goal == Goal::MergeRight ? "MergeRight" : "DriveForward";
}

std::string_view to_string(Lane lane) {
  switch (lane) {
    case Lane::Left: return "Left";
    case Lane::Center: return "Center";
    case Lane::Right: return "Right";
  }
  return "?";
}

std::string_view to_string(EnvClassKind kind) {
  switch (kind) {
    case EnvClassKind::Merging: return "Merging";
    case EnvClassKind::Braking: return "Braking";
    case EnvClassKind::Tailgating: return "Tailgating";
    case EnvClassKind::Other: return "Other";
  }
  return "?";
}

std::string_view to_string(StrategyVariant variant) {
  switch (variant) {
    case StrategyVariant::MergeAhead: return "MergeAhead";
    case StrategyVariant::MergeBehind: return "MergeBehind";
    case StrategyVariant::StayBehind: return "StayBehind";
    case StrategyVariant::PassLane: return "PassLane";
    case StrategyVariant::AvoidTailgater: return "AvoidTailgater";
    case StrategyVariant::SpeedUp: return "SpeedUp";
    case StrategyVariant::OtherMerge: return "OtherMerge";
    case StrategyVariant::OtherForward: return "OtherForward";
  }
  return "?";
}

Goal parse_goal(std::string_view s) {
  if (s == "MergeRight") return Goal::MergeRight;
  if (s == "DriveForward") return Goal::DriveForward;
  throw ConfigError("unknown goal: " + std::string(s));
}

Lane parse_lane(std::string_view s) {
  if (s == "Left") return Lane::Left;
  if (s == "Center") return Lane::Center;
  if (s == "Right") return Lane::Right;
  throw ConfigError("unknown lane: " + std::string(s));
}

EnvClassKind parse_class(std::string_view s) {
  for (EnvClassKind k : {EnvClassKind::Merging, EnvClassKind::Braking, EnvClassKind::Tailgating,
                         EnvClassKind::Other}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown environment class: " + std::string(s));
}

StrategyVariant parse_variant(std::string_view s) {
  for (std::size_t i = 0; i < kNumClusters; ++i) {
    const auto v = static_cast<StrategyVariant>(i);
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown strategy: " + std::string(s));
}

EnvClassKind class_of(StrategyVariant variant) {
  return static_cast<EnvClassKind>(static_cast<std::size_t>(variant) / 2);
}

std::size_t slot_of(StrategyVariant variant) { return static_cast<std::size_t>(variant) % 2; }

}  // namespace irlteach
