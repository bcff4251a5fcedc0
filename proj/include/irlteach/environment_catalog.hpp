#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irlteach/vehicle_dynamics.hpp"

namespace irlteach {

enum class Goal { MergeRight, DriveForward };
enum class Lane { Left, Center, Right };

/// One point of the highway configuration grid.
struct EnvironmentSpec {
  Goal goal = Goal::MergeRight;
  int other_car_offset = 0;  // positive = other car ahead of the robot
  Lane other_car_lane = Lane::Center;
  int other_car_v0 = 0;
  double accel_time = 0.0;
  std::optional<int> other_car_vf;  // present iff accel_time != 0

  friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

enum class EnvClassKind { Merging, Braking, Tailgating, Other };

/// The eight strategy clusters, two per environment class, in 2x4 grid order
/// (class-major, slot 0 first).
enum class StrategyVariant {
  MergeAhead,
  MergeBehind,
  StayBehind,
  PassLane,
  AvoidTailgater,
  SpeedUp,
  OtherMerge,
  OtherForward,
};

inline constexpr std::size_t kNumClusters = 8;

struct EnvClass {
  EnvClassKind kind = EnvClassKind::Other;
  std::array<StrategyVariant, 2> strategy_slots{};
};

struct EnvironmentConfig {
  double lane_width = 4.0;
  double robot_v0 = 50.0;
  std::size_t horizon = 50;  // T
  double dt = 0.1;
};

struct Environment {
  EnvironmentSpec spec;
  double lane_width = 4.0;
  std::array<double, 3> lane_centers{};  // indexed by Lane
  VehicleState robot_start;
  std::vector<VehicleState> other_car_states;  // T+1, heading along +y
  std::size_t horizon = 0;
  double dt = 0.1;

  double lane_center(Lane lane) const { return lane_centers[static_cast<std::size_t>(lane)]; }
};

// Grid axes in canonical order.
const std::vector<int>& offset_values();
const std::vector<int>& other_v0_values();
const std::vector<double>& accel_time_values();
const std::vector<int>& final_velocity_values();

/// Cartesian product of the grid axes, lexicographic over
/// (goal, offset, lane, v0, accel profile). 21,216 entries.
std::vector<EnvironmentSpec> enumerate_environments();

/// Position of a spec in enumerate_environments() order, computed directly.
std::size_t catalog_index(const EnvironmentSpec& spec);

bool is_valid(const EnvironmentSpec& spec);

EnvClass classify_environment(const EnvironmentSpec& spec);

/// Other car positions and speeds: linear speed ramp from v0 to vf over
/// accel_time, then constant; positions integrate the piecewise-linear
/// speed with the trapezoid rule (exact on the step grid).
std::vector<VehicleState> other_car_trajectory(const EnvironmentSpec& spec, double lane_x,
                                               std::size_t horizon, double dt);

Environment instantiate(const EnvironmentSpec& spec, const EnvironmentConfig& config = {});

std::string_view to_string(Goal goal);
std::string_view to_string(Lane lane);
std::string_view to_string(EnvClassKind kind);
std::string_view to_string(StrategyVariant variant);

Goal parse_goal(std::string_view s);
Lane parse_lane(std::string_view s);
EnvClassKind parse_class(std::string_view s);
StrategyVariant parse_variant(std::string_view s);

EnvClassKind class_of(StrategyVariant variant);
/// 0 or 1: column of the variant within its class pair.
std::size_t slot_of(StrategyVariant variant);
inline std::size_t cluster_index(StrategyVariant v) { return static_cast<std::size_t>(v); }

}  // namespace irlteach
