#pragma once

#include <array>
#include <span>
#include <vector>

namespace irlteach {

/// Rear-axle pose, speed and steering angle of a car. Lanes vary in x and
/// cars drive along +y, so a car going straight has heading pi/2.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double v = 0.0;
  double alpha = 0.0;

  std::array<double, 5> as_array() const { return {x, y, heading, v, alpha}; }
  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

/// u1 is the steering-angle rate, u2 the longitudinal acceleration.
struct ControlInput {
  double u1 = 0.0;
  double u2 = 0.0;
  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

struct DynamicsParams {
  double wheelbase = 3.0;   // L
  double alpha_max = 0.5;   // rad
  double u1_max = 2.0;      // rad/s
  double u2_max = 10.0;     // sim-units/s^2
};

struct Trajectory {
  double dt = 0.1;
  std::vector<VehicleState> states;    // T+1
  std::vector<ControlInput> controls;  // T

  std::size_t horizon() const { return controls.size(); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

static_assert(sizeof(VehicleState) == 5 * sizeof(double), "states are packed as 5 doubles");

/// One explicit-Euler step of the kinematic bicycle model:
///   x' = v cos(heading), y' = v sin(heading), heading' = v/L tan(alpha),
///   v' = u2, alpha' = u1.
/// alpha is clamped to +-alpha_max and v to >= 0 after the update.
/// Throws DomainError on non-finite input, dt <= 0, L <= 0 or controls
/// outside the configured bounds.
VehicleState step(const VehicleState& s, const ControlInput& u, double dt,
                  const DynamicsParams& params = {});

/// Folds step() over the control sequence.
Trajectory rollout(const VehicleState& s0, std::span<const ControlInput> controls, double dt,
                   const DynamicsParams& params = {});

}  // namespace irlteach
