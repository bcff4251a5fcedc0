#include "irlteach/vehicle_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "irlteach/common.hpp"

namespace irlteach {
namespace {

bool finite(const VehicleState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.heading) &&
         std::isfinite(s.v) && std::isfinite(s.alpha);
}

}  // namespace

VehicleState step(const VehicleState& s, const ControlInput& u, double dt,
                  const DynamicsParams& params) {
  if (!finite(s) || !std::isfinite(u.u1) || !std::isfinite(u.u2) || !std::isfinite(dt)) {
    throw DomainError("step: non-finite state, control or dt");
  }
  if (dt <= 0.0) throw DomainError("step: dt must be positive");
  if (!(params.wheelbase > 0.0)) throw DomainError("step: wheelbase must be positive");
  if (std::abs(u.u1) > params.u1_max || std::abs(u.u2) > params.u2_max) {
    throw DomainError("step: control (" + std::to_string(u.u1) + ", " + std::to_string(u.u2) +
                      ") outside bounds");
  }

  VehicleState next;
  next.x = s.x + dt * (s.v * std::cos(s.heading));
  next.y = s.y + dt * (s.v * std::sin(s.heading));
  next.heading = s.heading + dt * (s.v / params.wheelbase * std::tan(s.alpha));
  next.v = std::max(0.0, s.v + dt * u.u2);
  next.alpha = std::clamp(s.alpha + dt * u.u1, -params.alpha_max, params.alpha_max);
  return next;
}

Trajectory rollout(const VehicleState& s0, std::span<const ControlInput> controls, double dt,
                   const DynamicsParams& params) {
  if (controls.empty()) throw DomainError("rollout: empty control sequence");
  Trajectory traj;
  traj.dt = dt;
  traj.controls.assign(controls.begin(), controls.end());
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(s0);
  for (const ControlInput& u : controls) traj.states.push_back(step(traj.states.back(), u, dt, params));
  return traj;
}

}  // namespace irlteach
