#include "irlteach/reward_features.hpp"

#include <algorithm>
#include <cmath>

#include "irlteach/common.hpp"

namespace irlteach {

double proximity_kernel(double dx, double dy, double heading, double sigma_major,
                        double sigma_minor) {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double along = c * dx + s * dy;
  const double across = -s * dx + c * dy;
  const double m = (along * along) / (sigma_major * sigma_major) +
                   (across * across) / (sigma_minor * sigma_minor);
  return std::exp(-0.5 * m);
}

FeatureVector feature_vector(const Trajectory& traj, const Environment& env,
                             const FeatureParams& params) {
  const auto& robot = traj.states;
  const auto& other = env.other_car_states;
  if (robot.size() != other.size() || robot.size() != env.horizon + 1) {
    throw DomainError("feature_vector: trajectory length " + std::to_string(robot.size()) +
                      " does not match environment horizon " + std::to_string(env.horizon));
  }
  if (traj.dt != env.dt) throw DomainError("feature_vector: dt mismatch");

  const double sigma_major = params.sigma_major_lanes * env.lane_width;
  const double sigma_minor = params.sigma_minor_lanes * env.lane_width;
  const VehicleState& first = robot.front();
  const double merge_line = first.x + env.lane_width;

  FeatureVector f;
  double weight = 1.0;
  for (std::size_t t = 0; t < robot.size(); ++t) {
    const VehicleState& s = robot[t];
    const VehicleState& o = other[t];
    f[0] += weight * proximity_kernel(s.x - o.x, s.y - o.y, o.heading, sigma_major, sigma_minor);
    if (t + 1 < robot.size()) {
      const double dv = robot[t + 1].v - s.v;
      f[1] += weight * dv * dv;
    }
    const double dev = s.v - first.v;
    f[2] += weight * dev * dev;
    f[3] += weight * std::abs(s.heading - first.heading);
    if (env.spec.goal == Goal::MergeRight) {
      const double gap = std::max(0.0, merge_line - s.x);
      f[4] += weight * gap * gap;
    }
    weight *= params.discount;
  }
  if (env.spec.goal == Goal::DriveForward) {
    const double goal_y = first.y + params.forward_goal_distance;
    f[4] = std::max(0.0, goal_y - robot.back().y);
  }
  return f;
}

NormalizationConstants normalization_constants(std::span<const FeatureVector> raw) {
  if (raw.empty()) throw DomainError("normalization_constants: empty feature set");
  NormalizationConstants c;
  c.min = raw.front().values;
  c.max = raw.front().values;
  for (const FeatureVector& f : raw) {
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      c.min[k] = std::min(c.min[k], f[k]);
      c.max[k] = std::max(c.max[k], f[k]);
    }
  }
  return c;
}

FeatureVector apply_normalization(const FeatureVector& raw, const NormalizationConstants& c) {
  FeatureVector out = raw;
  for (std::size_t k = 1; k < kNumFeatures; ++k) {
    const double span = c.max[k] - c.min[k];
    out[k] = span > 0.0 ? (raw[k] - c.min[k]) / span : 0.0;
  }
  return out;
}

std::vector<FeatureVector> normalize_features(std::span<const FeatureVector> raw) {
  if (raw.empty()) return {};
  const NormalizationConstants c = normalization_constants(raw);
  std::vector<FeatureVector> out;
  out.reserve(raw.size());
  for (const FeatureVector& f : raw) out.push_back(apply_normalization(f, c));
  return out;
}

double reward(const ThetaVector& theta, const FeatureVector& f) {
  double acc = theta[0] * f[0];
  acc = acc + theta[1] * f[1];
  acc = acc + theta[2] * f[2];
  acc = acc + theta[3] * f[3];
  acc = acc + theta[4] * f[4];
  return acc;
}

}  // namespace irlteach
