#include "irlteach/trajectory_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "irlteach/common.hpp"

namespace irlteach {
namespace {

ManeuverTemplate canonical(ManeuverTemplate t) {
  if (t.target_lane == Lane::Center || !t.lane_change_start.has_value()) {
    t.target_lane = Lane::Center;
    t.lane_change_start.reset();
  }
  return t;
}

Trajectory synthesize_with_offsets(const ManeuverTemplate& tmpl, const Environment& env,
                                   const OptimizerConfig& config,
                                   std::span<const double> accel_offsets) {
  const DynamicsParams& dyn = config.dynamics;
  const double dt = env.dt;
  const std::size_t horizon = env.horizon;
  const double base_accel = tmpl.accel;
  const double straight = std::numbers::pi / 2.0;

  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(horizon + 1);
  traj.controls.reserve(horizon);
  traj.states.push_back(env.robot_start);

  for (std::size_t i = 0; i < horizon; ++i) {
    const VehicleState& s = traj.states.back();
    const bool tracking_target = tmpl.lane_change_start.has_value() && i >= *tmpl.lane_change_start;
    const double target_x =
        env.lane_center(tracking_target ? tmpl.target_lane : Lane::Center);

    // x grows to the right while heading above pi/2 turns left, so the
    // lateral velocity is -v sin(heading - pi/2).
    const double v_eff = std::max(s.v, 1.0);
    const double lat_speed = std::clamp(config.lateral_gain * (target_x - s.x),
                                        -config.max_lateral_speed, config.max_lateral_speed);
    const double heading_des = straight - std::asin(std::clamp(lat_speed / v_eff, -0.5, 0.5));
    const double heading_rate = config.heading_gain * (heading_des - s.heading);
    const double alpha_des = std::clamp(std::atan(heading_rate * dyn.wheelbase / v_eff),
                                        -dyn.alpha_max, dyn.alpha_max);

    ControlInput u;
    u.u1 = std::clamp((alpha_des - s.alpha) / dt, -dyn.u1_max, dyn.u1_max);
    double accel = i < config.accel_steps ? base_accel : 0.0;
    if (!accel_offsets.empty()) {
      const std::size_t block = i * accel_offsets.size() / horizon;
      accel += accel_offsets[block];
    }
    u.u2 = std::clamp(accel, -dyn.u2_max, dyn.u2_max);

    traj.controls.push_back(u);
    traj.states.push_back(step(s, u, dt, dyn));
  }
  return traj;
}

}  // namespace

kernels::FeatureColumns CandidateSet::feature_columns() const {
  kernels::FeatureColumns cols{};
  for (std::size_t k = 0; k < kNumFeatures; ++k) cols.col[k] = columns[k].data();
  cols.n = size();
  return cols;
}

std::vector<ManeuverTemplate> template_grid(const OptimizerConfig& config) {
  if (config.target_lanes.empty() || config.lane_change_starts.empty() ||
      config.accel_levels.empty()) {
    throw ConfigError("candidate_set: empty maneuver template grid");
  }
  std::vector<ManeuverTemplate> grid;
  for (Lane lane : config.target_lanes) {
    for (const auto& start : config.lane_change_starts) {
      for (double accel : config.accel_levels) {
        const ManeuverTemplate t = canonical({lane, start, accel});
        if (std::find(grid.begin(), grid.end(), t) == grid.end()) grid.push_back(t);
      }
    }
  }
  return grid;
}

Trajectory synthesize(const ManeuverTemplate& tmpl, const Environment& env,
                      const OptimizerConfig& config) {
  if (tmpl.lane_change_start.has_value() && *tmpl.lane_change_start >= env.horizon) {
    throw ConfigError("lane change start beyond the horizon");
  }
  return synthesize_with_offsets(tmpl, env, config, {});
}

CandidateSet candidate_set(const Environment& env, const OptimizerConfig& config) {
  CandidateSet set;
  set.env = env;
  set.templates = template_grid(config);
  set.library_size = set.templates.size();
  set.trajectories.reserve(set.templates.size());
  set.raw_features.reserve(set.templates.size());
  for (const ManeuverTemplate& t : set.templates) {
    set.trajectories.push_back(synthesize(t, env, config));
    set.raw_features.push_back(feature_vector(set.trajectories.back(), env, config.features));
    set.labels.push_back(classify_strategy(set.trajectories.back(), env));
  }
  renormalize(set);
  return set;
}

std::size_t append_candidate(CandidateSet& set, Trajectory traj, const ManeuverTemplate& origin,
                             const OptimizerConfig& config) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.trajectories[i].states == traj.states) return i;
  }
  set.raw_features.push_back(feature_vector(traj, set.env, config.features));
  set.labels.push_back(classify_strategy(traj, set.env));
  set.templates.push_back(origin);
  set.trajectories.push_back(std::move(traj));
  return set.size() - 1;
}

void renormalize(CandidateSet& set) {
  set.constants = normalization_constants(set.raw_features);
  set.features.clear();
  set.features.reserve(set.size());
  for (const FeatureVector& f : set.raw_features) {
    set.features.push_back(apply_normalization(f, set.constants));
  }
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    set.columns[k].resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) set.columns[k][i] = set.features[i][k];
  }
}

void augment_with_optima(CandidateSet& set, std::span<const ThetaVector> thetas,
                         const OptimizerConfig& config) {
  if (!config.local_refinement) return;
  std::vector<std::pair<Trajectory, std::size_t>> refined;
  refined.reserve(thetas.size());
  for (const ThetaVector& theta : thetas) {
    const std::size_t start = optimal_index(theta, set);
    refined.emplace_back(refine_trajectory(theta, set, start, config), start);
  }
  for (auto& [traj, start] : refined) {
    const ManeuverTemplate origin = set.templates[start];
    append_candidate(set, std::move(traj), origin, config);
  }
  renormalize(set);
}

std::vector<double> candidate_rewards(const ThetaVector& theta, const CandidateSet& set) {
  std::vector<double> out(set.size());
  kernels::active().weighted_sums(theta.w.data(), set.feature_columns(), out.data());
  return out;
}

std::size_t argmax_first(const std::vector<double>& rewards) {
  if (rewards.empty()) throw DomainError("argmax over an empty candidate set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < rewards.size(); ++i) {
    if (rewards[i] > rewards[best]) best = i;
  }
  return best;
}

std::size_t optimal_index(const ThetaVector& theta, const CandidateSet& set) {
  return argmax_first(candidate_rewards(theta, set));
}

Trajectory optimal_trajectory(const ThetaVector& theta, const Environment& env,
                              const OptimizerConfig& config) {
  const CandidateSet set = candidate_set(env, config);
  const std::size_t best = optimal_index(theta, set);
  if (config.local_refinement) return refine_trajectory(theta, set, best, config);
  return set.trajectories[best];
}

Trajectory refine_trajectory(const ThetaVector& theta, const CandidateSet& set,
                             std::size_t start_index, const OptimizerConfig& config) {
  const ManeuverTemplate& tmpl = set.templates.at(start_index);
  const std::size_t blocks = std::max<std::size_t>(1, std::min(config.refinement_blocks,
                                                               set.env.horizon));
  auto score = [&](const std::vector<double>& offsets, Trajectory* out) {
    Trajectory t = synthesize_with_offsets(tmpl, set.env, config, offsets);
    const double r = reward(theta, apply_normalization(feature_vector(t, set.env, config.features),
                                                       set.constants));
    if (out != nullptr) *out = std::move(t);
    return r;
  };

  std::vector<double> offsets(blocks, 0.0);
  Trajectory best_traj = set.trajectories[start_index];
  double best = reward(theta, set.features[start_index]);
  double eta = config.refinement_step;
  constexpr double kProbe = 0.05;

  for (std::size_t iter = 0; iter < config.refinement_iterations && eta > 1e-4; ++iter) {
    std::vector<double> grad(blocks, 0.0);
    double norm = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      std::vector<double> up = offsets, down = offsets;
      up[b] += kProbe;
      down[b] -= kProbe;
      grad[b] = (score(up, nullptr) - score(down, nullptr)) / (2.0 * kProbe);
      norm += grad[b] * grad[b];
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) break;
    std::vector<double> trial = offsets;
    for (std::size_t b = 0; b < blocks; ++b) trial[b] += eta * grad[b] / norm;
    Trajectory trial_traj;
    const double r = score(trial, &trial_traj);
    if (r > best) {
      best = r;
      offsets = std::move(trial);
      best_traj = std::move(trial_traj);
      eta *= 1.2;
    } else {
      eta *= 0.5;
    }
  }
  return best_traj;
}

Lane nearest_lane(double x, const Environment& env) {
  Lane best = Lane::Left;
  double best_d = std::abs(x - env.lane_center(Lane::Left));
  for (Lane lane : {Lane::Center, Lane::Right}) {
    const double d = std::abs(x - env.lane_center(lane));
    if (d < best_d) {
      best = lane;
      best_d = d;
    }
  }
  return best;
}

bool occupies_lane(double x, Lane lane, const Environment& env) {
  return std::abs(x - env.lane_center(lane)) < env.lane_width / 4.0;
}

StrategyLabel classify_strategy(const Trajectory& traj, const Environment& env) {
  if (traj.states.size() != env.other_car_states.size()) {
    throw DomainError("classify_strategy: trajectory does not span the environment horizon");
  }
  const EnvClass cls = classify_environment(env.spec);
  StrategyLabel label;
  label.env_class = cls.kind;
  const Lane final_lane = nearest_lane(traj.states.back().x, env);

  switch (cls.kind) {
    case EnvClassKind::Merging: {
      for (std::size_t t = 0; t < traj.states.size(); ++t) {
        if (occupies_lane(traj.states[t].x, Lane::Right, env)) {
          label.variant = traj.states[t].y > env.other_car_states[t].y
                              ? StrategyVariant::MergeAhead
                              : StrategyVariant::MergeBehind;
          return label;
        }
      }
      label.fallback = true;
      label.variant = traj.states.back().y > env.other_car_states.back().y
                          ? StrategyVariant::MergeAhead
                          : StrategyVariant::MergeBehind;
      return label;
    }
    case EnvClassKind::Braking:
      label.variant =
          final_lane == Lane::Center ? StrategyVariant::StayBehind : StrategyVariant::PassLane;
      return label;
    case EnvClassKind::Tailgating:
      label.variant =
          final_lane != Lane::Center ? StrategyVariant::AvoidTailgater : StrategyVariant::SpeedUp;
      return label;
    case EnvClassKind::Other:
      label.variant = env.spec.goal == Goal::MergeRight ? StrategyVariant::OtherMerge
                                                        : StrategyVariant::OtherForward;
      return label;
  }
  return label;
}

}  // namespace irlteach
