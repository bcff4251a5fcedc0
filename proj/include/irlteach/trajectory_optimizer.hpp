#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "irlteach/environment_catalog.hpp"
#include "irlteach/kernels.hpp"
#include "irlteach/reward_features.hpp"
#include "irlteach/vehicle_dynamics.hpp"

namespace irlteach {

/// One point of the maneuver grid. A template without a lane change always
/// has target_lane == Center and no start step. The speed profile is the
/// constant acceleration held for the first accel_steps, then zero.
struct ManeuverTemplate {
  Lane target_lane = Lane::Center;
  std::optional<std::size_t> lane_change_start;
  double accel = 0.0;

  friend bool operator==(const ManeuverTemplate&, const ManeuverTemplate&) = default;
};

struct StrategyLabel {
  EnvClassKind env_class = EnvClassKind::Other;
  StrategyVariant variant = StrategyVariant::OtherForward;
  bool fallback = false;  // Merging trajectory never entered the right lane

  friend bool operator==(const StrategyLabel&, const StrategyLabel&) = default;
};

struct OptimizerConfig {
  DynamicsParams dynamics;
  FeatureParams features;

  std::vector<Lane> target_lanes{Lane::Left, Lane::Center, Lane::Right};
  // nullopt = no lane change; otherwise the step at which tracking switches
  // to the target lane (early, mid, late).
  std::vector<std::optional<std::size_t>> lane_change_starts{std::nullopt, 0, 15, 30};
  // strong brake, mild brake, hold, mild accel, strong accel
  std::vector<double> accel_levels{-8.0, -3.0, 0.0, 3.0, 8.0};
  std::size_t accel_steps = 20;  // acceleration applies for the first 2 s, then hold

  // Lateral tracking controller.
  double lateral_gain = 2.0;       // 1/s
  double heading_gain = 5.0;       // 1/s
  double max_lateral_speed = 4.0;  // sim-units/s

  // Finite-difference ascent on per-block acceleration offsets. When on,
  // optimal_trajectory refines the library winner and augment_with_optima
  // adds refined optima to a set. The teaching pipeline turns it on.
  bool local_refinement = false;
  std::size_t refinement_blocks = 5;
  std::size_t refinement_iterations = 40;
  double refinement_step = 0.5;
};

/// Finite trajectory set for one environment with shared normalization.
/// The first `library_size` entries come from the template grid; later
/// entries were appended (refined optima, external observations) and carry
/// the template they started from.
struct CandidateSet {
  Environment env;
  std::size_t library_size = 0;
  std::vector<ManeuverTemplate> templates;
  std::vector<Trajectory> trajectories;
  std::vector<FeatureVector> raw_features;
  std::vector<FeatureVector> features;  // normalized with `constants`
  NormalizationConstants constants;
  std::vector<StrategyLabel> labels;

  // features transposed for the batched reward kernel
  std::array<std::vector<double>, kNumFeatures> columns;

  std::size_t size() const { return trajectories.size(); }
  kernels::FeatureColumns feature_columns() const;
};

std::vector<ManeuverTemplate> template_grid(const OptimizerConfig& config);

/// Closed-loop synthesis of one template: the lateral controller tracks the
/// target lane centre from the start step on, acceleration follows the
/// speed profile; controls are clamped to the dynamics bounds.
Trajectory synthesize(const ManeuverTemplate& tmpl, const Environment& env,
                      const OptimizerConfig& config);

CandidateSet candidate_set(const Environment& env, const OptimizerConfig& config = {});

/// Appends `traj` unless an identical trajectory is present; returns its
/// index. Call renormalize() once after the last append.
std::size_t append_candidate(CandidateSet& set, Trajectory traj, const ManeuverTemplate& origin,
                             const OptimizerConfig& config);

/// Recomputes normalization constants, normalized features and columns.
void renormalize(CandidateSet& set);

/// For each theta: refine its library optimum (scored with the library's
/// normalization) and append the result; then renormalize over the union.
/// No-op when local_refinement is off.
void augment_with_optima(CandidateSet& set, std::span<const ThetaVector> thetas,
                         const OptimizerConfig& config);

/// theta . phi for every candidate, via the active kernel table.
std::vector<double> candidate_rewards(const ThetaVector& theta, const CandidateSet& set);

/// Index of the first candidate with maximal reward.
std::size_t optimal_index(const ThetaVector& theta, const CandidateSet& set);
std::size_t argmax_first(const std::vector<double>& rewards);

/// Argmax over the candidate library; with local_refinement on, the winner
/// is further improved by refine_trajectory.
Trajectory optimal_trajectory(const ThetaVector& theta, const Environment& env,
                              const OptimizerConfig& config = {});

/// Gradient ascent (central finite differences) over additive acceleration
/// offsets per block, scoring with the set's normalization constants.
/// The result's reward is never below the starting candidate's.
Trajectory refine_trajectory(const ThetaVector& theta, const CandidateSet& set,
                             std::size_t start_index, const OptimizerConfig& config);

/// Lane whose centre is nearest to x.
Lane nearest_lane(double x, const Environment& env);
bool occupies_lane(double x, Lane lane, const Environment& env);

StrategyLabel classify_strategy(const Trajectory& traj, const Environment& env);

}  // namespace irlteach
