#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "irlteach/environment_catalog.hpp"
#include "irlteach/vehicle_dynamics.hpp"

namespace irlteach {

inline constexpr std::size_t kNumFeatures = 5;

/// Discounted feature sums of one trajectory, in reward-weight order.
struct FeatureVector {
  std::array<double, kNumFeatures> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  double proximity() const { return values[0]; }
  double accel_sq() const { return values[1]; }
  double speed_dev_sq() const { return values[2]; }
  double turning() const { return values[3]; }
  double goal_dist() const { return values[4]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Reward weights, one per feature.
struct ThetaVector {
  std::array<double, kNumFeatures> w{};

  double operator[](std::size_t i) const { return w[i]; }
  friend bool operator==(const ThetaVector&, const ThetaVector&) = default;
};

/// The teacher's true objective.
inline constexpr ThetaVector kThetaStar{{-64.0, -0.1, -1.0, -0.1, -0.5}};

struct FeatureParams {
  double discount = 1.0;
  // Gaussian proximity kernel std-devs, as multiples of the lane width.
  double sigma_major_lanes = 2.0;  // along the other car's heading
  double sigma_minor_lanes = 0.5;
  // Drive-forward goal line, measured ahead of the robot's start.
  double forward_goal_distance = 1000.0;
};

/// Per-column min/max used by normalize_features; shared by every consumer
/// of one environment's candidate set.
struct NormalizationConstants {
  std::array<double, kNumFeatures> min{};
  std::array<double, kNumFeatures> max{};
};

/// Gaussian kernel exp(-0.5 d^T Sigma^-1 d) between two positions, with
/// Sigma's major axis along `heading`.
double proximity_kernel(double dx, double dy, double heading, double sigma_major,
                        double sigma_minor);

/// Raw (unnormalized) features of `traj` in `env`. Sums run over state
/// indices 0..T with weight discount^t:
///   proximity    = sum k(p_t, p'_t)
///   accel_sq     = sum_{t<T} (v_{t+1} - v_t)^2
///   speed_dev_sq = sum (v_t - v_0)^2
///   turning      = sum |heading_t - heading_0|
///   goal_dist    = sum max(0, (x_0 + w) - x_t)^2     (MergeRight)
///                  max(0, y_goal - y_T)              (DriveForward)
FeatureVector feature_vector(const Trajectory& traj, const Environment& env,
                             const FeatureParams& params = {});

NormalizationConstants normalization_constants(std::span<const FeatureVector> raw);

/// Min-max scales columns 1..4 with the given constants; proximity passes
/// through. A constant column maps to 0.
FeatureVector apply_normalization(const FeatureVector& raw, const NormalizationConstants& c);

std::vector<FeatureVector> normalize_features(std::span<const FeatureVector> raw);

/// theta . f, accumulated left to right without contraction so it matches
/// kernels::KernelTable::weighted_sums bit for bit.
double reward(const ThetaVector& theta, const FeatureVector& f);

}  // namespace irlteach
