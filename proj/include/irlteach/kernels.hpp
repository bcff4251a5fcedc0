#pragma once

// Data-parallel inner loops used by the optimizer and learner models.
//
// Every kernel has a scalar reference and an AVX2 variant. The AVX2 code
// performs the same IEEE operations in the same order per output element
// (no FMA contraction, reductions over four interleaved partial sums), so
// both variants produce bit-identical results. That keeps golden outputs
// independent of the host CPU.

#include <cstddef>
#include <span>
#include <string_view>

namespace irlteach::kernels {

inline constexpr std::size_t kFeatureDim = 5;
inline constexpr std::size_t kStateDim = 5;

/// Structure-of-arrays view over n feature vectors.
struct FeatureColumns {
  const double* col[kFeatureDim];
  std::size_t n;
};

struct KernelTable {
  std::string_view name;

  // out[i] = ((((w0*f0[i] + w1*f1[i]) + w2*f2[i]) + w3*f3[i]) + w4*f4[i])
  void (*weighted_sums)(const double* weights, FeatureColumns features, double* out);

  // masses[i] *= factors[i]
  void (*scale_in_place)(double* masses, const double* factors, std::size_t n);

  // Sum over four interleaved lanes: lane k accumulates x[4j+k] in order,
  // lanes combine as (l0+l1)+(l2+l3), then the tail is added in order.
  double (*lane_sum)(const double* x, std::size_t n);

  // Mean over steps 1..n_steps of the L2 distance between packed 5-dim
  // states a[t*5..t*5+4] and b[...]. Step 0 is skipped. Per-step norms are
  // accumulated with the lane_sum order.
  double (*mean_state_distance)(const double* a, const double* b, std::size_t n_steps);
};

const KernelTable& scalar_table();

/// Null when the build or the host lacks AVX2.
const KernelTable* avx2_table();

/// The table used by the library. Chosen once: AVX2 when available unless
/// the IRLTEACH_SIMD environment variable is set to "scalar".
const KernelTable& active();

}  // namespace irlteach::kernels
