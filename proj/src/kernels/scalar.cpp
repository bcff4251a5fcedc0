#include <cmath>

#include "irlteach/kernels.hpp"

namespace irlteach::kernels {
namespace {

void weighted_sums(const double* w, FeatureColumns f, double* out) {
  for (std::size_t i = 0; i < f.n; ++i) {
    double acc = w[0] * f.col[0][i];
    acc = acc + w[1] * f.col[1][i];
    acc = acc + w[2] * f.col[2][i];
    acc = acc + w[3] * f.col[3][i];
    acc = acc + w[4] * f.col[4][i];
    out[i] = acc;
  }
}

void scale_in_place(double* masses, const double* factors, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) masses[i] *= factors[i];
}

double lane_sum(const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) lane[k] += x[i + k];
  }
  double acc = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = body; i < n; ++i) acc += x[i];
  return acc;
}

double step_norm(const double* a, const double* b) {
  double acc = 0.0;
  for (std::size_t d = 0; d < kStateDim; ++d) {
    const double diff = a[d] - b[d];
    acc = acc + diff * diff;
  }
  return std::sqrt(acc);
}

double mean_state_distance(const double* a, const double* b, std::size_t n_steps) {
  if (n_steps == 0) return 0.0;
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n_steps - n_steps % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t t = 1 + i + k;
      lane[k] += step_norm(a + t * kStateDim, b + t * kStateDim);
    }
  }
  double acc = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = body; i < n_steps; ++i) {
    const std::size_t t = 1 + i;
    acc += step_norm(a + t * kStateDim, b + t * kStateDim);
  }
  return acc / static_cast<double>(n_steps);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &weighted_sums, &scale_in_place, &lane_sum,
                                 &mean_state_distance};
  return table;
}

}  // namespace irlteach::kernels
