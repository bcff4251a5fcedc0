// Compiled with -mavx2 only (no -mfma), so the compiler cannot contract
// the multiply-adds and results stay bit-identical to scalar.cpp.

#include "irlteach/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <cmath>

namespace irlteach::kernels {
namespace {

void weighted_sums(const double* w, FeatureColumns f, double* out) {
  const __m256d w0 = _mm256_set1_pd(w[0]);
  const __m256d w1 = _mm256_set1_pd(w[1]);
  const __m256d w2 = _mm256_set1_pd(w[2]);
  const __m256d w3 = _mm256_set1_pd(w[3]);
  const __m256d w4 = _mm256_set1_pd(w[4]);
  std::size_t i = 0;
  for (; i + 4 <= f.n; i += 4) {
    __m256d acc = _mm256_mul_pd(w0, _mm256_loadu_pd(f.col[0] + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w1, _mm256_loadu_pd(f.col[1] + i)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w2, _mm256_loadu_pd(f.col[2] + i)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w3, _mm256_loadu_pd(f.col[3] + i)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w4, _mm256_loadu_pd(f.col[4] + i)));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < f.n; ++i) {
    double acc = w[0] * f.col[0][i];
    acc = acc + w[1] * f.col[1][i];
    acc = acc + w[2] * f.col[2][i];
    acc = acc + w[3] * f.col[3][i];
    acc = acc + w[4] * f.col[4][i];
    out[i] = acc;
  }
}

void scale_in_place(double* masses, const double* factors, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(masses + i,
                     _mm256_mul_pd(_mm256_loadu_pd(masses + i), _mm256_loadu_pd(factors + i)));
  }
  for (; i < n; ++i) masses[i] *= factors[i];
}

double combine(__m256d lanes) {
  alignas(32) double l[4];
  _mm256_store_pd(l, lanes);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

double lane_sum(const double* x, std::size_t n) {
  __m256d lanes = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) lanes = _mm256_add_pd(lanes, _mm256_loadu_pd(x + i));
  double acc = combine(lanes);
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
  const __m256i stride = _mm256_set_epi64x(15, 10, 5, 0);
  __m256d lanes = _mm256_setzero_pd();
  const std::size_t body = n_steps - n_steps % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const double* pa = a + (1 + i) * kStateDim;
    const double* pb = b + (1 + i) * kStateDim;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < kStateDim; ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_i64gather_pd(pa + d, stride, 8),
                                         _mm256_i64gather_pd(pb + d, stride, 8));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    lanes = _mm256_add_pd(lanes, _mm256_sqrt_pd(acc));
  }
  double total = combine(lanes);
  for (std::size_t i = body; i < n_steps; ++i) {
    const std::size_t t = 1 + i;
    total += step_norm(a + t * kStateDim, b + t * kStateDim);
  }
  return total / static_cast<double>(n_steps);
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", &weighted_sums, &scale_in_place, &lane_sum,
                                 &mean_state_distance};
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  return &table;
}

}  // namespace irlteach::kernels

#else

namespace irlteach::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace irlteach::kernels

#endif
