#include <arm_neon.h>

#include "psf/filter_variants.hpp"

namespace defocus::simd::detail {

// vmulq/vaddq rather than vfmaq: the results must match the scalar path bit
// for bit.

void correlate_neon(const double* in, std::size_t n, const double* weights, std::size_t taps,
                    double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t w = vdupq_n_f64(weights[0]);
    float64x2_t acc0 = vmulq_f64(w, vld1q_f64(in + i));
    float64x2_t acc1 = vmulq_f64(w, vld1q_f64(in + i + 2));
    for (std::size_t k = 1; k < taps; ++k) {
      w = vdupq_n_f64(weights[k]);
      acc0 = vaddq_f64(acc0, vmulq_f64(w, vld1q_f64(in + i + k)));
      acc1 = vaddq_f64(acc1, vmulq_f64(w, vld1q_f64(in + i + k + 2)));
    }
    vst1q_f64(out + i, acc0);
    vst1q_f64(out + i + 2, acc1);
  }
  for (; i < n; ++i) {
    double acc = weights[0] * in[i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * in[i + k];
    out[i] = acc;
  }
}

void combine_rows_neon(const double* const* rows, std::size_t taps, const double* weights,
                       std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t w = vdupq_n_f64(weights[0]);
    float64x2_t acc0 = vmulq_f64(w, vld1q_f64(rows[0] + i));
    float64x2_t acc1 = vmulq_f64(w, vld1q_f64(rows[0] + i + 2));
    for (std::size_t k = 1; k < taps; ++k) {
      w = vdupq_n_f64(weights[k]);
      acc0 = vaddq_f64(acc0, vmulq_f64(w, vld1q_f64(rows[k] + i)));
      acc1 = vaddq_f64(acc1, vmulq_f64(w, vld1q_f64(rows[k] + i + 2)));
    }
    vst1q_f64(out + i, acc0);
    vst1q_f64(out + i + 2, acc1);
  }
  for (; i < n; ++i) {
    double acc = weights[0] * rows[0][i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * rows[k][i];
    out[i] = acc;
  }
}

}  // namespace defocus::simd::detail
