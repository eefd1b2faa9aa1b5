#include <immintrin.h>

#include "psf/filter_variants.hpp"

// Compiled for the baseline ISA; only these functions use AVX2, and the
// dispatcher calls them after checking the CPU.

namespace defocus::simd::detail {

__attribute__((target("avx2"))) void correlate_avx2(const double* in, std::size_t n,
                                                    const double* weights, std::size_t taps,
                                                    double* out) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d w = _mm256_broadcast_sd(weights);
    __m256d acc0 = _mm256_mul_pd(w, _mm256_loadu_pd(in + i));
    __m256d acc1 = _mm256_mul_pd(w, _mm256_loadu_pd(in + i + 4));
    for (std::size_t k = 1; k < taps; ++k) {
      w = _mm256_broadcast_sd(weights + k);
      acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(w, _mm256_loadu_pd(in + i + k)));
      acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(w, _mm256_loadu_pd(in + i + k + 4)));
    }
    _mm256_storeu_pd(out + i, acc0);
    _mm256_storeu_pd(out + i + 4, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_broadcast_sd(weights), _mm256_loadu_pd(in + i));
    for (std::size_t k = 1; k < taps; ++k) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_broadcast_sd(weights + k),
                                             _mm256_loadu_pd(in + i + k)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = weights[0] * in[i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * in[i + k];
    out[i] = acc;
  }
}

__attribute__((target("avx2"))) void combine_rows_avx2(const double* const* rows,
                                                       std::size_t taps, const double* weights,
                                                       std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256d w = _mm256_broadcast_sd(weights);
    __m256d acc0 = _mm256_mul_pd(w, _mm256_loadu_pd(rows[0] + i));
    __m256d acc1 = _mm256_mul_pd(w, _mm256_loadu_pd(rows[0] + i + 4));
    __m256d acc2 = _mm256_mul_pd(w, _mm256_loadu_pd(rows[0] + i + 8));
    __m256d acc3 = _mm256_mul_pd(w, _mm256_loadu_pd(rows[0] + i + 12));
    for (std::size_t k = 1; k < taps; ++k) {
      w = _mm256_broadcast_sd(weights + k);
      const double* row = rows[k] + i;
      acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(w, _mm256_loadu_pd(row)));
      acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(w, _mm256_loadu_pd(row + 4)));
      acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(w, _mm256_loadu_pd(row + 8)));
      acc3 = _mm256_add_pd(acc3, _mm256_mul_pd(w, _mm256_loadu_pd(row + 12)));
    }
    _mm256_storeu_pd(out + i, acc0);
    _mm256_storeu_pd(out + i + 4, acc1);
    _mm256_storeu_pd(out + i + 8, acc2);
    _mm256_storeu_pd(out + i + 12, acc3);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_broadcast_sd(weights), _mm256_loadu_pd(rows[0] + i));
    for (std::size_t k = 1; k < taps; ++k) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_broadcast_sd(weights + k),
                                             _mm256_loadu_pd(rows[k] + i)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = weights[0] * rows[0][i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * rows[k][i];
    out[i] = acc;
  }
}

}  // namespace defocus::simd::detail
