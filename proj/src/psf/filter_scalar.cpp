#include "psf/filter_variants.hpp"

namespace defocus::simd::detail {

void correlate_scalar(const double* in, std::size_t n, const double* weights,
                      std::size_t taps, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = weights[0] * in[i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * in[i + k];
    out[i] = acc;
  }
}

// Tap-major traversal keeps the per-element summation order of the
// correlate loop: w0*r0, then + w1*r1, + w2*r2, ...
void combine_rows_scalar(const double* const* rows, std::size_t taps, const double* weights,
                         std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = weights[0] * rows[0][i];
  for (std::size_t k = 1; k < taps; ++k) {
    const double w = weights[k];
    const double* row = rows[k];
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i] + w * row[i];
  }
}

}  // namespace defocus::simd::detail
