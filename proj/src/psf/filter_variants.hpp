#pragma once

#include <cstddef>

namespace defocus::simd::detail {

void correlate_scalar(const double* in, std::size_t n, const double* weights,
                      std::size_t taps, double* out);
void combine_rows_scalar(const double* const* rows, std::size_t taps, const double* weights,
                         std::size_t n, double* out);

#if defined(DEFOCUS_HAVE_AVX2)
void correlate_avx2(const double* in, std::size_t n, const double* weights,
                    std::size_t taps, double* out);
void combine_rows_avx2(const double* const* rows, std::size_t taps, const double* weights,
                       std::size_t n, double* out);
#endif

#if defined(DEFOCUS_HAVE_NEON)
void correlate_neon(const double* in, std::size_t n, const double* weights,
                    std::size_t taps, double* out);
void combine_rows_neon(const double* const* rows, std::size_t taps, const double* weights,
                       std::size_t n, double* out);
#endif

}  // namespace defocus::simd::detail
