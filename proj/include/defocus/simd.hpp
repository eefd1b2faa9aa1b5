#pragma once

// Inner loops of the separable convolution.
//
// Every variant evaluates the same sums in the same order, without fused
// multiply-add, so all of them produce bit-identical results. The scalar
// variant is the reference; the others are selected at runtime from what the
// CPU supports.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace defocus::simd {

enum class Level { scalar, avx2, neon };

std::string_view name(Level level);

/// out[i] = sum_k weights[k] * in[i + k] for i in [0, n).
/// `in` holds n + taps - 1 values.
using CorrelateFn = void (*)(const double* in, std::size_t n, const double* weights,
                             std::size_t taps, double* out);

/// out[i] = sum_k weights[k] * rows[k][i] for i in [0, n).
using CombineRowsFn = void (*)(const double* const* rows, std::size_t taps,
                               const double* weights, std::size_t n, double* out);

struct FilterKernels {
  Level level;
  CorrelateFn correlate;
  CombineRowsFn combine_rows;
};

/// Levels compiled in and supported by this CPU, scalar first.
std::vector<Level> available_levels();

/// Best level the CPU supports, unless overridden by `force_level` or the
/// DEFOCUS_SIMD environment variable (scalar|avx2|neon).
Level active_level();

/// Test hook. std::nullopt restores automatic selection. Throws if the
/// requested level is not available.
void force_level(std::optional<Level> level);

FilterKernels kernels_for(Level level);
inline FilterKernels active_kernels() { return kernels_for(active_level()); }

}  // namespace defocus::simd
