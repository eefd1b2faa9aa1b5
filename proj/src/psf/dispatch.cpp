#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "defocus/simd.hpp"
#include "psf/filter_variants.hpp"

namespace defocus::simd {
namespace {

bool cpu_supports(Level level) {
  switch (level) {
    case Level::scalar:
      return true;
    case Level::avx2:
#if defined(DEFOCUS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Level::neon:
#if defined(DEFOCUS_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Level parse_level(std::string_view text) {
  if (text == "scalar") return Level::scalar;
  if (text == "avx2") return Level::avx2;
  if (text == "neon") return Level::neon;
  throw std::invalid_argument("unknown SIMD level '" + std::string(text) + "'");
}

Level detect() {
  if (const char* env = std::getenv("DEFOCUS_SIMD"); env != nullptr && *env != '\0') {
    const Level wanted = parse_level(env);
    if (cpu_supports(wanted)) return wanted;
    return Level::scalar;
  }
  if (cpu_supports(Level::avx2)) return Level::avx2;
  if (cpu_supports(Level::neon)) return Level::neon;
  return Level::scalar;
}

// -1: automatic; otherwise a forced Level.
std::atomic<int> g_forced{-1};

}  // namespace

std::string_view name(Level level) {
  switch (level) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
    case Level::neon: return "neon";
  }
  return "unknown";
}

std::vector<Level> available_levels() {
  std::vector<Level> levels;
  for (Level l : {Level::scalar, Level::avx2, Level::neon}) {
    if (cpu_supports(l)) levels.push_back(l);
  }
  return levels;
}

Level active_level() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Level>(forced);
  static const Level detected = detect();
  return detected;
}

void force_level(std::optional<Level> level) {
  if (level && !cpu_supports(*level)) {
    throw std::invalid_argument("SIMD level " + std::string(name(*level)) + " not available");
  }
  g_forced.store(level ? static_cast<int>(*level) : -1, std::memory_order_relaxed);
}

FilterKernels kernels_for(Level level) {
  if (!cpu_supports(level)) {
    throw std::invalid_argument("SIMD level " + std::string(name(level)) + " not available");
  }
  switch (level) {
#if defined(DEFOCUS_HAVE_AVX2)
    case Level::avx2:
      return {level, &detail::correlate_avx2, &detail::combine_rows_avx2};
#endif
#if defined(DEFOCUS_HAVE_NEON)
    case Level::neon:
      return {level, &detail::correlate_neon, &detail::combine_rows_neon};
#endif
    default:
      return {Level::scalar, &detail::correlate_scalar, &detail::combine_rows_scalar};
  }
}

}  // namespace defocus::simd
