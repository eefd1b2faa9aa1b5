#pragma once

// Depth from blur: per-pixel inversion of the thin-lens relation, error
// metrics and kcam sensitivity sweeps.

#include <span>
#include <vector>

#include "defocus/optics.hpp"
#include "defocus/raster.hpp"

namespace defocus {

/// Which of the two thin-lens solutions to keep.
enum class BranchPolicy {
  near,    // s2 <= s1
  far,     // s2 >= s1; invalid where the far branch does not exist
  oracle,  // the candidate closer to a supplied ground truth
};

/// Depth from a map of total blur lambda. The intrinsic blur is removed
/// first (lambda < gamma clamps to sigma = 0). `gt` is required by the oracle
/// policy; pixels with invalid blur, or invalid ground truth under the
/// oracle, come out invalid.
DepthMap invert_blur_map(const BlurMap& blur, const BlurModel& model, BranchPolicy policy,
                         const DepthMap* gt = nullptr);

struct DepthMetrics {
  double rel = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  double log10 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  std::size_t count = 0;  // evaluated pixels
};

inline constexpr double kDefaultRangeMax = 2.0;

/// Metrics over pixels where gt is valid and <= range_max and pred is valid.
/// Throws InsufficientData when no pixel qualifies.
DepthMetrics compute_metrics(const DepthMap& pred, const DepthMap& gt,
                             double range_max = kDefaultRangeMax);

struct SweepPoint {
  double kcam = 0.0;
  double rmse = 0.0;
};

/// Inverts `blur` with each candidate kcam in place of model.kcam and scores
/// against `gt`.
std::vector<SweepPoint> kcam_sweep(const BlurMap& blur, const DepthMap& gt, const BlurModel& model,
                                   std::span<const double> kcams, BranchPolicy policy,
                                   double range_max = kDefaultRangeMax);

}  // namespace defocus
