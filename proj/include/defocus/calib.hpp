#pragma once

// Defocus blur calibration.
//
// Two photographs of a circle grid at the same pose: one focused on the grid
// (blurred only by the camera's intrinsic blur gamma) and one focused at s1
// (blurred by lambda = sqrt(sigma^2 + gamma^2)). Horizontal slices through
// each imaged circle are flat-topped profiles whose falling edges carry the
// blur; integrating the sub-threshold part of a slice gives its standard
// deviation. With gamma from the focused images, lambda per circle from the
// defocused ones and the distance to the grid, each circle yields
//
//     kcam = sqrt(lambda^2 - gamma^2) * s2 / |s1 - s2|
//
// and the per-circle estimates are reduced to a median after an IQR fence.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "defocus/pattern.hpp"
#include "defocus/raster.hpp"

namespace defocus {

/// One horizontal slice through a circle, with the circle as the flat top.
/// Pixel pitch 1.
class EdgeProfile {
 public:
  /// Rescales `samples` so min -> 0 and max -> 1.
  static EdgeProfile normalized(std::span<const double> samples);
  /// Rescales with externally supplied bounds (e.g. image-wide), clamped to [0, 1].
  static EdgeProfile scaled(std::span<const double> samples, double low, double high);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

 private:
  explicit EdgeProfile(std::vector<double> samples) : samples_(std::move(samples)) {}
  std::vector<double> samples_;
};

/// How the sub-threshold integral J maps to a standard deviation.
enum class EdgeModel {
  /// Edges are Gaussian tails: std = J / sqrt(2 pi).
  gaussian_tail,
  /// Edges are Gaussian-blurred steps (erf profiles): std = J / (2 (u t + phi(u)))
  /// with u = Phi^-1(t), the sub-threshold integral of two unit-std edges.
  step_edge,
};

enum class SliceNormalization { per_slice, per_image };

struct EdgeOptions {
  double threshold = 0.95;
  EdgeModel model = EdgeModel::step_edge;
  SliceNormalization normalization = SliceNormalization::per_slice;
  int slices = 5;                // odd, 3..9, spread over center +- radius/2
  double rise_tolerance = 0.01;  // intensity rise that ends a falling edge

  void validate() const;
};

/// Integral, in pixels, of the piecewise-linear profile over the region where
/// it lies below `threshold`.
double sub_threshold_integral(const EdgeProfile& profile, double threshold);

/// Divisor turning a sub-threshold integral into a standard deviation.
double edge_integral_scale(EdgeModel model, double threshold);

/// Standard deviation of a profile's falling edges. Throws CalibrationError
/// for a degenerate profile (nothing below the threshold).
double edge_std_from_profile(const EdgeProfile& profile, double threshold = 0.95,
                             EdgeModel model = EdgeModel::gaussian_tail);

struct CircleDetection {
  std::vector<CircleObservation> circles;  // row-major, distance unset
  std::optional<std::string> warning;      // count mismatch against the expected pattern
};

/// Dark blobs below the mid-range threshold (min+max)/2, by connected
/// components; centroid and equivalent radius sqrt(area/pi). Blobs touching
/// the border or with radius <= 2 px are dropped.
CircleDetection detect_circles(const Image& image, const PatternSpec* expected = nullptr);

/// Fronto-parallel distance from the median nearest-neighbour spacing:
/// f_pix * spacing / median_px, assigned to every circle.
std::vector<CircleObservation> estimate_distances(std::span<const CircleObservation> circles,
                                                  const PatternSpec& spec, double f_pix);

/// Edge profiles of the slices through one circle. Slices that cannot be
/// extracted (off the image, no falling edge on either side) are omitted.
std::vector<EdgeProfile> circle_profiles(const Image& gray, const CircleObservation& circle,
                                         const EdgeOptions& options = {});

/// Median slice std over all circles of a focused image.
double estimate_gamma(const Image& focused, std::span<const CircleObservation> circles,
                      const EdgeOptions& options = {});

struct LambdaEstimate {
  double lambda = 0.0;
  int slices_used = 0;
  bool reliable = false;  // radius >= 2 lambda and at least one usable slice
};

/// Per-circle median slice std of a defocused image.
std::vector<LambdaEstimate> estimate_lambda(const Image& defocused,
                                            std::span<const CircleObservation> circles,
                                            const EdgeOptions& options = {});

/// kcam from one circle. std::nullopt when lambda <= gamma (no measurable
/// defocus). Throws CalibrationError when s2 == s1.
std::optional<double> solve_kcam(double lambda, double gamma, double s1, double s2);

struct KcamSummary {
  double kcam = 0.0;  // median of inliers
  double q1 = 0.0;
  double median = 0.0;  // of all estimates
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t inlier_count = 0;
  std::size_t total = 0;
};

/// Linear-interpolation quantile (R type 7) of sorted values.
double sorted_quantile(std::span<const double> sorted, double q);

/// Drops values outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR] and takes the median.
KcamSummary aggregate_kcam(std::span<const double> estimates);

struct KcamEstimate {
  int pair = 0;
  int circle = 0;
  double center_x = 0.0;
  double center_y = 0.0;
  double distance = 0.0;
  double lambda = 0.0;
  double kcam = 0.0;
};

struct ImagePair {
  Image focused;
  Image defocused;
};

struct CalibrationOptions {
  EdgeOptions edge;
  /// Pairs whose estimated |s1 - s2| / s2 falls below this are rejected as
  /// unsolvable: the distance estimate cannot separate them from s2 = s1.
  double min_defocus_ratio = 0.05;
};

struct CalibrationResult {
  double gamma = 0.0;
  std::vector<KcamEstimate> estimates;
  KcamSummary summary;
  std::size_t discarded = 0;  // circles without a usable estimate
  std::vector<std::string> warnings;

  double kcam() const noexcept { return summary.kcam; }
};

CalibrationResult calibrate(std::span<const ImagePair> pairs, const PatternSpec& spec, double f_pix,
                            double s1, const CalibrationOptions& options = {});

}  // namespace defocus
