#pragma once

// Forward synthesis of defocus blur: ground-truth blur maps, layered
// refocusing of RGB-D images, and calibration-target rendering.

#include <vector>

#include "defocus/optics.hpp"
#include "defocus/pattern.hpp"
#include "defocus/raster.hpp"

namespace defocus {

inline constexpr int kDefaultLayers = 16;
inline constexpr int kPatternSupersample = 4;

/// Per-pixel total blur lambda = sqrt(sigma(s2)^2 + gamma^2). Invalid depth
/// gives an invalid (NaN) blur sample.
BlurMap blur_map_from_depth(const DepthMap& depth, const BlurModel& model);

/// Synthetic defocus from an all-in-focus image and its depth map.
///
/// The valid depth range is split into `layers` bins of equal width in
/// inverse depth. Each bin is blurred with the lambda of its pixels' mean
/// inverse depth: both the premultiplied color and the coverage mask are
/// convolved, then layers are composited far to near with the blurred mask as
/// alpha and the result is divided by the accumulated alpha. Invalid depth
/// pixels join the farthest layer.
Image refocus(const Image& rgb, const DepthMap& depth, const BlurModel& model,
              int layers = kDefaultLayers);

struct RenderedPattern {
  Image image;
  std::vector<CircleObservation> circles;  // ground truth, distance filled
};

/// Sub-pixel placement of the pattern in the image, pixels.
struct PatternPlacement {
  double offset_x = 0.0;
  double offset_y = 0.0;
};

/// Fronto-parallel pinhole rendering of the target at `distance` meters:
/// dark circles (0) on a light background (1), 4x4 supersampled. The
/// principal point is the image center. Throws DomainError when the pattern
/// does not fit, naming the image size it needs.
RenderedPattern render_pattern(const PatternSpec& spec, double distance, double f_pix,
                               int width, int height, PatternPlacement placement = {});

struct CalibrationPair {
  Image focused;    // blurred by gamma only
  Image defocused;  // blurred by compose_sigmas(sigma(distance), gamma)
  std::vector<CircleObservation> truth;
  double lambda = 0.0;
};

CalibrationPair render_calibration_pair(const PatternSpec& spec, double distance,
                                        const BlurModel& model, double f_pix, int width,
                                        int height, PatternPlacement placement = {});

}  // namespace defocus
