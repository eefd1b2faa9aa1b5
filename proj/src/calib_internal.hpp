#pragma once

#include <optional>
#include <vector>

#include "defocus/calib.hpp"

namespace defocus::detail {

// Range of the inverted intensity 1 - I over an image.
struct IntensityBounds {
  double low = 0.0;
  double high = 1.0;
};

IntensityBounds inverted_bounds(const Image& gray);

// `gray` must be single channel. With `bounds`, profiles are scaled
// image-wide instead of per slice.
std::vector<EdgeProfile> circle_profiles(const Image& gray, const CircleObservation& circle,
                                         const EdgeOptions& options,
                                         std::optional<IntensityBounds> bounds);

}  // namespace defocus::detail
