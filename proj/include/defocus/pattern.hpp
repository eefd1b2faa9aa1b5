#pragma once

#include <optional>
#include <vector>

namespace defocus {

/// Circle-grid calibration target.
///
/// `diagonal_spacing` is the center distance between nearest neighbours. In
/// the asymmetric layout (OpenCV's asymmetric circles grid) each of the
/// `rows` rows holds `cols` circles at a pitch of spacing*sqrt(2), rows are
/// spacing/sqrt(2) apart and odd rows are shifted by half a pitch, so nearest
/// neighbours sit on the diagonals. The symmetric layout is a plain square
/// grid with pitch `diagonal_spacing`.
struct PatternSpec {
  int rows = 11;
  int cols = 4;
  double diagonal_spacing = 0.08;  // meters
  double circle_diameter = 0.04;   // meters
  bool asymmetric = true;

  void validate() const;
  int circle_count() const noexcept { return rows * cols; }
};

struct PatternPoint {
  double x = 0.0;  // meters, pattern plane, origin at the grid centroid
  double y = 0.0;
};

/// Circle centers in row-major order (top row first, left to right).
std::vector<PatternPoint> pattern_points(const PatternSpec& spec);

/// One imaged circle. Pixel coordinates put pixel (i, j)'s center at (i, j).
struct CircleObservation {
  double center_x = 0.0;          // pixels
  double center_y = 0.0;          // pixels
  double radius = 0.0;            // pixels
  std::optional<double> distance; // s2 to the circle center, meters
};

}  // namespace defocus
