#pragma once

// Thin-lens defocus blur.
//
// A scene point at distance s2 from a camera focused at s1 is imaged as a
// Gaussian blob of standard deviation
//
//     sigma = kcam * |s1 - s2| / s2                       (output pixels)
//
// where kcam collects everything camera specific:
//
//     kcam = 1/(s1 - f) * f^2/N * 1/p * out_pix/sensor_pix * 1/kr
//
// Dividing a measured sigma by kcam leaves |s1 - s2| / s2, which no longer
// depends on the camera.

#include <optional>
#include <vector>

namespace defocus {

/// Physical description of a camera, lens and focus setting. SI units.
struct CameraParams {
  double focal_length = 0.0;   // f, meters
  double f_number = 0.0;       // N
  double pixel_pitch = 0.0;    // p, meters
  double out_pix = 0.0;        // output image pixels along one axis
  double sensor_pix = 0.0;     // sensor pixels along the same axis
  double focus_distance = 0.0; // s1, meters
  double kr = 1.0;             // camera constant

  /// Throws DomainError naming the first field that violates its bounds.
  void validate() const;
};

/// The operative blur model: gain, intrinsic blur and focus distance.
/// Everything depth <-> blur conversion needs.
struct BlurModel {
  double kcam = 0.0;           // output pixels
  double gamma = 0.0;          // intrinsic blur std, output pixels
  double focus_distance = 0.0; // s1, meters

  void validate() const;
};

/// Both thin-lens solutions for a given blur. `far` is absent when
/// sigma >= kcam (the far branch runs off to infinity at sigma = kcam).
struct DepthCandidates {
  double near = 0.0;
  std::optional<double> far;
};

struct CurveSample {
  double depth = 0.0;  // s2, meters
  double sigma = 0.0;  // output pixels
};

double kcam_from_params(const CameraParams& params);

/// BlurModel for a camera, carrying the camera's focus distance.
BlurModel blur_model_from_params(const CameraParams& params, double gamma);

double sigma_from_depth(double depth, const BlurModel& model);

/// sigma / kcam, i.e. |s1 - s2| / s2.
double normalize_blur(double sigma, double kcam);

DepthCandidates depth_candidates_from_sigma(double sigma, const BlurModel& model);

/// `n` evenly spaced samples of sigma over [depth_min, depth_max].
std::vector<CurveSample> blur_curve(const BlurModel& model, double depth_min,
                                    double depth_max, int n);

/// Width of an object at distance `distance` that exactly fills a sensor of
/// length `sensor_length` behind a lens of focal length `focal_length`.
double fov_width(double sensor_length, double focal_length, double distance);

}  // namespace defocus
