#include "defocus/optics.hpp"

#include <cmath>
#include <string>

#include "defocus/errors.hpp"

namespace defocus {
namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(field, "must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

void CameraParams::validate() const {
  require_positive(focal_length, "f");
  require_positive(f_number, "N");
  require_positive(pixel_pitch, "p");
  require_positive(kr, "kr");
  if (!(out_pix >= 1.0)) throw DomainError("out_pix", "must be at least 1");
  if (!(sensor_pix >= 1.0)) throw DomainError("sensor_pix", "must be at least 1");
  if (!(focus_distance > focal_length) || !std::isfinite(focus_distance)) {
    throw DomainError("s1", "focus distance must exceed the focal length");
  }
}

void BlurModel::validate() const {
  require_positive(kcam, "kcam");
  require_positive(focus_distance, "s1");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma", "must be >= 0");
}

double kcam_from_params(const CameraParams& params) {
  params.validate();
  const double f = params.focal_length;
  return (1.0 / (params.focus_distance - f)) * (f * f / params.f_number) *
         (1.0 / params.pixel_pitch) * (params.out_pix / params.sensor_pix) * (1.0 / params.kr);
}

BlurModel blur_model_from_params(const CameraParams& params, double gamma) {
  BlurModel model{kcam_from_params(params), gamma, params.focus_distance};
  model.validate();
  return model;
}

double sigma_from_depth(double depth, const BlurModel& model) {
  if (!(depth > 0.0)) throw DomainError("s2", "depth must be positive");
  return model.kcam * std::abs(model.focus_distance - depth) / depth;
}

double normalize_blur(double sigma, double kcam) {
  if (!(kcam > 0.0)) throw DomainError("kcam", "must be positive");
  if (!(sigma >= 0.0)) throw DomainError("sigma", "must be >= 0");
  return sigma / kcam;
}

DepthCandidates depth_candidates_from_sigma(double sigma, const BlurModel& model) {
  if (!(sigma >= 0.0)) throw DomainError("sigma", "must be >= 0");
  const double ratio = sigma / model.kcam;
  DepthCandidates out;
  out.near = model.focus_distance / (1.0 + ratio);
  if (ratio < 1.0) out.far = model.focus_distance / (1.0 - ratio);
  return out;
}

std::vector<CurveSample> blur_curve(const BlurModel& model, double depth_min,
                                    double depth_max, int n) {
  if (!(depth_min > 0.0)) throw DomainError("s2_min", "must be positive");
  if (!(depth_max > depth_min)) throw DomainError("s2_max", "must exceed s2_min");
  if (n < 2) throw DomainError("n", "need at least two samples");

  std::vector<CurveSample> curve;
  curve.reserve(static_cast<std::size_t>(n));
  const double step = (depth_max - depth_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    // Pin the last sample to the endpoint rather than accumulating rounding.
    const double s2 = i == n - 1 ? depth_max : depth_min + step * i;
    curve.push_back({s2, sigma_from_depth(s2, model)});
  }
  return curve;
}

double fov_width(double sensor_length, double focal_length, double distance) {
  require_positive(sensor_length, "sensor_length");
  require_positive(focal_length, "f");
  require_positive(distance, "d");
  return sensor_length / focal_length * distance;
}

}  // namespace defocus
