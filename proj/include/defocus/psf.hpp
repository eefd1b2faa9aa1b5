#pragma once

#include <span>
#include <vector>

#include "defocus/raster.hpp"

namespace defocus {

/// Below this standard deviation (pixels) a kernel is the identity.
inline constexpr double kMinKernelSigma = 0.05;

/// Discretized, truncated, renormalized isotropic Gaussian.
///
/// radius = max(1, ceil(3 sigma)); sigma < kMinKernelSigma gives the 1x1
/// identity. The 2-D taps are the outer product of the 1-D profile, which is
/// the same as sampling the 2-D Gaussian and renormalizing.
class GaussianKernel {
 public:
  explicit GaussianKernel(double sigma);

  double sigma() const noexcept { return sigma_; }
  int radius() const noexcept { return radius_; }
  int size() const noexcept { return 2 * radius_ + 1; }
  bool is_identity() const noexcept { return radius_ == 0; }

  /// 1-D separable profile, 2*radius+1 weights summing to 1.
  std::span<const double> profile() const noexcept { return profile_; }
  /// Row-major (2*radius+1)^2 weights summing to 1.
  std::span<const double> taps() const noexcept { return taps_; }
  double tap(int dx, int dy) const noexcept {
    return taps_[static_cast<std::size_t>((dy + radius_) * size() + (dx + radius_))];
  }

 private:
  double sigma_;
  int radius_;
  std::vector<double> profile_;
  std::vector<double> taps_;
};

/// Unit-mass 2-D Gaussian density, 1/(2 pi sigma^2) exp(-(x^2+y^2)/(2 sigma^2)).
double psf_value(double x, double y, double sigma);

GaussianKernel make_kernel(double sigma);

/// Standard deviation of two Gaussians convolved together.
double compose_sigmas(double sigma, double gamma);

struct DefocusSigma {
  double sigma = 0.0;
  /// Set when total < gamma (noise) and the result was clamped to 0.
  bool clamped = false;
};

/// Inverse of compose_sigmas: removes the intrinsic blur `gamma` from a
/// measured total blur.
DefocusSigma defocus_sigma_from_total(double total, double gamma);

/// 2-D convolution with edge replication, as two separable passes. Each
/// channel is filtered independently.
Image convolve(const Image& image, const GaussianKernel& kernel);

/// Single-plane form of `convolve` on a raw row-major buffer.
void convolve_plane(std::span<const double> in, int width, int height,
                    const GaussianKernel& kernel, std::span<double> out);

}  // namespace defocus
