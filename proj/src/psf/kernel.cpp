#include <cmath>
#include <numbers>

#include "defocus/errors.hpp"
#include "defocus/psf.hpp"

namespace defocus {

double psf_value(double x, double y, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma", "must be positive");
  const double s2 = sigma * sigma;
  return std::exp(-0.5 * (x * x + y * y) / s2) / (2.0 * std::numbers::pi * s2);
}

GaussianKernel::GaussianKernel(double sigma) : sigma_(sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma", "must be >= 0");

  if (sigma < kMinKernelSigma) {
    radius_ = 0;
    profile_ = {1.0};
    taps_ = {1.0};
    return;
  }

  radius_ = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  const int n = 2 * radius_ + 1;

  // psf_value(x, y) = g(x) g(y) with g the 1-D Gaussian, so the renormalized
  // 2-D grid factors into the renormalized 1-D profile.
  profile_.resize(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = i - radius_;
    profile_[static_cast<std::size_t>(i)] = std::exp(-0.5 * x * x / (sigma * sigma));
  }
  // Sum symmetric pairs from the outside in so both halves see identical
  // rounding.
  for (int i = 0; i < radius_; ++i) {
    sum += profile_[static_cast<std::size_t>(i)] + profile_[static_cast<std::size_t>(n - 1 - i)];
  }
  sum += profile_[static_cast<std::size_t>(radius_)];
  for (double& w : profile_) w /= sum;

  taps_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      taps_[static_cast<std::size_t>(y * n + x)] =
          profile_[static_cast<std::size_t>(y)] * profile_[static_cast<std::size_t>(x)];
    }
  }
}

GaussianKernel make_kernel(double sigma) { return GaussianKernel(sigma); }

double compose_sigmas(double sigma, double gamma) {
  if (!(sigma >= 0.0)) throw DomainError("sigma", "must be >= 0");
  if (!(gamma >= 0.0)) throw DomainError("gamma", "must be >= 0");
  return std::hypot(sigma, gamma);
}

DefocusSigma defocus_sigma_from_total(double total, double gamma) {
  if (!(total >= 0.0)) throw DomainError("lambda", "must be >= 0");
  if (!(gamma >= 0.0)) throw DomainError("gamma", "must be >= 0");
  if (total < gamma) return {0.0, true};
  return {std::sqrt((total - gamma) * (total + gamma)), false};
}

}  // namespace defocus
