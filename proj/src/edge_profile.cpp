#include <algorithm>
#include <cmath>
#include <numbers>

#include "calib_internal.hpp"
#include "defocus/calib.hpp"
#include "defocus/errors.hpp"

namespace defocus {
namespace {

// Samples kept past the end of a falling edge, while still on the background.
constexpr int kBackgroundPad = 5;

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

// Phi^-1 by bisection; only needed once per threshold.
double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void EdgeOptions::validate() const {
  if (!(threshold > 0.0)) throw DomainError("threshold", "must be positive");
  if (model == EdgeModel::step_edge && !(threshold < 1.0)) {
    throw DomainError("threshold", "the step-edge model needs a threshold below 1");
  }
  if (slices < 3 || slices > 9 || slices % 2 == 0) {
    throw DomainError("slices", "must be odd and within 3..9");
  }
  if (!(rise_tolerance >= 0.0)) throw DomainError("rise_tolerance", "must be >= 0");
}

EdgeProfile EdgeProfile::normalized(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("profile", "no samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return scaled(samples, *lo, *hi);
}

EdgeProfile EdgeProfile::scaled(std::span<const double> samples, double low, double high) {
  if (samples.empty()) throw DomainError("profile", "no samples");
  std::vector<double> out(samples.size(), 0.0);
  const double range = high - low;
  if (range > 0.0) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out[i] = std::clamp((samples[i] - low) / range, 0.0, 1.0);
    }
  }
  return EdgeProfile(std::move(out));
}

double sub_threshold_integral(const EdgeProfile& profile, double threshold) {
  const auto p = profile.samples();
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double a = p[i];
    const double b = p[i + 1];
    if (a < threshold && b < threshold) {
      area += 0.5 * (a + b);
    } else if (a < threshold || b < threshold) {
      // Integrate from the low end up to where the segment crosses the threshold.
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      const double fraction = (threshold - lo) / (hi - lo);
      area += fraction * 0.5 * (lo + threshold);
    }
  }
  return area;
}

double edge_integral_scale(EdgeModel model, double threshold) {
  switch (model) {
    case EdgeModel::gaussian_tail:
      return std::sqrt(2.0 * std::numbers::pi);
    case EdgeModel::step_edge: {
      if (!(threshold > 0.0 && threshold < 1.0)) {
        throw DomainError("threshold", "the step-edge model needs 0 < threshold < 1");
      }
      const double u = normal_quantile(threshold);
      return 2.0 * (u * threshold + normal_pdf(u));
    }
  }
  return 0.0;
}

double edge_std_from_profile(const EdgeProfile& profile, double threshold, EdgeModel model) {
  const auto p = profile.samples();
  const bool any_below = std::any_of(p.begin(), p.end(), [&](double v) { return v < threshold; });
  const double area = any_below ? sub_threshold_integral(profile, threshold) : 0.0;
  if (!(area > 0.0)) throw CalibrationError("degenerate edge profile: nothing below the threshold");
  return area / edge_integral_scale(model, threshold);
}

namespace detail {

IntensityBounds inverted_bounds(const Image& gray) {
  const auto [lo, hi] = std::minmax_element(gray.data().begin(), gray.data().end());
  return {1.0 - *hi, 1.0 - *lo};
}

std::vector<EdgeProfile> circle_profiles(const Image& gray, const CircleObservation& circle,
                                         const EdgeOptions& options,
                                         std::optional<IntensityBounds> bounds) {
  const int width = gray.width();
  const int height = gray.height();
  const int cx = static_cast<int>(std::lround(circle.center_x));
  if (cx < 0 || cx >= width) return {};
  const int reach = static_cast<int>(std::ceil(4.0 * circle.radius)) + kBackgroundPad;

  std::vector<double> row(static_cast<std::size_t>(width));
  std::vector<EdgeProfile> profiles;
  for (int k = 0; k < options.slices; ++k) {
    const double offset = circle.radius * (-0.5 + static_cast<double>(k) / (options.slices - 1));
    const int y = static_cast<int>(std::lround(circle.center_y + offset));
    if (y < 0 || y >= height) continue;
    // Inverted so the dark circle is the flat top.
    for (int x = 0; x < width; ++x) row[static_cast<std::size_t>(x)] = 1.0 - gray.at(x, y);

    // Walk outward while the profile keeps falling; the edge ends at the
    // lowest point before the profile rises again (next circle or border).
    auto edge_end = [&](int dir) {
      const int limit = dir < 0 ? std::max(0, cx - reach) : std::min(width - 1, cx + reach);
      int x = cx;
      int lowest = cx;
      double floor = row[static_cast<std::size_t>(cx)];
      while (x != limit) {
        x += dir;
        const double v = row[static_cast<std::size_t>(x)];
        if (v < floor) {
          floor = v;
          lowest = x;
        } else if (v > floor + options.rise_tolerance) {
          break;
        }
      }
      int end = lowest;
      for (int i = 0; i < kBackgroundPad; ++i) {
        const int next = end + dir;
        if (next < 0 || next >= width || row[static_cast<std::size_t>(next)] > floor + options.rise_tolerance) {
          break;
        }
        end = next;
      }
      return end;
    };
    const int left = edge_end(-1);
    const int right = edge_end(+1);
    if (cx - left < kBackgroundPad || right - cx < kBackgroundPad) continue;

    const std::span<const double> slice(row.data() + left, static_cast<std::size_t>(right - left + 1));
    profiles.push_back(bounds ? EdgeProfile::scaled(slice, bounds->low, bounds->high)
                              : EdgeProfile::normalized(slice));
  }
  return profiles;
}

}  // namespace detail

std::vector<EdgeProfile> circle_profiles(const Image& image, const CircleObservation& circle,
                                         const EdgeOptions& options) {
  options.validate();
  const Image gray = to_grayscale(image);
  std::optional<detail::IntensityBounds> bounds;
  if (options.normalization == SliceNormalization::per_image) bounds = detail::inverted_bounds(gray);
  return detail::circle_profiles(gray, circle, options, bounds);
}

}  // namespace defocus
