#include "defocus/calib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "calib_internal.hpp"
#include "defocus/errors.hpp"
#include "defocus/psf.hpp"

namespace defocus {
namespace {

constexpr double kMinCircleRadius = 2.0;
constexpr double kMinDistance = 0.05;
constexpr double kMaxDistance = 100.0;

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return sorted_quantile(values, 0.5);
}

struct Blob {
  double sum_x = 0.0;
  double sum_y = 0.0;
  std::size_t area = 0;
  bool touches_border = false;
};

// Slice stds of one circle; degenerate slices are skipped.
std::vector<double> slice_stds(const Image& gray, const CircleObservation& circle,
                               const EdgeOptions& options,
                               std::optional<detail::IntensityBounds> bounds) {
  std::vector<double> out;
  for (const auto& profile : detail::circle_profiles(gray, circle, options, bounds)) {
    try {
      out.push_back(edge_std_from_profile(profile, options.threshold, options.model));
    } catch (const CalibrationError&) {
    }
  }
  return out;
}

std::optional<detail::IntensityBounds> bounds_for(const Image& gray, const EdgeOptions& options) {
  if (options.normalization == SliceNormalization::per_image) return detail::inverted_bounds(gray);
  return std::nullopt;
}

template <typename Fn>
auto with_pair_context(std::size_t pair, Fn&& fn) {
  const std::string prefix = "pair " + std::to_string(pair) + ": ";
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError("", prefix + e.what());
  } catch (const InsufficientData& e) {
    throw InsufficientData(prefix + e.what());
  } catch (const CalibrationError& e) {
    throw CalibrationError(prefix + e.what());
  }
}

}  // namespace

CircleDetection detect_circles(const Image& image, const PatternSpec* expected) {
  CircleDetection result;
  if (image.empty()) return result;
  const Image gray = to_grayscale(image);
  const int width = gray.width();
  const int height = gray.height();
  const auto [lo, hi] = std::minmax_element(gray.data().begin(), gray.data().end());
  if (!(*hi > *lo)) {
    if (expected) result.warning = "no circles found, expected " + std::to_string(expected->circle_count());
    return result;
  }
  const double threshold = 0.5 * (*lo + *hi);

  std::vector<char> seen(gray.pixel_count(), 0);
  std::vector<std::pair<int, int>> stack;
  std::vector<Blob> blobs;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t start = static_cast<std::size_t>(y) * width + x;
      if (seen[start] || !(gray.at(x, y) < threshold)) continue;
      Blob blob;
      seen[start] = 1;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        blob.sum_x += px;
        blob.sum_y += py;
        ++blob.area;
        if (px == 0 || py == 0 || px == width - 1 || py == height - 1) blob.touches_border = true;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx;
            const int ny = py + dy;
            if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
            const std::size_t k = static_cast<std::size_t>(ny) * width + nx;
            if (seen[k] || !(gray.at(nx, ny) < threshold)) continue;
            seen[k] = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
      blobs.push_back(blob);
    }
  }

  std::vector<CircleObservation> circles;
  for (const auto& b : blobs) {
    const double radius = std::sqrt(static_cast<double>(b.area) / std::numbers::pi);
    if (b.touches_border || radius <= kMinCircleRadius) continue;
    const double n = static_cast<double>(b.area);
    circles.push_back({b.sum_x / n, b.sum_y / n, radius, std::nullopt});
  }

  // Row-major: group by y within a median radius, then left to right.
  if (!circles.empty()) {
    std::vector<double> radii;
    for (const auto& c : circles) radii.push_back(c.radius);
    const double row_gap = median_of(radii);
    std::sort(circles.begin(), circles.end(),
              [](const auto& a, const auto& b) { return a.center_y < b.center_y; });
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= circles.size(); ++i) {
      if (i == circles.size() || circles[i].center_y - circles[i - 1].center_y > row_gap) {
        std::sort(circles.begin() + static_cast<std::ptrdiff_t>(begin),
                  circles.begin() + static_cast<std::ptrdiff_t>(i),
                  [](const auto& a, const auto& b) { return a.center_x < b.center_x; });
        begin = i;
      }
    }
    result.circles = std::move(circles);
  }

  if (expected && static_cast<int>(result.circles.size()) != expected->circle_count()) {
    result.warning = "found " + std::to_string(result.circles.size()) + " circles, expected " +
                     std::to_string(expected->circle_count());
  }
  return result;
}

std::vector<CircleObservation> estimate_distances(std::span<const CircleObservation> circles,
                                                  const PatternSpec& spec, double f_pix) {
  spec.validate();
  if (!(f_pix > 0.0)) throw DomainError("f_pix", "must be positive");
  if (circles.size() < 2) throw InsufficientData("need at least 2 circles to measure spacing");

  std::vector<double> nearest;
  nearest.reserve(circles.size());
  for (std::size_t i = 0; i < circles.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < circles.size(); ++j) {
      if (i == j) continue;
      best = std::min(best, std::hypot(circles[i].center_x - circles[j].center_x,
                                       circles[i].center_y - circles[j].center_y));
    }
    nearest.push_back(best);
  }
  const double spacing_px = median_of(std::move(nearest));
  if (!(spacing_px > 0.0)) throw InsufficientData("circles coincide");
  const double distance = f_pix * spec.diagonal_spacing / spacing_px;
  if (!(distance > kMinDistance && distance < kMaxDistance)) {
    throw DomainError("distance", "estimated " + std::to_string(distance) +
                                      " m, outside (0.05, 100); check the spacing units");
  }
  std::vector<CircleObservation> out(circles.begin(), circles.end());
  for (auto& c : out) c.distance = distance;
  return out;
}

double estimate_gamma(const Image& focused, std::span<const CircleObservation> circles,
                      const EdgeOptions& options) {
  options.validate();
  if (circles.empty()) throw InsufficientData("no circles");
  const Image gray = to_grayscale(focused);
  const auto bounds = bounds_for(gray, options);
  std::vector<double> all;
  for (const auto& c : circles) {
    auto stds = slice_stds(gray, c, options, bounds);
    all.insert(all.end(), stds.begin(), stds.end());
  }
  if (all.empty()) throw CalibrationError("every slice of the focused image is degenerate");
  return median_of(std::move(all));
}

std::vector<LambdaEstimate> estimate_lambda(const Image& defocused,
                                            std::span<const CircleObservation> circles,
                                            const EdgeOptions& options) {
  options.validate();
  const Image gray = to_grayscale(defocused);
  const auto bounds = bounds_for(gray, options);
  std::vector<LambdaEstimate> out;
  out.reserve(circles.size());
  for (const auto& c : circles) {
    auto stds = slice_stds(gray, c, options, bounds);
    LambdaEstimate est;
    est.slices_used = static_cast<int>(stds.size());
    if (!stds.empty()) {
      est.lambda = median_of(std::move(stds));
      est.reliable = c.radius >= 2.0 * est.lambda;
    }
    out.push_back(est);
  }
  return out;
}

std::optional<double> solve_kcam(double lambda, double gamma, double s1, double s2) {
  if (!(s1 > 0.0)) throw DomainError("s1", "must be positive");
  if (!(s2 > 0.0)) throw DomainError("s2", "must be positive");
  if (s1 == s2) throw CalibrationError("unsolvable: s2 equals s1, no defocus");
  const DefocusSigma sigma = defocus_sigma_from_total(lambda, gamma);
  if (sigma.clamped || !(sigma.sigma > 0.0)) return std::nullopt;
  return sigma.sigma * s2 / std::abs(s1 - s2);
}

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InsufficientData("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q", "must be within [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

KcamSummary aggregate_kcam(std::span<const double> estimates) {
  if (estimates.size() < 3) {
    throw InsufficientData("need at least 3 kcam estimates, got " + std::to_string(estimates.size()));
  }
  std::vector<double> sorted(estimates.begin(), estimates.end());
  std::sort(sorted.begin(), sorted.end());
  KcamSummary s;
  s.total = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = sorted_quantile(sorted, 0.25);
  s.median = sorted_quantile(sorted, 0.5);
  s.q3 = sorted_quantile(sorted, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo = s.q1 - 1.5 * iqr;
  const double hi = s.q3 + 1.5 * iqr;
  std::vector<double> inliers;
  for (double v : sorted) {
    if (v >= lo && v <= hi) inliers.push_back(v);
  }
  s.inlier_count = inliers.size();
  s.kcam = sorted_quantile(inliers, 0.5);
  return s;
}

CalibrationResult calibrate(std::span<const ImagePair> pairs, const PatternSpec& spec, double f_pix,
                            double s1, const CalibrationOptions& options) {
  spec.validate();
  options.edge.validate();
  if (pairs.empty()) throw InsufficientData("no image pairs");
  if (!(s1 > 0.0)) throw DomainError("s1", "must be positive");
  if (!(options.min_defocus_ratio >= 0.0)) throw DomainError("min_defocus_ratio", "must be >= 0");

  CalibrationResult result;
  struct PairData {
    std::vector<CircleObservation> focused;
    std::vector<CircleObservation> defocused;
    double distance = 0.0;
  };
  std::vector<PairData> data(pairs.size());

  // Gamma pools every slice of every focused image.
  std::vector<double> gamma_slices;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    with_pair_context(i, [&] {
      auto focused = detect_circles(pairs[i].focused, &spec);
      auto defocused = detect_circles(pairs[i].defocused, &spec);
      if (focused.warning) result.warnings.push_back("pair " + std::to_string(i) + " focused: " + *focused.warning);
      if (defocused.warning) {
        result.warnings.push_back("pair " + std::to_string(i) + " defocused: " + *defocused.warning);
      }
      data[i].focused = estimate_distances(focused.circles, spec, f_pix);
      data[i].distance = *data[i].focused.front().distance;
      data[i].defocused = std::move(defocused.circles);
      for (auto& c : data[i].defocused) c.distance = data[i].distance;

      const double ratio = std::abs(s1 - data[i].distance) / data[i].distance;
      if (ratio < options.min_defocus_ratio) {
        throw CalibrationError("unsolvable: pattern at " + std::to_string(data[i].distance) +
                               " m is too close to the focus distance " + std::to_string(s1) + " m");
      }

      const Image gray = to_grayscale(pairs[i].focused);
      const auto bounds = bounds_for(gray, options.edge);
      for (const auto& c : data[i].focused) {
        auto stds = slice_stds(gray, c, options.edge, bounds);
        gamma_slices.insert(gamma_slices.end(), stds.begin(), stds.end());
      }
      return 0;
    });
  }
  if (gamma_slices.empty()) throw CalibrationError("every slice of the focused images is degenerate");
  result.gamma = median_of(std::move(gamma_slices));

  std::vector<double> values;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto lambdas = with_pair_context(
        i, [&] { return estimate_lambda(pairs[i].defocused, data[i].defocused, options.edge); });
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      const auto& c = data[i].defocused[k];
      const auto& est = lambdas[k];
      const auto kcam = est.reliable ? solve_kcam(est.lambda, result.gamma, s1, data[i].distance)
                                     : std::nullopt;
      if (!kcam) {
        ++result.discarded;
        continue;
      }
      result.estimates.push_back({static_cast<int>(i), static_cast<int>(k), c.center_x, c.center_y,
                                  data[i].distance, est.lambda, *kcam});
      values.push_back(*kcam);
    }
  }
  result.summary = aggregate_kcam(values);
  return result;
}

}  // namespace defocus
