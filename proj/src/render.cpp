#include "defocus/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "defocus/errors.hpp"
#include "defocus/psf.hpp"

namespace defocus {

void PatternSpec::validate() const {
  if (rows < 2) throw DomainError("rows", "need at least 2");
  if (cols < 2) throw DomainError("cols", "need at least 2");
  if (!(circle_diameter > 0.0)) throw DomainError("circle_diameter", "must be positive");
  if (!(circle_diameter < diagonal_spacing)) {
    throw DomainError("circle_diameter", "must be smaller than the spacing");
  }
}

std::vector<PatternPoint> pattern_points(const PatternSpec& spec) {
  spec.validate();
  const double pitch_x = spec.asymmetric ? spec.diagonal_spacing * std::sqrt(2.0) : spec.diagonal_spacing;
  const double pitch_y = spec.asymmetric ? spec.diagonal_spacing / std::sqrt(2.0) : spec.diagonal_spacing;

  std::vector<PatternPoint> points;
  points.reserve(static_cast<std::size_t>(spec.circle_count()));
  for (int r = 0; r < spec.rows; ++r) {
    const double shift = spec.asymmetric && (r % 2 == 1) ? 0.5 : 0.0;
    for (int c = 0; c < spec.cols; ++c) points.push_back({(c + shift) * pitch_x, r * pitch_y});
  }
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  for (auto& p : points) {
    p.x -= mx;
    p.y -= my;
  }
  return points;
}

BlurMap blur_map_from_depth(const DepthMap& depth, const BlurModel& model) {
  model.validate();
  BlurMap blur(depth.width(), depth.height());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (!depth.valid(i)) continue;
    blur[i] = compose_sigmas(sigma_from_depth(depth[i], model), model.gamma);
  }
  return blur;
}

Image refocus(const Image& rgb, const DepthMap& depth, const BlurModel& model, int layers) {
  model.validate();
  if (rgb.empty()) throw DomainError("rgb", "empty image");
  if (rgb.width() != depth.width() || rgb.height() != depth.height()) {
    throw DomainError("depth", "dimensions differ from the image");
  }
  if (layers < 2) throw DomainError("layers", "need at least 2");

  const std::size_t n = rgb.pixel_count();
  const int channels = rgb.channels();

  double q_min = std::numeric_limits<double>::infinity();
  double q_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!depth.valid(i)) continue;
    const double q = 1.0 / depth[i];
    q_min = std::min(q_min, q);
    q_max = std::max(q_max, q);
  }
  if (!std::isfinite(q_min)) throw DomainError("depth", "no valid depth samples");

  // Bin 0 is the farthest (smallest inverse depth).
  const double span = q_max - q_min;
  const bool flat = !(span > 1e-12 * q_max);
  std::vector<int> bin(n, 0);
  std::vector<double> q_sum(static_cast<std::size_t>(layers), 0.0);
  std::vector<std::size_t> q_count(static_cast<std::size_t>(layers), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!depth.valid(i)) continue;
    const double q = 1.0 / depth[i];
    int b = 0;
    if (!flat) b = std::min(layers - 1, static_cast<int>((q - q_min) / span * layers));
    bin[i] = b;
    q_sum[static_cast<std::size_t>(b)] += q;
    ++q_count[static_cast<std::size_t>(b)];
  }
  // Invalid pixels sit in the far bin but do not pull its representative depth.
  if (q_count[0] == 0) {
    q_sum[0] = q_min;
    q_count[0] = 1;
  }

  std::vector<double> color(n * static_cast<std::size_t>(channels), 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> plane(n);
  std::vector<double> filtered(n);
  std::vector<double> layer_alpha(n);

  for (int b = 0; b < layers; ++b) {
    const bool has_pixels = std::any_of(bin.begin(), bin.end(), [b](int v) { return v == b; });
    if (!has_pixels) continue;
    const auto ub = static_cast<std::size_t>(b);
    const double layer_depth = static_cast<double>(q_count[ub]) / q_sum[ub];
    const GaussianKernel kernel(compose_sigmas(sigma_from_depth(layer_depth, model), model.gamma));

    for (std::size_t i = 0; i < n; ++i) plane[i] = bin[i] == b ? 1.0 : 0.0;
    convolve_plane(plane, rgb.width(), rgb.height(), kernel, layer_alpha);

    for (std::size_t i = 0; i < n; ++i) {
      const double keep = 1.0 - layer_alpha[i];
      alpha[i] = alpha[i] * keep + layer_alpha[i];
    }
    for (int c = 0; c < channels; ++c) {
      const auto uc = static_cast<std::size_t>(c);
      const auto stride = static_cast<std::size_t>(channels);
      for (std::size_t i = 0; i < n; ++i) plane[i] = bin[i] == b ? rgb.data()[i * stride + uc] : 0.0;
      convolve_plane(plane, rgb.width(), rgb.height(), kernel, filtered);
      for (std::size_t i = 0; i < n; ++i) {
        double& dst = color[i * stride + uc];
        dst = dst * (1.0 - layer_alpha[i]) + filtered[i];
      }
    }
  }

  Image out(rgb.width(), rgb.height(), channels);
  auto dst = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = alpha[i];
    for (int c = 0; c < channels; ++c) {
      const std::size_t k = i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c);
      dst[k] = a > 1e-12 ? std::clamp(color[k] / a, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

RenderedPattern render_pattern(const PatternSpec& spec, double distance, double f_pix, int width,
                               int height, PatternPlacement placement) {
  spec.validate();
  if (!(distance > 0.0)) throw DomainError("distance", "must be positive");
  if (!(f_pix > 0.0)) throw DomainError("f_pix", "must be positive");
  if (width <= 0 || height <= 0) throw DomainError("size", "image must be non-empty");

  const auto points = pattern_points(spec);
  const double scale = f_pix / distance;
  const double radius = 0.5 * spec.circle_diameter * scale;
  const double cx0 = 0.5 * width + placement.offset_x;
  const double cy0 = 0.5 * height + placement.offset_y;

  // Keep every disk at least one pixel clear of the border.
  double extent_x = 0.0;
  double extent_y = 0.0;
  for (const auto& p : points) {
    extent_x = std::max(extent_x, std::abs(p.x * scale) + std::abs(placement.offset_x));
    extent_y = std::max(extent_y, std::abs(p.y * scale) + std::abs(placement.offset_y));
  }
  const int need_w = static_cast<int>(std::ceil(2.0 * (extent_x + radius + 1.0)));
  const int need_h = static_cast<int>(std::ceil(2.0 * (extent_y + radius + 1.0)));
  if (need_w > width || need_h > height) {
    throw DomainError("size", "pattern does not fit in " + std::to_string(width) + "x" +
                                  std::to_string(height) + "; needs at least " +
                                  std::to_string(need_w) + "x" + std::to_string(need_h));
  }

  RenderedPattern out{Image(width, height, 1, 1.0), {}};
  out.circles.reserve(points.size());
  constexpr int ss = kPatternSupersample;
  constexpr double sub = 1.0 / (ss * ss);
  const double r2 = radius * radius;

  for (const auto& p : points) {
    // Continuous image coordinates: pixel i spans [i, i+1).
    const double u = cx0 + p.x * scale;
    const double v = cy0 + p.y * scale;
    out.circles.push_back({u - 0.5, v - 0.5, radius, distance});

    const int x0 = std::max(0, static_cast<int>(std::floor(u - radius)));
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(u + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(v - radius)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(v + radius)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double nx = std::clamp(u, double(x), double(x + 1)) - u;
        const double ny = std::clamp(v, double(y), double(y + 1)) - v;
        if (nx * nx + ny * ny >= r2) continue;  // square entirely outside
        const double fx = std::max(std::abs(x - u), std::abs(x + 1 - u));
        const double fy = std::max(std::abs(y - v), std::abs(y + 1 - v));
        double coverage = 1.0;
        if (fx * fx + fy * fy >= r2) {
          int inside = 0;
          for (int sy = 0; sy < ss; ++sy) {
            const double dy = y + (sy + 0.5) / ss - v;
            for (int sx = 0; sx < ss; ++sx) {
              const double dx = x + (sx + 0.5) / ss - u;
              inside += dx * dx + dy * dy < r2 ? 1 : 0;
            }
          }
          coverage = inside * sub;
        }
        out.image.at(x, y) -= coverage;
      }
    }
  }
  return out;
}

CalibrationPair render_calibration_pair(const PatternSpec& spec, double distance,
                                        const BlurModel& model, double f_pix, int width, int height,
                                        PatternPlacement placement) {
  model.validate();
  RenderedPattern sharp = render_pattern(spec, distance, f_pix, width, height, placement);
  const double lambda = compose_sigmas(sigma_from_depth(distance, model), model.gamma);
  CalibrationPair pair;
  pair.focused = convolve(sharp.image, make_kernel(model.gamma));
  pair.defocused = convolve(sharp.image, make_kernel(lambda));
  pair.truth = std::move(sharp.circles);
  pair.lambda = lambda;
  return pair;
}

}  // namespace defocus
