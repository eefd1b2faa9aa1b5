#include <gtest/gtest.h>

#include <cmath>

#include "defocus/errors.hpp"
#include "defocus/psf.hpp"
#include "defocus/render.hpp"
#include "support.hpp"

using namespace defocus;
using testing_support::max_abs_diff;
using testing_support::random_image;
using testing_support::rng;

namespace {

double variance(const Image& img, int x0, int x1, int y0, int y1, int c = 0) {
  double sum = 0.0;
  double sq = 0.0;
  const double n = double(x1 - x0) * (y1 - y0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      sum += img.at(x, y, c);
      sq += img.at(x, y, c) * img.at(x, y, c);
    }
  }
  return sq / n - (sum / n) * (sum / n);
}

DepthMap ramp_depth(int w, int h, double near, double far) {
  DepthMap d(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) d.at(x, y) = near + (far - near) * (x + 0.5 * y) / (w + 0.5 * h);
  }
  return d;
}

}  // namespace

TEST(BlurMapFromDepth, Examples) {
  const BlurModel m{10.0, 1.0, 2.0};
  const BlurMap focus = blur_map_from_depth(DepthMap(4, 3, 2.0), m);
  for (double v : focus.data()) EXPECT_EQ(v, 1.0);

  const BlurModel sharp{10.0, 0.0, 2.0};
  const BlurMap sharp_map = blur_map_from_depth(DepthMap(4, 3, 3.0), sharp);
  for (double v : sharp_map.data()) EXPECT_EQ(v, sigma_from_depth(3.0, sharp));

  DepthMap planes(2, 1);
  planes[0] = 1.0;
  planes[1] = 4.0;
  const BlurMap b = blur_map_from_depth(planes, m);
  EXPECT_NEAR(b[0], std::sqrt(101.0), 1e-12);
  EXPECT_NEAR(b[1], std::sqrt(26.0), 1e-12);
  EXPECT_NEAR(b[0], 10.0499, 1e-4);
  EXPECT_NEAR(b[1], 5.0990, 1e-4);
}

TEST(BlurMapFromDepth, InvalidDepthGivesInvalidBlur) {
  DepthMap d(3, 1, 1.0);
  d[1] = DepthMap::kInvalid;
  d[2] = -1.0;
  const BlurMap b = blur_map_from_depth(d, BlurModel{5, 0.5, 2});
  EXPECT_TRUE(b.valid(0));
  EXPECT_FALSE(b.valid(1));
  EXPECT_FALSE(b.valid(2));
}

TEST(BlurMapFromDepth, MonotoneInNormalizedDefocus) {
  auto g = rng(40);
  for (int i = 0; i < 500; ++i) {
    const BlurModel m{testing_support::uniform(g, 1, 30), testing_support::uniform(g, 0, 2),
                      testing_support::uniform(g, 0.5, 4)};
    const bool near_side = i % 2 == 0;
    auto draw = [&] {
      return near_side ? testing_support::uniform(g, 0.05, m.focus_distance)
                       : testing_support::uniform(g, m.focus_distance, 50);
    };
    double d1 = draw();
    double d2 = draw();
    const double r1 = std::abs(m.focus_distance - d1) / d1;
    const double r2 = std::abs(m.focus_distance - d2) / d2;
    if (r1 == r2) continue;
    if (r1 > r2) std::swap(d1, d2);
    DepthMap d(2, 1);
    d[0] = d1;
    d[1] = d2;
    const BlurMap b = blur_map_from_depth(d, m);
    EXPECT_LT(b[0], b[1]);
  }
}

TEST(Refocus, InFocusSceneIsUnchanged) {
  auto g = rng(41);
  const Image rgb = random_image(g, 32, 24, 3);
  const Image out = refocus(rgb, DepthMap(32, 24, 2.0), BlurModel{10, 0, 2});
  EXPECT_LT(max_abs_diff(out, rgb), 1e-12);
}

TEST(Refocus, ConstantDepthEqualsGlobalConvolution) {
  auto g = rng(42);
  const Image rgb = random_image(g, 48, 40, 3);
  const BlurModel m{8.79, 1.0, 2.0};
  for (double d : {0.7, 1.3, 5.0}) {
    const Image out = refocus(rgb, DepthMap(48, 40, d), m);
    const Image direct = convolve(rgb, make_kernel(compose_sigmas(sigma_from_depth(d, m), m.gamma)));
    EXPECT_LT(max_abs_diff(out, direct), 1e-4) << "depth " << d;
  }
}

TEST(Refocus, FarPlaneLosesTextureWhenFocusedNear) {
  auto g = rng(43);
  const int w = 64;
  const int h = 48;
  const Image rgb = random_image(g, w, h, 3);
  DepthMap d(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) d.at(x, y) = x < w / 2 ? 1.0 : 4.0;
  }
  const BlurModel m{12.69, 0.5, 1.0};
  const Image out = refocus(rgb, d, m);
  for (int c = 0; c < 3; ++c) {
    const double before = variance(rgb, w / 2 + 8, w, 0, h, c);
    const double after = variance(out, w / 2 + 8, w, 0, h, c);
    EXPECT_LT(after, before);
    EXPECT_LT(after, 0.25 * before);
  }
  // Away from the depth edge the in-focus plane only carries the intrinsic blur.
  const Image sharp = convolve(rgb, make_kernel(m.gamma));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w / 2 - 4; ++x) {
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.at(x, y, c), sharp.at(x, y, c), 1e-9);
    }
  }
}

TEST(Refocus, TwoPlanesDoNotDependOnLayerCount) {
  auto g = rng(44);
  const Image rgb = random_image(g, 48, 32, 3);
  DepthMap d(48, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 48; ++x) d.at(x, y) = (x / 8 + y / 8) % 2 ? 0.7 : 3.0;
  }
  const BlurModel m{5.61, 1.0, 2.0};
  const Image a = refocus(rgb, d, m, 16);
  EXPECT_EQ(refocus(rgb, d, m, 32), a);
  EXPECT_EQ(refocus(rgb, d, m, 2), a);
}

TEST(Refocus, PreservesInteriorMeanIntensity) {
  // Crop margin: three times the largest blur in the scene.
  auto g = rng(45);
  const int size = 192;
  const Image rgb = random_image(g, size, size, 1);
  const DepthMap d = ramp_depth(size, size, 0.8, 2.5);
  const BlurModel m{5.61, 1.0, 2.0};
  const Image out = refocus(rgb, d, m);
  const int margin = static_cast<int>(std::ceil(3 * compose_sigmas(sigma_from_depth(0.8, m), m.gamma)));
  double a = 0.0;
  double b = 0.0;
  int n = 0;
  for (int y = margin; y < size - margin; ++y) {
    for (int x = margin; x < size - margin; ++x) {
      a += rgb.at(x, y);
      b += out.at(x, y);
      ++n;
    }
  }
  EXPECT_NEAR(b / n, a / n, 1e-3);
}

TEST(Refocus, InvalidDepthJoinsTheFarLayer) {
  Image rgb(16, 16, 1, 0.5);
  DepthMap d(16, 16, 1.0);
  d.at(3, 3) = DepthMap::kInvalid;
  const Image out = refocus(rgb, d, BlurModel{4, 0, 2});
  for (double v : out.data()) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Refocus, Errors) {
  const Image rgb(8, 8, 3);
  const BlurModel m{4, 0, 2};
  EXPECT_THROW(refocus(rgb, DepthMap(8, 7, 1.0), m), DomainError);
  EXPECT_THROW(refocus(rgb, DepthMap(8, 8, 1.0), m, 1), DomainError);
  EXPECT_THROW(refocus(rgb, DepthMap(8, 8), m), DomainError);  // nothing valid
}

TEST(RenderPattern, ProjectedRadius) {
  const PatternSpec spec;
  const auto r = render_pattern(spec, 1.0, 1000, 700, 900);
  ASSERT_EQ(r.circles.size(), 44u);
  for (const auto& c : r.circles) {
    EXPECT_DOUBLE_EQ(c.radius, 20.0);
    EXPECT_EQ(*c.distance, 1.0);
  }
  const auto far = render_pattern(spec, 2.0, 1000, 700, 900);
  EXPECT_DOUBLE_EQ(far.circles[0].radius, 10.0);
}

TEST(RenderPattern, DarkCirclesOnLightBackground) {
  const PatternSpec spec;
  const auto r = render_pattern(spec, 1.0, 1000, 700, 900);
  for (const auto& c : r.circles) {
    EXPECT_EQ(r.image.at(int(std::lround(c.center_x)), int(std::lround(c.center_y))), 0.0);
  }
  EXPECT_EQ(r.image.at(0, 0), 1.0);
  for (double v : r.image.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  // Mean darkness matches the disk area within the antialiasing error.
  double dark = 0.0;
  for (double v : r.image.data()) dark += 1.0 - v;
  EXPECT_NEAR(dark / 44, M_PI * 400, M_PI * 400 * 0.01);
}

TEST(RenderPattern, GridGeometry) {
  PatternSpec spec;
  const auto r = render_pattern(spec, 1.0, 1000, 700, 900);
  // Nearest neighbours sit one diagonal spacing apart: 80 px here.
  const auto& a = r.circles[0];
  const auto& b = r.circles[spec.cols];  // first circle of the shifted second row
  EXPECT_NEAR(std::hypot(a.center_x - b.center_x, a.center_y - b.center_y), 80.0, 1e-9);
  EXPECT_LT(r.circles[0].center_y, r.circles[spec.cols].center_y);
  EXPECT_LT(r.circles[0].center_x, r.circles[1].center_x);
}

TEST(RenderPattern, OverflowNamesRequiredSize) {
  try {
    render_pattern(PatternSpec{}, 1.0, 1000, 300, 300);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("needs at least"), std::string::npos);
  }
}

TEST(RenderPattern, SpecValidation) {
  PatternSpec s;
  s.circle_diameter = 0.09;
  EXPECT_THROW(s.validate(), DomainError);
  s = {};
  s.rows = 1;
  EXPECT_THROW(s.validate(), DomainError);
  EXPECT_EQ(PatternSpec{}.circle_count(), 44);
}

TEST(CalibrationPair, Examples) {
  const PatternSpec spec;
  const auto sharp = render_pattern(spec, 1.0, 600, 500, 700);

  const auto no_gamma = render_calibration_pair(spec, 1.0, BlurModel{12.69, 0.0, 2.0}, 600, 500, 700);
  EXPECT_EQ(no_gamma.focused, sharp.image);

  const auto at_focus = render_calibration_pair(spec, 2.0, BlurModel{12.69, 1.0, 2.0}, 600, 500, 700);
  EXPECT_EQ(at_focus.defocused, at_focus.focused);

  const auto pair = render_calibration_pair(spec, 1.0, BlurModel{12.69, 1.0, 2.0}, 600, 500, 700);
  EXPECT_NEAR(pair.lambda, std::sqrt(12.69 * 12.69 + 1), 1e-12);
  EXPECT_NEAR(pair.lambda, 12.729, 1e-3);
  EXPECT_EQ(pair.defocused, convolve(sharp.image, make_kernel(pair.lambda)));
  EXPECT_EQ(pair.focused, convolve(sharp.image, make_kernel(1.0)));
}
