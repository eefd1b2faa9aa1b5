#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "defocus/depth.hpp"
#include "defocus/errors.hpp"
#include "defocus/render.hpp"
#include "support.hpp"

using namespace defocus;
using testing_support::rng;
using testing_support::uniform;

namespace {

DepthMap random_depth(std::mt19937_64& g, int w, int h, double lo, double hi) {
  DepthMap d(w, h);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = uniform(g, lo, hi);
  return d;
}

// Straightforward left-to-right sums.
DepthMetrics brute_force(const DepthMap& pred, const DepthMap& gt, double range_max) {
  double rel = 0, sq = 0, lg = 0, d1 = 0, d2 = 0, d3 = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double d = gt[i];
    const double p = pred[i];
    if (!(d > 0) || !std::isfinite(d) || d > range_max || !(p > 0) || !std::isfinite(p)) continue;
    ++n;
    rel += std::abs(d - p) / d;
    sq += (d - p) * (d - p);
    lg += std::abs(std::log10(d) - std::log10(p));
    const double r = std::max(d / p, p / d);
    d1 += r < 1.25;
    d2 += r < 1.5625;
    d3 += r < 1.953125;
  }
  DepthMetrics m;
  m.count = n;
  m.rel = rel / n;
  m.mse = sq / n;
  m.rmse = std::sqrt(sq / n);
  m.log10 = lg / n;
  m.delta1 = d1 / n;
  m.delta2 = d2 / n;
  m.delta3 = d3 / n;
  return m;
}

}  // namespace

TEST(InvertBlurMap, OracleRoundTrip) {
  auto g = rng(60);
  const BlurModel m{22.67, 1.0, 2.0};
  const DepthMap gt = random_depth(g, 40, 30, 0.5, 12.0);
  const DepthMap back = invert_blur_map(blur_map_from_depth(gt, m), m, BranchPolicy::oracle, &gt);
  for (std::size_t i = 0; i < gt.size(); ++i) EXPECT_NEAR(back[i], gt[i], 1e-9 * gt[i]);
}

TEST(InvertBlurMap, IntrinsicBlurOnlyMeansInFocus) {
  const BlurModel m{10, 1.5, 2.0};
  const DepthMap d = invert_blur_map(BlurMap(3, 2, 1.5), m, BranchPolicy::near);
  for (double v : d.data()) EXPECT_EQ(v, 2.0);
  // Below gamma clamps to zero defocus too.
  EXPECT_EQ(invert_blur_map(BlurMap(1, 1, 0.5), m, BranchPolicy::far)[0], 2.0);
}

TEST(InvertBlurMap, BranchPolicies) {
  const BlurModel m{10, 0, 2.0};
  const DepthMap far_scene(4, 4, 4.0);
  const BlurMap blur = blur_map_from_depth(far_scene, m);
  const DepthMap near = invert_blur_map(blur, m, BranchPolicy::near);
  const DepthMap far = invert_blur_map(blur, m, BranchPolicy::far);
  for (std::size_t i = 0; i < near.size(); ++i) {
    EXPECT_LE(near[i], 2.0);
    EXPECT_NEAR(near[i], 2.0 / 1.5, 1e-12);
    EXPECT_NEAR(far[i], 4.0, 1e-12);
  }
  // sigma >= kcam has no far solution.
  const DepthMap none = invert_blur_map(BlurMap(2, 1, 15.0), m, BranchPolicy::far);
  EXPECT_FALSE(none.valid(0));
  EXPECT_FALSE(none.valid(1));
}

TEST(InvertBlurMap, InvalidSamplesStayInvalid) {
  const BlurModel m{10, 0, 2.0};
  BlurMap b(3, 1, 2.0);
  b[1] = BlurMap::kInvalid;
  DepthMap gt(3, 1, 1.0);
  gt[2] = DepthMap::kInvalid;
  const DepthMap d = invert_blur_map(b, m, BranchPolicy::oracle, &gt);
  EXPECT_TRUE(d.valid(0));
  EXPECT_FALSE(d.valid(1));
  EXPECT_FALSE(d.valid(2));
}

TEST(InvertBlurMap, Errors) {
  const BlurModel m{10, 0, 2.0};
  const BlurMap b(3, 3, 1.0);
  EXPECT_THROW(invert_blur_map(b, m, BranchPolicy::oracle), DomainError);
  const DepthMap wrong(3, 2, 1.0);
  EXPECT_THROW(invert_blur_map(b, m, BranchPolicy::oracle, &wrong), DomainError);
  EXPECT_THROW(invert_blur_map(b, BlurModel{0, 0, 2}, BranchPolicy::near), DomainError);
}

TEST(InvertBlurMap, OverestimatedKcamPushesNearDepthsTowardFocus) {
  auto g = rng(61);
  const BlurModel m{12.0, 0.5, 2.0};
  const DepthMap gt = random_depth(g, 20, 20, 0.5, 1.9);
  const BlurMap blur = blur_map_from_depth(gt, m);
  for (double c : {1.1, 1.5, 2.0}) {
    BlurModel wrong = m;
    wrong.kcam = c * m.kcam;
    const DepthMap d = invert_blur_map(blur, wrong, BranchPolicy::near);
    for (std::size_t i = 0; i < gt.size(); ++i) EXPECT_GT(d[i], gt[i]);
  }
}

TEST(Metrics, PerfectPrediction) {
  auto g = rng(62);
  const DepthMap gt = random_depth(g, 16, 16, 0.3, 1.9);
  const auto m = compute_metrics(gt, gt);
  EXPECT_EQ(m.rel, 0.0);
  EXPECT_EQ(m.mse, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(m.log10, 0.0);
  EXPECT_EQ(m.delta1, 1.0);
  EXPECT_EQ(m.delta2, 1.0);
  EXPECT_EQ(m.delta3, 1.0);
  EXPECT_EQ(m.count, 256u);
}

TEST(Metrics, DoubledPrediction) {
  const DepthMap gt(4, 4, 1.0);
  const DepthMap pred(4, 4, 2.0);
  const auto m = compute_metrics(pred, gt);
  EXPECT_DOUBLE_EQ(m.rel, 1.0);
  EXPECT_DOUBLE_EQ(m.rmse, 1.0);
  EXPECT_DOUBLE_EQ(m.log10, std::log10(2.0));
  EXPECT_EQ(m.delta1, 0.0);
  EXPECT_EQ(m.delta2, 0.0);
  EXPECT_EQ(m.delta3, 0.0);  // 2 > 1.25^3
}

TEST(Metrics, DeltaThresholdsAreStrict) {
  const DepthMap gt(1, 1, 1.0);
  EXPECT_EQ(compute_metrics(DepthMap(1, 1, 1.25), gt).delta1, 0.0);
  EXPECT_EQ(compute_metrics(DepthMap(1, 1, 1.2), gt).delta1, 1.0);
}

TEST(Metrics, MatchesBruteForce) {
  auto g = rng(63);
  for (int t = 0; t < 100; ++t) {
    DepthMap gt = random_depth(g, 8, 8, 0.2, 3.0);
    DepthMap pred = random_depth(g, 8, 8, 0.2, 3.0);
    gt[t % 64] = DepthMap::kInvalid;
    pred[(7 * t + 3) % 64] = DepthMap::kInvalid;
    const auto a = compute_metrics(pred, gt);
    const auto b = brute_force(pred, gt, kDefaultRangeMax);
    EXPECT_EQ(a.count, b.count);
    EXPECT_NEAR(a.rel, b.rel, 1e-12);
    EXPECT_NEAR(a.mse, b.mse, 1e-12);
    EXPECT_NEAR(a.rmse, b.rmse, 1e-12);
    EXPECT_NEAR(a.log10, b.log10, 1e-12);
    EXPECT_NEAR(a.delta1, b.delta1, 1e-12);
    EXPECT_NEAR(a.delta2, b.delta2, 1e-12);
    EXPECT_NEAR(a.delta3, b.delta3, 1e-12);
  }
}

TEST(Metrics, RangeCutAndErrors) {
  DepthMap gt(2, 1);
  gt[0] = 1.0;
  gt[1] = 5.0;
  const DepthMap pred(2, 1, 1.0);
  EXPECT_EQ(compute_metrics(pred, gt).count, 1u);
  EXPECT_EQ(compute_metrics(pred, gt, 10.0).count, 2u);
  EXPECT_THROW(compute_metrics(pred, DepthMap(2, 1, 3.0)), InsufficientData);
  EXPECT_THROW(compute_metrics(DepthMap(2, 1), gt), InsufficientData);
  EXPECT_THROW(compute_metrics(DepthMap(1, 1, 1.0), gt), DomainError);
}

TEST(KcamSweep, MinimumAtTheTrueGain) {
  auto g = rng(64);
  const BlurModel m{8.79, 1.0, 2.0};
  const DepthMap gt = random_depth(g, 32, 32, 0.5, 2.0);
  const BlurMap blur = blur_map_from_depth(gt, m);
  std::vector<double> kcams;
  for (int i = -6; i <= 6; ++i) kcams.push_back(m.kcam * (1 + 0.05 * i));
  const auto sweep = kcam_sweep(blur, gt, m, kcams, BranchPolicy::oracle);
  ASSERT_EQ(sweep.size(), kcams.size());
  EXPECT_LT(sweep[6].rmse, 1e-9);
  for (std::size_t i = 0; i < sweep.size(); ++i) EXPECT_EQ(sweep[i].kcam, kcams[i]);
  for (int i = 0; i < 6; ++i) EXPECT_GT(sweep[i].rmse, sweep[i + 1].rmse);
  for (int i = 6; i < 12; ++i) EXPECT_LT(sweep[i].rmse, sweep[i + 1].rmse);
}
