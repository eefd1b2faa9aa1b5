#include "defocus/depth.hpp"

#include <cmath>
#include <string>

#include "defocus/errors.hpp"
#include "defocus/psf.hpp"

namespace defocus {
namespace {

// Pairwise summation keeps the sums independent of how pixels are grouped.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace

DepthMap invert_blur_map(const BlurMap& blur, const BlurModel& model, BranchPolicy policy,
                         const DepthMap* gt) {
  model.validate();
  if (policy == BranchPolicy::oracle) {
    if (!gt) throw DomainError("gt", "the oracle policy needs a ground-truth depth map");
  }
  if (gt && (gt->width() != blur.width() || gt->height() != blur.height())) {
    throw DomainError("gt", "dimensions differ from the blur map");
  }

  DepthMap out(blur.width(), blur.height());
  for (std::size_t i = 0; i < blur.size(); ++i) {
    if (!blur.valid(i)) continue;
    const double sigma = defocus_sigma_from_total(blur[i], model.gamma).sigma;
    const DepthCandidates c = depth_candidates_from_sigma(sigma, model);
    switch (policy) {
      case BranchPolicy::near:
        out[i] = c.near;
        break;
      case BranchPolicy::far:
        if (c.far) out[i] = *c.far;
        break;
      case BranchPolicy::oracle: {
        if (!gt->valid(i)) break;
        const double truth = (*gt)[i];
        out[i] = c.far && std::abs(*c.far - truth) < std::abs(c.near - truth) ? *c.far : c.near;
        break;
      }
    }
  }
  return out;
}

DepthMetrics compute_metrics(const DepthMap& pred, const DepthMap& gt, double range_max) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw DomainError("pred", "dimensions differ from the ground truth");
  }
  if (!(range_max > 0.0)) throw DomainError("range_max", "must be positive");

  std::vector<double> rel, sq, lg, d1, d2, d3;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt.valid(i) || gt[i] > range_max || !pred.valid(i)) continue;
    const double d = gt[i];
    const double p = pred[i];
    rel.push_back(std::abs(d - p) / d);
    sq.push_back((d - p) * (d - p));
    lg.push_back(std::abs(std::log10(d) - std::log10(p)));
    const double ratio = std::max(d / p, p / d);
    d1.push_back(ratio < 1.25 ? 1.0 : 0.0);
    d2.push_back(ratio < 1.25 * 1.25 ? 1.0 : 0.0);
    d3.push_back(ratio < 1.25 * 1.25 * 1.25 ? 1.0 : 0.0);
  }
  if (rel.empty()) throw InsufficientData("no pixel to evaluate");

  const double n = static_cast<double>(rel.size());
  DepthMetrics m;
  m.count = rel.size();
  m.rel = pairwise_sum(rel) / n;
  m.mse = pairwise_sum(sq) / n;
  m.rmse = std::sqrt(m.mse);
  m.log10 = pairwise_sum(lg) / n;
  m.delta1 = pairwise_sum(d1) / n;
  m.delta2 = pairwise_sum(d2) / n;
  m.delta3 = pairwise_sum(d3) / n;
  return m;
}

std::vector<SweepPoint> kcam_sweep(const BlurMap& blur, const DepthMap& gt, const BlurModel& model,
                                   std::span<const double> kcams, BranchPolicy policy,
                                   double range_max) {
  std::vector<SweepPoint> out;
  out.reserve(kcams.size());
  for (double k : kcams) {
    BlurModel trial = model;
    trial.kcam = k;
    const DepthMap pred = invert_blur_map(blur, trial, policy, &gt);
    out.push_back({k, compute_metrics(pred, gt, range_max).rmse});
  }
  return out;
}

}  // namespace defocus
