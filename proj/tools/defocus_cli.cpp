#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "commands.hpp"
#include "defocus/camera_file.hpp"
#include "defocus/errors.hpp"

namespace {

using namespace defocus;
using namespace defocus::cli;

void add_pattern_flags(CLI::App* cmd, PatternSpec& spec, bool& symmetric) {
  cmd->add_option("--rows", spec.rows, "circle rows")->capture_default_str();
  cmd->add_option("--cols", spec.cols, "circles per row")->capture_default_str();
  cmd->add_option("--spacing-m", spec.diagonal_spacing, "nearest-neighbour spacing, meters")
      ->capture_default_str();
  cmd->add_option("--diameter-m", spec.circle_diameter, "circle diameter, meters")->capture_default_str();
  cmd->add_flag("--symmetric", symmetric, "square grid instead of the asymmetric layout");
}

const std::map<std::string, BranchPolicy> kPolicies = {
    {"near", BranchPolicy::near}, {"far", BranchPolicy::far}, {"oracle", BranchPolicy::oracle}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera-aware defocus blur toolkit"};
  app.require_subcommand(1);

  std::filesystem::path params;
  auto* kcam = app.add_subcommand("kcam", "print the blur gain of a camera");
  kcam->add_option("--params", params, "camera parameter file")->required();

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "blur vs distance as CSV");
  curve_cmd->add_option("--params", curve.params)->required();
  curve_cmd->add_option("--s2-min", curve.s2_min, "meters")->required();
  curve_cmd->add_option("--s2-max", curve.s2_max, "meters")->required();
  curve_cmd->add_option("--n", curve.n, "samples")->required();
  curve_cmd->add_option("--out", curve.out)->required();

  RefocusArgs refocus_args;
  auto* refocus_cmd = app.add_subcommand("refocus", "synthetic defocus from an RGB-D pair");
  refocus_cmd->add_option("--rgb", refocus_args.rgb)->required();
  refocus_cmd->add_option("--depth", refocus_args.depth, "PFM depth, meters")->required();
  refocus_cmd->add_option("--params", refocus_args.params)->required();
  refocus_cmd->add_option("--out", refocus_args.out_dir, "output directory")->required();
  refocus_cmd->add_option("--stem", refocus_args.stem)->capture_default_str();
  refocus_cmd->add_option("--layers", refocus_args.layers)->capture_default_str();

  BlurmapArgs blurmap;
  auto* blurmap_cmd = app.add_subcommand("blurmap", "ground-truth blur map from depth");
  blurmap_cmd->add_option("--depth", blurmap.depth)->required();
  blurmap_cmd->add_option("--params", blurmap.params)->required();
  blurmap_cmd->add_option("--out", blurmap.out)->required();

  GenpatternArgs gen;
  bool gen_symmetric = false;
  std::filesystem::path gen_truth;
  auto* gen_cmd = app.add_subcommand("genpattern", "render a sharp circle-grid target");
  add_pattern_flags(gen_cmd, gen.spec, gen_symmetric);
  gen_cmd->add_option("--distance", gen.distance, "meters")->capture_default_str();
  gen_cmd->add_option("--f-pix", gen.f_pix, "focal length, pixels")->required();
  gen_cmd->add_option("--width", gen.width)->required();
  gen_cmd->add_option("--height", gen.height)->required();
  gen_cmd->add_option("--offset-x", gen.offset_x, "pixels")->capture_default_str();
  gen_cmd->add_option("--offset-y", gen.offset_y, "pixels")->capture_default_str();
  gen_cmd->add_option("--out", gen.out)->required();
  auto* gen_truth_opt = gen_cmd->add_option("--truth", gen_truth, "CSV of true circles");

  RefocusPairArgs pair;
  auto* pair_cmd = app.add_subcommand("refocus-pair", "focused and defocused shots of a sharp target");
  pair_cmd->add_option("--sharp", pair.sharp)->required();
  pair_cmd->add_option("--params", pair.params)->required();
  pair_cmd->add_option("--distance", pair.distance, "target distance, meters")->required();
  pair_cmd->add_option("--out-focused", pair.out_focused)->required();
  pair_cmd->add_option("--out-defocused", pair.out_defocused)->required();

  CalibrateArgs cal;
  bool cal_symmetric = false;
  std::filesystem::path cal_csv;
  std::string edge_model = "step";
  std::string normalization = "slice";
  auto* cal_cmd = app.add_subcommand("calibrate", "estimate kcam and gamma from image pairs");
  cal_cmd->add_option("--manifest", cal.manifest, "lines of 'focused defocused'")->required();
  cal_cmd->add_option("--params", cal.params, "camera file; s1_m is the focus distance")->required();
  cal_cmd->add_option("--f-pix", cal.f_pix, "focal length, pixels")->required();
  add_pattern_flags(cal_cmd, cal.spec, cal_symmetric);
  cal_cmd->add_option("--threshold", cal.options.edge.threshold)->capture_default_str();
  cal_cmd->add_option("--edge-model", edge_model)
      ->check(CLI::IsMember({"step", "tail"}))
      ->capture_default_str();
  cal_cmd->add_option("--normalization", normalization)
      ->check(CLI::IsMember({"slice", "image"}))
      ->capture_default_str();
  cal_cmd->add_option("--slices", cal.options.edge.slices)->capture_default_str();
  cal_cmd->add_option("--out", cal.out, "key=value result")->required();
  auto* cal_csv_opt = cal_cmd->add_option("--csv", cal_csv, "per-circle estimates");

  InvertArgs inv;
  std::filesystem::path inv_gt;
  auto* inv_cmd = app.add_subcommand("invert", "depth from a blur map");
  inv_cmd->add_option("--blur", inv.blur)->required();
  inv_cmd->add_option("--params", inv.params)->required();
  inv_cmd->add_option("--policy", inv.policy)
      ->transform(CLI::CheckedTransformer(kPolicies))
      ->required();
  auto* inv_gt_opt = inv_cmd->add_option("--gt", inv_gt, "ground-truth depth (oracle policy)");
  inv_cmd->add_option("--out", inv.out)->required();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "depth RMSE as a function of the assumed kcam");
  sweep_cmd->add_option("--blur", sweep.blur)->required();
  sweep_cmd->add_option("--gt", sweep.gt)->required();
  sweep_cmd->add_option("--params", sweep.params)->required();
  sweep_cmd->add_option("--policy", sweep.policy)
      ->transform(CLI::CheckedTransformer(kPolicies))
      ->capture_default_str();
  sweep_cmd->add_option("--kcam-min", sweep.kcam_min)->required();
  sweep_cmd->add_option("--kcam-max", sweep.kcam_max)->required();
  sweep_cmd->add_option("--n", sweep.n)->required();
  sweep_cmd->add_option("--range-max", sweep.range_max, "meters")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out)->required();

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "depth error metrics");
  metrics_cmd->add_option("--pred", metrics.pred)->required();
  metrics_cmd->add_option("--gt", metrics.gt)->required();
  metrics_cmd->add_option("--range-max", metrics.range_max, "meters")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (kcam->parsed()) {
      run_kcam(params, std::cout);
    } else if (curve_cmd->parsed()) {
      run_curve(curve);
    } else if (refocus_cmd->parsed()) {
      run_refocus(refocus_args);
    } else if (blurmap_cmd->parsed()) {
      run_blurmap(blurmap);
    } else if (gen_cmd->parsed()) {
      gen.spec.asymmetric = !gen_symmetric;
      if (*gen_truth_opt) gen.truth_csv = gen_truth;
      run_genpattern(gen);
    } else if (pair_cmd->parsed()) {
      run_refocus_pair(pair);
    } else if (cal_cmd->parsed()) {
      cal.spec.asymmetric = !cal_symmetric;
      cal.options.edge.model = edge_model == "tail" ? EdgeModel::gaussian_tail : EdgeModel::step_edge;
      cal.options.edge.normalization =
          normalization == "image" ? SliceNormalization::per_image : SliceNormalization::per_slice;
      if (*cal_csv_opt) cal.csv = cal_csv;
      run_calibrate(cal, std::cout);
    } else if (inv_cmd->parsed()) {
      if (*inv_gt_opt) inv.gt = inv_gt;
      run_invert(inv);
    } else if (sweep_cmd->parsed()) {
      run_sweep(sweep);
    } else if (metrics_cmd->parsed()) {
      run_metrics(metrics, std::cout);
    }
  } catch (const MissingKey& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    // Flag values outside an operation's domain.
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
