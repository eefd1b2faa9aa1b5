#include "commands.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "defocus/camera_file.hpp"
#include "defocus/errors.hpp"
#include "defocus/optics.hpp"
#include "defocus/psf.hpp"
#include "defocus/raster_io.hpp"
#include "defocus/render.hpp"

namespace defocus::cli {
namespace {

CameraConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("camera parameter file not found: " + path.string());
  try {
    return load_camera_config(path);
  } catch (const MissingKey&) {
    throw;
  } catch (const ParseError& e) {
    throw UsageError(path.string() + ": " + e.what());
  } catch (const DomainError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::vector<ImagePair> load_manifest(const fs::path& manifest) {
  const auto bytes = read_file(manifest);
  const std::string text(bytes.begin(), bytes.end());
  const fs::path base = manifest.parent_path();
  std::vector<ImagePair> pairs;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    const std::size_t offset = start;
    start = end + 1;

    std::istringstream fields(line);
    std::string focused, defocused, extra;
    if (!(fields >> focused) || focused.front() == '#') continue;
    if (!(fields >> defocused) || (fields >> extra)) {
      throw ParseError(offset, "expected 'focused_path defocused_path'");
    }
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
    pairs.push_back({load_image(resolve(focused)), load_image(resolve(defocused))});
  }
  if (pairs.empty()) throw UsageError("manifest lists no image pairs: " + manifest.string());
  return pairs;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void run_kcam(const fs::path& params, std::ostream& out) {
  out << fixed2(kcam_from_params(load_config(params).params)) << '\n';
}

void run_curve(const CurveArgs& args) {
  const BlurModel model = load_config(args.params).blur_model();
  std::string csv = "s2_m,sigma_px\n";
  for (const auto& s : blur_curve(model, args.s2_min, args.s2_max, args.n)) {
    csv += format_number(s.depth) + ',' + format_number(s.sigma) + '\n';
  }
  write_text(args.out, csv);
}

void run_refocus(const RefocusArgs& args) {
  const CameraConfig config = load_config(args.params);
  const BlurModel model = config.blur_model();
  const Image rgb = load_image(args.rgb);
  const DepthMap depth = load_depth(args.depth);
  const Image blurred = refocus(rgb, depth, model, args.layers);

  fs::create_directories(args.out_dir);
  save_image(blurred, args.out_dir / (args.stem + ".png"));
  save_depth(depth, args.out_dir / (args.stem + "_depth.pfm"));
  save_blur(blur_map_from_depth(depth, model), args.out_dir / (args.stem + "_blur.pfm"));
  write_text(args.out_dir / "meta.txt", "kcam=" + format_number(model.kcam) + "\ngamma_px=" +
                                            format_number(model.gamma) + "\ns1_m=" +
                                            format_number(model.focus_distance) + "\n");
}

void run_blurmap(const BlurmapArgs& args) {
  const BlurModel model = load_config(args.params).blur_model();
  save_blur(blur_map_from_depth(load_depth(args.depth), model), args.out);
}

void run_genpattern(const GenpatternArgs& args) {
  const RenderedPattern r = render_pattern(args.spec, args.distance, args.f_pix, args.width,
                                           args.height, {args.offset_x, args.offset_y});
  save_image(r.image, args.out);
  if (args.truth_csv) {
    std::string csv = "circle,center_x,center_y,radius_px,distance_m\n";
    for (std::size_t i = 0; i < r.circles.size(); ++i) {
      const auto& c = r.circles[i];
      csv += std::to_string(i) + ',' + format_number(c.center_x) + ',' + format_number(c.center_y) +
             ',' + format_number(c.radius) + ',' + format_number(*c.distance) + '\n';
    }
    write_text(*args.truth_csv, csv);
  }
}

void run_refocus_pair(const RefocusPairArgs& args) {
  const BlurModel model = load_config(args.params).blur_model();
  const Image sharp = load_image(args.sharp);
  const double lambda = compose_sigmas(sigma_from_depth(args.distance, model), model.gamma);
  save_image(convolve(sharp, make_kernel(model.gamma)), args.out_focused);
  save_image(convolve(sharp, make_kernel(lambda)), args.out_defocused);
}

void run_calibrate(const CalibrateArgs& args, std::ostream& out) {
  const CameraConfig config = load_config(args.params);
  const auto pairs = load_manifest(args.manifest);
  const CalibrationResult r =
      calibrate(pairs, args.spec, args.f_pix, config.params.focus_distance, args.options);

  std::string text;
  for (const auto& w : r.warnings) text += "# warning: " + w + '\n';
  const auto& s = r.summary;
  text += "kcam=" + format_number(r.kcam()) + '\n';
  text += "gamma_px=" + format_number(r.gamma) + '\n';
  text += "q1=" + format_number(s.q1) + '\n';
  text += "median=" + format_number(s.median) + '\n';
  text += "q3=" + format_number(s.q3) + '\n';
  text += "min=" + format_number(s.min) + '\n';
  text += "max=" + format_number(s.max) + '\n';
  text += "inliers=" + std::to_string(s.inlier_count) + '\n';
  text += "estimates=" + std::to_string(s.total) + '\n';
  text += "discarded=" + std::to_string(r.discarded) + '\n';
  text += "pairs=" + std::to_string(pairs.size()) + '\n';
  write_text(args.out, text);
  out << "kcam=" << fixed2(r.kcam()) << " gamma_px=" << fixed2(r.gamma) << '\n';

  if (args.csv) {
    std::string csv = "pair,circle,center_x,center_y,distance_m,lambda_px,kcam\n";
    for (const auto& e : r.estimates) {
      csv += std::to_string(e.pair) + ',' + std::to_string(e.circle) + ',' + format_number(e.center_x) +
             ',' + format_number(e.center_y) + ',' + format_number(e.distance) + ',' +
             format_number(e.lambda) + ',' + format_number(e.kcam) + '\n';
    }
    write_text(*args.csv, csv);
  }
}

void run_invert(const InvertArgs& args) {
  const BlurModel model = load_config(args.params).blur_model();
  if (args.policy == BranchPolicy::oracle && !args.gt) throw UsageError("--policy oracle needs --gt");
  const BlurMap blur = load_blur(args.blur);
  std::optional<DepthMap> gt;
  if (args.gt) gt = load_depth(*args.gt);
  save_depth(invert_blur_map(blur, model, args.policy, gt ? &*gt : nullptr), args.out);
}

void run_sweep(const SweepArgs& args) {
  const BlurModel model = load_config(args.params).blur_model();
  if (args.n < 2) throw UsageError("--n must be at least 2");
  if (!(args.kcam_min > 0.0 && args.kcam_min < args.kcam_max)) {
    throw UsageError("need 0 < --kcam-min < --kcam-max");
  }
  std::vector<double> kcams;
  for (int i = 0; i < args.n; ++i) {
    kcams.push_back(i == args.n - 1 ? args.kcam_max
                                    : args.kcam_min + (args.kcam_max - args.kcam_min) * i / (args.n - 1));
  }
  const auto curve =
      kcam_sweep(load_blur(args.blur), load_depth(args.gt), model, kcams, args.policy, args.range_max);
  std::string csv = "kcam,rmse\n";
  for (const auto& p : curve) csv += format_number(p.kcam) + ',' + format_number(p.rmse) + '\n';
  write_text(args.out, csv);
}

void run_metrics(const MetricsArgs& args, std::ostream& out) {
  const DepthMetrics m = compute_metrics(load_depth(args.pred), load_depth(args.gt), args.range_max);
  out << "rel=" << format_number(m.rel) << '\n'
      << "mse=" << format_number(m.mse) << '\n'
      << "rmse=" << format_number(m.rmse) << '\n'
      << "log10=" << format_number(m.log10) << '\n'
      << "delta1=" << format_number(m.delta1) << '\n'
      << "delta2=" << format_number(m.delta2) << '\n'
      << "delta3=" << format_number(m.delta3) << '\n'
      << "count=" << m.count << '\n';
}

}  // namespace defocus::cli
