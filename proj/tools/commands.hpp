#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "defocus/calib.hpp"
#include "defocus/depth.hpp"
#include "defocus/pattern.hpp"

namespace defocus::cli {

namespace fs = std::filesystem;

/// Bad flags or configuration; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CurveArgs {
  fs::path params;
  double s2_min = 0.0;
  double s2_max = 0.0;
  int n = 0;
  fs::path out;
};

struct RefocusArgs {
  fs::path rgb;
  fs::path depth;
  fs::path params;
  fs::path out_dir;
  std::string stem = "refocused";
  int layers = 16;
};

struct BlurmapArgs {
  fs::path depth;
  fs::path params;
  fs::path out;
};

struct GenpatternArgs {
  PatternSpec spec;
  double distance = 1.0;
  double f_pix = 0.0;
  int width = 0;
  int height = 0;
  double offset_x = 0.0;
  double offset_y = 0.0;
  fs::path out;
  std::optional<fs::path> truth_csv;
};

struct RefocusPairArgs {
  fs::path sharp;
  fs::path params;
  double distance = 0.0;
  fs::path out_focused;
  fs::path out_defocused;
};

struct CalibrateArgs {
  fs::path manifest;
  fs::path params;
  PatternSpec spec;
  double f_pix = 0.0;
  CalibrationOptions options;
  fs::path out;
  std::optional<fs::path> csv;
};

struct InvertArgs {
  fs::path blur;
  fs::path params;
  BranchPolicy policy = BranchPolicy::near;
  std::optional<fs::path> gt;
  fs::path out;
};

struct SweepArgs {
  fs::path blur;
  fs::path gt;
  fs::path params;
  BranchPolicy policy = BranchPolicy::oracle;
  double kcam_min = 0.0;
  double kcam_max = 0.0;
  int n = 0;
  double range_max = kDefaultRangeMax;
  fs::path out;
};

struct MetricsArgs {
  fs::path pred;
  fs::path gt;
  double range_max = kDefaultRangeMax;
};

void run_kcam(const fs::path& params, std::ostream& out);
void run_curve(const CurveArgs& args);
void run_refocus(const RefocusArgs& args);
void run_blurmap(const BlurmapArgs& args);
void run_genpattern(const GenpatternArgs& args);
void run_refocus_pair(const RefocusPairArgs& args);
void run_calibrate(const CalibrateArgs& args, std::ostream& out);
void run_invert(const InvertArgs& args);
void run_sweep(const SweepArgs& args);
void run_metrics(const MetricsArgs& args, std::ostream& out);

/// Shortest decimal that reads back to the same double.
std::string format_number(double value);

}  // namespace defocus::cli
