#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "defocus/optics.hpp"

namespace defocus {

/// Contents of a camera parameter file, converted to SI units / pixels.
struct CameraConfig {
  CameraParams params;
  double gamma = 0.0;  // output pixels

  BlurModel blur_model() const { return blur_model_from_params(params, gamma); }
};

/// A required key is missing from a camera parameter file.
class MissingKey : public std::runtime_error {
 public:
  explicit MissingKey(std::string key)
      : std::runtime_error("missing key '" + key + "'"), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Flat key=value text. Recognised keys, with units in the name:
//
//   f_mm        focal length, millimetres         (required)
//   N           f-number                          (required)
//   p_um        pixel pitch, micrometres          (required)
//   out_pix     output pixels along one axis      (required)
//   sensor_pix  sensor pixels along the same axis (required)
//   s1_m        focus distance, metres            (required)
//   kr          camera constant                   (default 1)
//   gamma_px    intrinsic blur std, pixels        (default 0)
//
// Blank lines and lines starting with '#' are ignored. Unknown or repeated
// keys and unparsable values are ParseErrors; absent required keys throw
// MissingKey.
CameraConfig parse_camera_config(std::string_view text);
CameraConfig load_camera_config(const std::filesystem::path& path);

}  // namespace defocus
