#include "defocus/camera_file.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "defocus/errors.hpp"

namespace defocus {
namespace {

constexpr std::array<std::string_view, 8> kKnownKeys = {
    "f_mm", "N", "p_um", "out_pix", "sensor_pix", "s1_m", "kr", "gamma_px"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t offset) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(offset, "not a number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

CameraConfig parse_camera_config(std::string_view text) {
  std::map<std::string, double, std::less<>> values;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    auto line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    const std::string_view line = trim(text.substr(line_start, line_end - line_start));
    const std::size_t offset = line_start;
    line_start = line_end + 1;

    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(offset, "expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    bool known = false;
    for (auto k : kKnownKeys) known = known || k == key;
    if (!known) throw ParseError(offset, "unknown key '" + std::string(key) + "'");
    if (values.count(key) != 0) throw ParseError(offset, "repeated key '" + std::string(key) + "'");
    values.emplace(std::string(key), parse_number(value, offset));
  }

  auto required = [&](std::string_view key) {
    auto it = values.find(key);
    if (it == values.end()) throw MissingKey(std::string(key));
    return it->second;
  };
  auto optional = [&](std::string_view key, double fallback) {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  };

  CameraConfig config;
  config.params.focal_length = required("f_mm") * 1e-3;
  config.params.f_number = required("N");
  config.params.pixel_pitch = required("p_um") * 1e-6;
  config.params.out_pix = required("out_pix");
  config.params.sensor_pix = required("sensor_pix");
  config.params.focus_distance = required("s1_m");
  config.params.kr = optional("kr", 1.0);
  config.gamma = optional("gamma_px", 0.0);
  config.params.validate();
  if (!(config.gamma >= 0.0)) throw DomainError("gamma_px", "must be >= 0");
  return config;
}

CameraConfig load_camera_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_camera_config(buffer.str());
}

}  // namespace defocus
