#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace defocus {

/// Row-major image with 1 or 3 interleaved channels, intensities in [0, 1].
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels = 1, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  double& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// One channel as a single-channel image.
  Image channel(int c) const;
  void set_channel(int c, const Image& plane);

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<double> data_;
};

/// Luma with fixed 0.299 / 0.587 / 0.114 weights. Grayscale input is copied.
Image to_grayscale(const Image& image);

/// Row-major scalar field. NaN marks an invalid sample. The tag selects which
/// finite values count as valid (see `is_valid_value`).
template <typename Tag>
class ScalarField {
 public:
  static constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

  ScalarField() = default;
  ScalarField(int width, int height, double fill = kInvalid)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  double& at(int x, int y) { return data_[index(x, y)]; }
  double at(int x, int y) const { return data_[index(x, y)]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  bool valid(std::size_t i) const noexcept { return Tag::is_valid_value(data_[i]); }
  bool valid(int x, int y) const noexcept { return valid(index(x, y)); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

struct DepthTag {
  static bool is_valid_value(double v) noexcept {
    return v > 0.0 && v < std::numeric_limits<double>::infinity();
  }
};

struct BlurTag {
  static bool is_valid_value(double v) noexcept {
    return v >= 0.0 && v < std::numeric_limits<double>::infinity();
  }
};

/// Per-pixel object distance, meters.
using DepthMap = ScalarField<DepthTag>;
/// Per-pixel PSF standard deviation (lambda or sigma), output pixels.
using BlurMap = ScalarField<BlurTag>;

}  // namespace defocus
