#include "defocus/raster.hpp"

#include "defocus/errors.hpp"

namespace defocus {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0) throw DomainError("size", "negative image dimensions");
  if (channels != 1 && channels != 3) throw DomainError("channels", "must be 1 or 3");
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

Image Image::channel(int c) const {
  if (c < 0 || c >= channels_) throw DomainError("channel", "out of range");
  Image plane(width_, height_, 1);
  const std::size_t n = pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    plane.data_[i] = data_[i * static_cast<std::size_t>(channels_) + static_cast<std::size_t>(c)];
  }
  return plane;
}

void Image::set_channel(int c, const Image& plane) {
  if (c < 0 || c >= channels_) throw DomainError("channel", "out of range");
  if (plane.width_ != width_ || plane.height_ != height_ || plane.channels_ != 1) {
    throw DomainError("plane", "shape mismatch");
  }
  const std::size_t n = pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    data_[i * static_cast<std::size_t>(channels_) + static_cast<std::size_t>(c)] = plane.data_[i];
  }
}

Image to_grayscale(const Image& image) {
  if (image.channels() == 1) return image;
  Image gray(image.width(), image.height(), 1);
  auto src = image.data();
  auto dst = gray.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
  }
  return gray;
}

}  // namespace defocus
