#include <algorithm>
#include <vector>

#include "defocus/errors.hpp"
#include "defocus/psf.hpp"
#include "defocus/simd.hpp"
#include "parallel.hpp"

namespace defocus {

void convolve_plane(std::span<const double> in, int width, int height,
                    const GaussianKernel& kernel, std::span<double> out) {
  if (width <= 0 || height <= 0) throw DomainError("image", "empty image");
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  if (in.size() != w * h || out.size() != w * h) throw DomainError("image", "buffer size mismatch");

  if (kernel.is_identity()) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }

  const simd::FilterKernels fk = simd::active_kernels();
  const auto profile = kernel.profile();
  const auto taps = profile.size();
  const int r = kernel.radius();

  // Horizontal pass into a scratch plane, one padded row at a time.
  std::vector<double> tmp(w * h);
  detail::parallel_for(h, [&](std::size_t y) {
    std::vector<double> padded(w + 2 * static_cast<std::size_t>(r));
    const double* row = in.data() + y * w;
    std::fill_n(padded.begin(), r, row[0]);
    std::copy(row, row + w, padded.begin() + r);
    std::fill_n(padded.begin() + r + static_cast<std::ptrdiff_t>(w), r, row[w - 1]);
    fk.correlate(padded.data(), w, profile.data(), taps, tmp.data() + y * w);
  });

  // Vertical pass: each output row is a weighted sum of 2r+1 scratch rows,
  // with row indices clamped at the borders.
  detail::parallel_for(h, [&](std::size_t y) {
    std::vector<const double*> rows(taps);
    for (std::size_t k = 0; k < taps; ++k) {
      const int src = std::clamp(static_cast<int>(y) + static_cast<int>(k) - r, 0, height - 1);
      rows[k] = tmp.data() + static_cast<std::size_t>(src) * w;
    }
    fk.combine_rows(rows.data(), taps, profile.data(), w, out.data() + y * w);
  });
}

Image convolve(const Image& image, const GaussianKernel& kernel) {
  if (image.empty()) throw DomainError("image", "empty image");
  if (kernel.is_identity()) return image;
  if (image.channels() == 1) {
    Image out(image.width(), image.height(), 1);
    convolve_plane(image.data(), image.width(), image.height(), kernel, out.data());
    return out;
  }
  Image out(image.width(), image.height(), image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    const Image plane = image.channel(c);
    Image filtered(image.width(), image.height(), 1);
    convolve_plane(plane.data(), plane.width(), plane.height(), kernel, filtered.data());
    out.set_channel(c, filtered);
  }
  return out;
}

}  // namespace defocus
