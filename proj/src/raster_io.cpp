#include "defocus/raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "defocus/errors.hpp"

namespace defocus {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

// Cursor over an ASCII header shared by the PNM and PFM parsers.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  // Skips whitespace and '#' comment lines. The first comment seen is kept.
  void skip_space() {
    while (pos_ < bytes_.size()) {
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        if (!have_comment_) {
          std::string line(reinterpret_cast<const char*>(bytes_.data()) + start + 1, pos_ - start - 1);
          const auto first = line.find_first_not_of(' ');
          comment_ = first == std::string::npos ? std::string{} : line.substr(first);
          have_comment_ = true;
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::string token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
           bytes_[pos_] != '#') {
      ++pos_;
    }
    if (start == pos_) throw ParseError(pos_, "unexpected end of header");
    return std::string(reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start);
  }

  long integer(const char* what) {
    const std::size_t at = pos_;
    const std::string t = token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || v <= 0) {
      throw ParseError(at, std::string("invalid ") + what + " '" + t + "'");
    }
    return v;
  }

  // Exactly one whitespace byte separates the header from the payload.
  std::size_t end_of_header() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw ParseError(pos_, "expected whitespace before payload");
    }
    return ++pos_;
  }

  const std::string& comment() const { return comment_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::string comment_;
  bool have_comment_ = false;
};

void check_dimensions(long width, long height, std::size_t offset) {
  constexpr long kMax = 1L << 16;
  if (width > kMax || height > kMax) throw ParseError(offset, "image dimensions too large");
}

Image decode_pnm(std::span<const std::uint8_t> bytes) {
  HeaderReader header(bytes);
  const std::string magic = header.token();
  int channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw UnsupportedFormat("PNM variant '" + magic + "' (only binary P5/P6 are read)");
  }
  const long width = header.integer("width");
  const long height = header.integer("height");
  check_dimensions(width, height, header.offset());
  const std::size_t maxval_at = header.offset();
  const long maxval = header.integer("maxval");
  if (maxval > 255) throw UnsupportedFormat("PNM maxval " + std::to_string(maxval) + " (16-bit)");
  if (maxval < 1) throw ParseError(maxval_at, "maxval must be positive");
  const std::size_t start = header.end_of_header();

  const std::size_t expected =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * static_cast<std::size_t>(channels);
  if (bytes.size() - start != expected) {
    throw ParseError(std::min(bytes.size(), start + expected),
                     "payload has " + std::to_string(bytes.size() - start) + " bytes, header implies " +
                         std::to_string(expected));
  }
  Image image(static_cast<int>(width), static_cast<int>(height), channels);
  auto data = image.data();
  const double denom = static_cast<double>(maxval);
  for (std::size_t i = 0; i < expected; ++i) {
    const std::uint8_t v = bytes[start + i];
    if (v > maxval) throw ParseError(start + i, "sample exceeds maxval");
    data[i] = v / denom;
  }
  return image;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  // Walk the chunk structure first so truncation and corruption are reported
  // with a byte offset, and the bit depth is checked before decoding.
  std::size_t pos = 8;
  int bit_depth = 0;
  int color_type = -1;
  bool seen_end = false;
  while (!seen_end) {
    if (bytes.size() - pos < 12) throw ParseError(pos, "truncated PNG chunk header");
    const std::uint32_t length = read_be32(bytes.data() + pos);
    const std::string type(reinterpret_cast<const char*>(bytes.data()) + pos + 4, 4);
    if (length > bytes.size() - pos - 12) throw ParseError(pos, "PNG chunk '" + type + "' overruns file");
    if (pos == 8) {
      if (type != "IHDR" || length != 13) throw ParseError(pos, "first PNG chunk is not IHDR");
      bit_depth = bytes[pos + 16];
      color_type = bytes[pos + 17];
    }
    seen_end = type == "IEND";
    pos += 12 + length;
  }
  if (bit_depth != 8) {
    throw UnsupportedFormat("PNG bit depth " + std::to_string(bit_depth) + " (only 8-bit is read)");
  }
  if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB &&
      color_type != PNG_COLOR_TYPE_PALETTE) {
    throw UnsupportedFormat("PNG color type " + std::to_string(color_type) + " (alpha is not read)");
  }

  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw ParseError(8, "PNG: " + msg);
  }
  const int channels = color_type == PNG_COLOR_TYPE_GRAY ? 1 : 3;
  png.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw ParseError(33, "PNG: " + msg);
  }
  Image image(static_cast<int>(png.width), static_cast<int>(png.height), channels);
  auto data = image.data();
  for (std::size_t i = 0; i < pixels.size(); ++i) data[i] = pixels[i] / 255.0;
  return image;
}

std::vector<std::uint8_t> quantized_pixels(const Image& image) {
  if (image.empty()) throw DomainError("image", "cannot save an empty image");
  std::vector<std::uint8_t> out(image.data().size());
  std::transform(image.data().begin(), image.data().end(), out.begin(), quantize);
  return out;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

template <typename Field>
FloatMap to_float_map(const Field& field, std::string comment) {
  FloatMap map{field.width(), field.height(), {}, std::move(comment)};
  map.data.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    map.data[i] = field.valid(i) ? static_cast<float>(field[i]) : std::numeric_limits<float>::quiet_NaN();
  }
  return map;
}

template <typename Field>
Field from_float_map(const FloatMap& map) {
  Field field(map.width, map.height);
  for (std::size_t i = 0; i < map.data.size(); ++i) {
    const double v = map.data[i];
    field[i] = std::isnan(v) ? Field::kInvalid : v;
  }
  return field;
}

}  // namespace

std::uint8_t quantize(double value) {
  const double v = std::clamp(value, 0.0, 1.0) * 255.0;
  return static_cast<std::uint8_t>(std::lround(v));
}

Image decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw ParseError(0, "empty file");
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes[0] == 'P') return decode_pnm(bytes);
  throw ParseError(0, "unrecognised image format");
}

std::vector<std::uint8_t> encode_pnm(const Image& image) {
  const auto pixels = quantized_pixels(image);
  const std::string header = std::string(image.channels() == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(image.width()) + " " + std::to_string(image.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  const auto pixels = quantized_pixels(image);
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = image.channels() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png, size, 0, pixels.data(), 0, nullptr)) {
    throw std::runtime_error(std::string("PNG encode: ") + png.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw std::runtime_error(std::string("PNG encode: ") + png.message);
  }
  out.resize(size);
  return out;
}

Image load_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

void save_image(const Image& image, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_file(path, encode_png(image));
  } else if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
    if (ext == ".pgm" && image.channels() != 1) throw DomainError("image", ".pgm needs one channel");
    if (ext == ".ppm" && image.channels() != 3) throw DomainError("image", ".ppm needs three channels");
    write_file(path, encode_pnm(image));
  } else {
    throw UnsupportedFormat("unknown image extension '" + ext + "'");
  }
}

FloatMap decode_pfm(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw ParseError(0, "empty file");
  HeaderReader header(bytes);
  const std::string magic = header.token();
  if (magic == "PF") throw UnsupportedFormat("three-channel PF map (expected single-channel Pf)");
  if (magic != "Pf") throw ParseError(0, "bad magic '" + magic + "', expected Pf");
  const long width = header.integer("width");
  const long height = header.integer("height");
  check_dimensions(width, height, header.offset());
  const std::size_t scale_at = header.offset();
  const std::string scale_token = header.token();
  char* end = nullptr;
  const double scale = std::strtod(scale_token.c_str(), &end);
  if (end != scale_token.c_str() + scale_token.size() || scale == 0.0 || !std::isfinite(scale)) {
    throw ParseError(scale_at, "invalid scale '" + scale_token + "'");
  }
  const std::size_t start = header.end_of_header();

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - start != count * 4) {
    throw ParseError(std::min(bytes.size(), start + count * 4),
                     "payload has " + std::to_string(bytes.size() - start) + " bytes, header implies " +
                         std::to_string(count * 4));
  }

  const bool little = scale < 0.0;
  FloatMap map{static_cast<int>(width), static_cast<int>(height), std::vector<float>(count), header.comment()};
  for (long row = 0; row < height; ++row) {
    // File rows run bottom to top.
    const std::size_t dst_row = static_cast<std::size_t>(height - 1 - row);
    for (long x = 0; x < width; ++x) {
      const std::uint8_t* p = bytes.data() + start + (static_cast<std::size_t>(row * width + x)) * 4;
      std::uint32_t bits = little ? (std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
                                     std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24)
                                  : read_be32(p);
      map.data[dst_row * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] =
          std::bit_cast<float>(bits);
    }
  }
  return map;
}

std::vector<std::uint8_t> encode_pfm(const FloatMap& map) {
  if (map.width <= 0 || map.height <= 0) throw DomainError("map", "cannot save an empty map");
  if (map.data.size() != static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height)) {
    throw DomainError("map", "data size does not match dimensions");
  }
  std::string header = "Pf\n";
  if (!map.comment.empty()) header += "# " + map.comment + "\n";
  header += std::to_string(map.width) + " " + std::to_string(map.height) + "\n-1.0\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + map.data.size() * 4);
  for (int row = map.height - 1; row >= 0; --row) {
    for (int x = 0; x < map.width; ++x) {
      const auto bits = std::bit_cast<std::uint32_t>(
          map.data[static_cast<std::size_t>(row) * static_cast<std::size_t>(map.width) + static_cast<std::size_t>(x)]);
      out.push_back(static_cast<std::uint8_t>(bits));
      out.push_back(static_cast<std::uint8_t>(bits >> 8));
      out.push_back(static_cast<std::uint8_t>(bits >> 16));
      out.push_back(static_cast<std::uint8_t>(bits >> 24));
    }
  }
  return out;
}

DepthMap load_depth(const std::filesystem::path& path) {
  return from_float_map<DepthMap>(decode_pfm(read_file(path)));
}

void save_depth(const DepthMap& depth, const std::filesystem::path& path) {
  write_file(path, encode_pfm(to_float_map(depth, "")));
}

BlurMap load_blur(const std::filesystem::path& path) {
  return from_float_map<BlurMap>(decode_pfm(read_file(path)));
}

void save_blur(const BlurMap& blur, const std::filesystem::path& path) {
  write_file(path, encode_pfm(to_float_map(blur, "blurmap px")));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace defocus
