// SPDX-License-Identifier: Apache-2.0
#include <png.h>

#include <algorithm>
#include <cmath>

#include "cagewarp/io_util.hpp"
#include "cagewarp/render.hpp"

namespace cagewarp {

ImageFormat image_format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ppm") return ImageFormat::PPM;
  if (ext == ".png") return ImageFormat::PNG;
  throw InvalidArgument("unsupported image extension '" + ext + "' (use .ppm or .png)");
}

std::uint8_t quantize(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

std::string encode_ppm(int width, int height, const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != std::size_t(width) * height * 3) throw InvalidArgument("pixel buffer size mismatch");
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

std::string encode_png(int width, int height, const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != std::size_t(width) * height * 3) throw InvalidArgument("pixel buffer size mismatch");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, rgb.data(), 0, nullptr)) {
    throw Error(std::string("png encoding failed: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, rgb.data(), 0, nullptr)) {
    throw Error(std::string("png encoding failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> rgb_bytes(const RenderOutput& out) {
  std::vector<std::uint8_t> bytes(out.rgb.size());
  std::transform(out.rgb.begin(), out.rgb.end(), bytes.begin(), [](float v) { return quantize(v); });
  return bytes;
}

std::vector<std::uint8_t> disparity_bytes(const RenderOutput& out) {
  const float peak = out.disparity.empty() ? 0.0f : *std::max_element(out.disparity.begin(), out.disparity.end());
  std::vector<std::uint8_t> bytes;
  bytes.reserve(out.disparity.size() * 3);
  for (const float d : out.disparity) {
    const auto g = quantize(peak > 0.0f ? d / peak : 0.0);
    bytes.insert(bytes.end(), {g, g, g});
  }
  return bytes;
}

namespace {

void write_bytes(int w, int h, const std::vector<std::uint8_t>& px, const std::filesystem::path& path, ImageFormat f) {
  write_file_atomic(path, f == ImageFormat::PPM ? encode_ppm(w, h, px) : encode_png(w, h, px));
}

}  // namespace

void write_image(const RenderOutput& out, const std::filesystem::path& path, ImageFormat format) {
  write_bytes(out.width, out.height, rgb_bytes(out), path, format);
}

void write_disparity(const RenderOutput& out, const std::filesystem::path& path, ImageFormat format) {
  write_bytes(out.width, out.height, disparity_bytes(out), path, format);
}

}  // namespace cagewarp
