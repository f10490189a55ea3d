#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bladeinspect {

/// Row-major 8-bit image, top-left origin; pixel (x, y) is column x of row y.
/// RGB samples are channel-interleaved.
class Raster {
 public:
  static constexpr unsigned kBitDepth = 8;

  Raster() = default;
  /// Throws InvalidArgument unless samples.size() == width * height * channels,
  /// channels is 1 or 3 and both dimensions are nonzero.
  Raster(std::size_t width, std::size_t height, std::size_t channels,
         std::vector<std::uint8_t> samples);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }

  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return samples_[(y * width_ + x) * channels_ + c];
  }
  std::span<const std::uint8_t> samples() const noexcept { return samples_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

enum class PpmEncoding { kAscii /* P3 */, kBinary /* P6 */ };

/// Decodes a P3 or P6 stream with maxval 255. Throws PpmError.
Raster load_ppm(std::span<const std::uint8_t> bytes);
Raster load_ppm_file(const std::filesystem::path& path);

/// Encodes a 3-channel raster. Output of load_ppm(write_ppm(r)) equals r.
std::string write_ppm(const Raster& raster, PpmEncoding encoding = PpmEncoding::kBinary);

/// Luma with weights 0.299/0.587/0.114, rounded half up. Requires 3 channels.
Raster to_grayscale(const Raster& rgb);

struct QuantizationParams {
  std::uint64_t max_gray;      // G = 2^k - 1
  std::uint64_t storage_bits;  // N * M * k
};

/// Throws InvalidArgument on zero inputs and std::overflow_error when the
/// result does not fit in 64 bits.
QuantizationParams quantization_params(std::uint64_t width, std::uint64_t height,
                                       std::uint64_t bits);

}  // namespace bladeinspect
