#include "bladeinspect/raster.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>

#include "bladeinspect/error.hpp"

namespace bladeinspect {

Raster::Raster(std::size_t width, std::size_t height, std::size_t channels,
               std::vector<std::uint8_t> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  if (width == 0 || height == 0) throw InvalidArgument("raster: zero dimension");
  if (channels != 1 && channels != 3) throw InvalidArgument("raster: channels must be 1 or 3");
  if (samples_.size() != width * height * channels) {
    throw InvalidArgument("raster: sample count does not match dimensions");
  }
}

namespace {

class PpmReader {
 public:
  explicit PpmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  // Skips whitespace and '#' comments that run to end of line.
  void skip_separators() {
    while (!at_end()) {
      auto c = bytes_[pos_];
      if (c == '#') {
        while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal token; the failure kind depends on the caller.
  std::size_t read_uint(PpmErrorKind on_missing, const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    if (at_end()) throw PpmError(on_missing, pos_, std::string("expected ") + what);
    std::size_t value = 0;
    while (!at_end() && std::isdigit(bytes_[pos_])) {
      const std::size_t digit = bytes_[pos_] - '0';
      if (value > (std::numeric_limits<std::size_t>::max() - digit) / 10) {
        throw PpmError(PpmErrorKind::kMalformedHeader, start, std::string(what) + " overflows");
      }
      value = value * 10 + digit;
      ++pos_;
    }
    if (pos_ == start) throw PpmError(on_missing, start, std::string("expected ") + what);
    if (!at_end() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      throw PpmError(on_missing, pos_, std::string("unexpected character after ") + what);
    }
    return value;
  }

  std::uint8_t byte() { return bytes_[pos_++]; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Raster load_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '3' && bytes[1] != '6')) {
    throw PpmError(PpmErrorKind::kBadMagic, 0, "expected P3 or P6");
  }
  const bool binary = bytes[1] == '6';
  PpmReader reader(bytes.subspan(0));
  reader.byte();
  reader.byte();
  if (!reader.at_end() && !std::isspace(bytes[2]) && bytes[2] != '#') {
    throw PpmError(PpmErrorKind::kBadMagic, 2, "magic not followed by whitespace");
  }

  const std::size_t width_at = reader.pos();
  const std::size_t width = reader.read_uint(PpmErrorKind::kMalformedHeader, "width");
  const std::size_t height_at = reader.pos();
  const std::size_t height = reader.read_uint(PpmErrorKind::kMalformedHeader, "height");
  if (width == 0) throw PpmError(PpmErrorKind::kZeroDimension, width_at, "width is 0");
  if (height == 0) throw PpmError(PpmErrorKind::kZeroDimension, height_at, "height is 0");
  reader.skip_separators();
  const std::size_t maxval_at = reader.pos();
  const std::size_t maxval = reader.read_uint(PpmErrorKind::kMalformedHeader, "maxval");
  if (maxval != 255) {
    throw PpmError(PpmErrorKind::kBadMaxval, maxval_at, "maxval " + std::to_string(maxval));
  }
  if (width > std::numeric_limits<std::size_t>::max() / 3 / height) {
    throw PpmError(PpmErrorKind::kMalformedHeader, width_at, "dimensions overflow");
  }

  const std::size_t count = width * height * 3;
  std::vector<std::uint8_t> samples;
  samples.reserve(count);
  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (reader.at_end()) throw PpmError(PpmErrorKind::kTruncated, reader.pos(), "no raster");
    reader.byte();
    if (reader.remaining() < count) {
      throw PpmError(PpmErrorKind::kTruncated, reader.pos() + reader.remaining(),
                     "expected " + std::to_string(count) + " samples, found " +
                         std::to_string(reader.remaining()));
    }
    for (std::size_t i = 0; i < count; ++i) samples.push_back(reader.byte());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      reader.skip_separators();
      if (reader.at_end()) {
        throw PpmError(PpmErrorKind::kTruncated, reader.pos(),
                       "expected " + std::to_string(count) + " samples, found " +
                           std::to_string(i));
      }
      const std::size_t at = reader.pos();
      const std::size_t v = reader.read_uint(PpmErrorKind::kMalformedHeader, "sample");
      if (v > 255) throw PpmError(PpmErrorKind::kMalformedHeader, at, "sample exceeds maxval");
      samples.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return Raster(width, height, 3, std::move(samples));
}

Raster load_ppm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return load_ppm(bytes);
  } catch (const PpmError& e) {
    throw PpmError(e.kind(), e.offset(), path.string());
  }
}

std::string write_ppm(const Raster& raster, PpmEncoding encoding) {
  if (raster.channels() != 3) throw InvalidArgument("write_ppm: raster must be RGB");
  std::string out = encoding == PpmEncoding::kBinary ? "P6\n" : "P3\n";
  out += std::to_string(raster.width()) + " " + std::to_string(raster.height()) + "\n255\n";
  const auto samples = raster.samples();
  if (encoding == PpmEncoding::kBinary) {
    out.append(reinterpret_cast<const char*>(samples.data()), samples.size());
  } else {
    const std::size_t per_row = raster.width() * 3;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out += std::to_string(samples[i]);
      out += (i + 1) % per_row == 0 ? '\n' : ' ';
    }
  }
  return out;
}

Raster to_grayscale(const Raster& rgb) {
  if (rgb.channels() != 3) throw InvalidArgument("to_grayscale: raster must be RGB");
  const auto in = rgb.samples();
  std::vector<std::uint8_t> gray(rgb.pixel_count());
  for (std::size_t p = 0; p < gray.size(); ++p) {
    // Integer thousandths keep the half-up rounding exact.
    const unsigned weighted = 299u * in[3 * p] + 587u * in[3 * p + 1] + 114u * in[3 * p + 2];
    const unsigned value = (weighted + 500u) / 1000u;
    gray[p] = static_cast<std::uint8_t>(value > 255u ? 255u : value);
  }
  return Raster(rgb.width(), rgb.height(), 1, std::move(gray));
}

QuantizationParams quantization_params(std::uint64_t width, std::uint64_t height,
                                       std::uint64_t bits) {
  if (width == 0 || height == 0 || bits == 0) {
    throw InvalidArgument("quantization_params: N, M and k must be positive");
  }
  if (bits > 64) throw std::overflow_error("quantization_params: 2^k - 1 exceeds 64 bits");
  const std::uint64_t max_gray =
      bits == 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << bits) - 1;
  std::uint64_t pixels = 0;
  std::uint64_t storage = 0;
  if (__builtin_mul_overflow(width, height, &pixels) ||
      __builtin_mul_overflow(pixels, bits, &storage)) {
    throw std::overflow_error("quantization_params: N * M * k exceeds 64 bits");
  }
  return {max_gray, storage};
}

}  // namespace bladeinspect
