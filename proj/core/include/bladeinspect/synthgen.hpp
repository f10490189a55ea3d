#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bladeinspect/raster.hpp"
#include "bladeinspect/rng.hpp"

namespace bladeinspect {

enum class BladeCondition { kHealthy, kCrack, kErosion };

inline constexpr std::array<BladeCondition, 3> kAllConditions = {
    BladeCondition::kHealthy, BladeCondition::kCrack, BladeCondition::kErosion};

const char* to_string(BladeCondition condition);
/// Throws InvalidArgument for anything but healthy, crack or erosion.
BladeCondition parse_condition(std::string_view name);

struct ImageSize {
  std::size_t width = 128;
  std::size_t height = 128;
};

/// Synthetic RGB blade image (gray, equal channels). Draw order from `rng`:
/// background noise row-major, then defect geometry, then defect pixel values.
Raster generate_image(BladeCondition condition, SplitMix64& rng, ImageSize size = {});

struct GenConfig {
  ImageSize size;
  std::array<std::size_t, 3> counts{34, 33, 33};  // healthy, crack, erosion
  std::uint64_t seed = 0;

  std::size_t total() const noexcept { return counts[0] + counts[1] + counts[2]; }
  /// Throws InvalidArgument for an empty corpus or images below 16x16.
  void validate() const;
};

struct GeneratedImage {
  std::string id;  // file name, `<condition>_<index>.ppm`
  BladeCondition condition;
  std::size_t index;
};

/// Corpus listing in generation order (conditions in declaration order).
std::vector<GeneratedImage> plan_dataset(const GenConfig& config);

/// Image `index` of the corpus, drawn from SplitMix64(seed ^ index).
Raster generate_indexed_image(const GenConfig& config, BladeCondition condition,
                              std::size_t index);

/// Writes every image as P6 plus `labels.csv` (`id,label`) into `out_dir`,
/// creating it if needed. Throws Error when the directory is not writable.
std::vector<GeneratedImage> generate_dataset(const GenConfig& config,
                                             const std::filesystem::path& out_dir);

}  // namespace bladeinspect
