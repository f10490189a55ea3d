#include "bladeinspect/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <utility>

#include "bladeinspect/error.hpp"

namespace bladeinspect {

const char* to_string(BladeCondition condition) {
  switch (condition) {
    case BladeCondition::kHealthy: return "healthy";
    case BladeCondition::kCrack: return "crack";
    case BladeCondition::kErosion: return "erosion";
  }
  return "unknown";
}

BladeCondition parse_condition(std::string_view name) {
  for (auto c : kAllConditions) {
    if (name == to_string(c)) return c;
  }
  throw InvalidArgument("unknown blade condition: " + std::string(name));
}

namespace {

constexpr double kTopGray = 180.0;
constexpr double kBottomGray = 120.0;
constexpr double kNoise = 10.0;

constexpr std::int64_t kCrackMinSteps = 30;
constexpr std::int64_t kCrackMaxSteps = 60;
constexpr std::int64_t kCrackMaxWidth = 3;
constexpr double kCrackTurn = 0.5;  // radians per step, either way
constexpr std::int64_t kCrackMinValue = 30;
constexpr std::int64_t kCrackMaxValue = 60;

constexpr std::int64_t kMinPatches = 3;
constexpr std::int64_t kMaxPatches = 8;
constexpr double kMinRadius = 5.0;
constexpr double kMaxRadius = 15.0;
constexpr double kPitProbability = 0.4;
constexpr std::int64_t kMinDarkening = 40;
constexpr std::int64_t kMaxDarkening = 80;

std::uint8_t to_sample(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

struct Gray {
  std::size_t width;
  std::size_t height;
  std::vector<std::uint8_t> px;

  std::uint8_t& at(std::size_t x, std::size_t y) { return px[y * width + x]; }
};

void draw_crack(Gray& img, SplitMix64& rng) {
  const double w = static_cast<double>(img.width);
  const double h = static_cast<double>(img.height);
  double x = rng.uniform(0.0, w);
  double y = rng.uniform(0.0, h);
  const auto steps = rng.between(kCrackMinSteps, kCrackMaxSteps);
  const auto stroke = rng.between(1, kCrackMaxWidth);
  double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);

  std::vector<std::pair<double, double>> path{{x, y}};
  for (std::int64_t s = 0; s < steps; ++s) {
    heading += rng.uniform(-kCrackTurn, kCrackTurn);
    x += std::cos(heading);
    y += std::sin(heading);
    path.emplace_back(x, y);
  }

  // Stamp a stroke-sized square at every point and segment midpoint.
  std::set<std::pair<std::size_t, std::size_t>> mask;  // (row, column): row-major order
  const auto stamp = [&](double px, double py) {
    const auto cx = static_cast<std::int64_t>(std::floor(px));
    const auto cy = static_cast<std::int64_t>(std::floor(py));
    for (std::int64_t dy = -(stroke - 1) / 2; dy <= stroke / 2; ++dy) {
      for (std::int64_t dx = -(stroke - 1) / 2; dx <= stroke / 2; ++dx) {
        const auto tx = cx + dx;
        const auto ty = cy + dy;
        if (tx >= 0 && ty >= 0 && tx < static_cast<std::int64_t>(img.width) &&
            ty < static_cast<std::int64_t>(img.height)) {
          mask.emplace(static_cast<std::size_t>(ty), static_cast<std::size_t>(tx));
        }
      }
    }
  };
  for (std::size_t i = 0; i < path.size(); ++i) {
    stamp(path[i].first, path[i].second);
    if (i + 1 < path.size()) {
      stamp((path[i].first + path[i + 1].first) / 2.0, (path[i].second + path[i + 1].second) / 2.0);
    }
  }
  for (const auto& [row, col] : mask) {
    img.at(col, row) = static_cast<std::uint8_t>(rng.between(kCrackMinValue, kCrackMaxValue));
  }
}

void draw_erosion(Gray& img, SplitMix64& rng) {
  struct Patch {
    double cx, cy, radius;
  };
  const auto count = rng.between(kMinPatches, kMaxPatches);
  std::vector<Patch> patches;
  for (std::int64_t p = 0; p < count; ++p) {
    const double cx = rng.uniform(0.0, static_cast<double>(img.width));
    const double cy = rng.uniform(0.0, static_cast<double>(img.height));
    const double r = rng.uniform(kMinRadius, kMaxRadius);
    patches.push_back({cx, cy, r});
  }
  for (const auto& p : patches) {
    const auto y0 = static_cast<std::size_t>(std::max(0.0, std::floor(p.cy - p.radius)));
    const auto y1 = static_cast<std::size_t>(
        std::min(static_cast<double>(img.height - 1), std::floor(p.cy + p.radius)));
    const auto x0 = static_cast<std::size_t>(std::max(0.0, std::floor(p.cx - p.radius)));
    const auto x1 = static_cast<std::size_t>(
        std::min(static_cast<double>(img.width - 1), std::floor(p.cx + p.radius)));
    for (std::size_t y = y0; y <= y1; ++y) {
      for (std::size_t x = x0; x <= x1; ++x) {
        const double dx = static_cast<double>(x) + 0.5 - p.cx;
        const double dy = static_cast<double>(y) + 0.5 - p.cy;
        if (dx * dx + dy * dy > p.radius * p.radius) continue;
        if (rng.uniform() >= kPitProbability) continue;
        const auto darker =
            static_cast<std::int64_t>(img.at(x, y)) - rng.between(kMinDarkening, kMaxDarkening);
        img.at(x, y) = static_cast<std::uint8_t>(std::max<std::int64_t>(0, darker));
      }
    }
  }
}

}  // namespace

Raster generate_image(BladeCondition condition, SplitMix64& rng, ImageSize size) {
  if (size.width < 16 || size.height < 16) throw InvalidArgument("generate_image: size below 16x16");
  Gray img{size.width, size.height, std::vector<std::uint8_t>(size.width * size.height)};
  const double span = static_cast<double>(size.height - 1);
  for (std::size_t y = 0; y < size.height; ++y) {
    const double base = kTopGray + (kBottomGray - kTopGray) * static_cast<double>(y) / span;
    for (std::size_t x = 0; x < size.width; ++x) {
      img.at(x, y) = to_sample(base + rng.uniform(-kNoise, kNoise));
    }
  }
  switch (condition) {
    case BladeCondition::kHealthy: break;
    case BladeCondition::kCrack: draw_crack(img, rng); break;
    case BladeCondition::kErosion: draw_erosion(img, rng); break;
  }

  std::vector<std::uint8_t> rgb;
  rgb.reserve(img.px.size() * 3);
  for (auto v : img.px) rgb.insert(rgb.end(), {v, v, v});
  return Raster(size.width, size.height, 3, std::move(rgb));
}

void GenConfig::validate() const {
  if (total() == 0) throw InvalidArgument("gen: class counts sum to zero");
  if (size.width < 16 || size.height < 16) throw InvalidArgument("gen: image size below 16x16");
}

std::vector<GeneratedImage> plan_dataset(const GenConfig& config) {
  config.validate();
  std::vector<GeneratedImage> plan;
  std::size_t index = 0;
  for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
    for (std::size_t i = 0; i < config.counts[c]; ++i, ++index) {
      plan.push_back({std::string(to_string(kAllConditions[c])) + "_" + std::to_string(index) + ".ppm",
                      kAllConditions[c], index});
    }
  }
  return plan;
}

Raster generate_indexed_image(const GenConfig& config, BladeCondition condition,
                              std::size_t index) {
  SplitMix64 rng(config.seed ^ static_cast<std::uint64_t>(index));
  return generate_image(condition, rng, config.size);
}

std::vector<GeneratedImage> generate_dataset(const GenConfig& config,
                                             const std::filesystem::path& out_dir) {
  const auto plan = plan_dataset(config);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

  for (const auto& image : plan) {
    const auto path = out_dir / image.id;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << write_ppm(generate_indexed_image(config, image.condition, image.index));
    if (!out) throw Error("write failed: " + path.string());
  }
  const auto labels = out_dir / "labels.csv";
  std::ofstream out(labels, std::ios::binary);
  if (!out) throw Error("cannot write " + labels.string());
  out << "id,label\n";
  for (const auto& image : plan) out << image.id << ',' << to_string(image.condition) << '\n';
  if (!out) throw Error("write failed: " + labels.string());
  return plan;
}

}  // namespace bladeinspect
