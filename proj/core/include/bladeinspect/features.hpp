#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bladeinspect/raster.hpp"

namespace bladeinspect {

inline constexpr std::size_t kFeatureCount = 37;

/// Slot layout of the hand-crafted image descriptor.
namespace feature_slot {
inline constexpr std::size_t kChannelMean = 0;      // 3 slots, R G B, /255
inline constexpr std::size_t kChannelStddev = 3;    // 3 slots, /255
inline constexpr std::size_t kChannelSkewness = 6;  // 3 slots, unbounded
inline constexpr std::size_t kHistogram = 9;        // 16 slots, sums to 1
inline constexpr std::size_t kHistogramBins = 16;
inline constexpr std::size_t kGradientMean = 25;
inline constexpr std::size_t kEdgeDensity = 26;
inline constexpr std::size_t kDarkSpotFraction = 27;
inline constexpr std::size_t kGridMean = 28;  // 9 slots, row-major 3x3
}  // namespace feature_slot

inline constexpr double kEdgeThreshold = 100.0;
inline constexpr double kDarkSpotSigmas = 2.0;

using FeatureVector = std::array<double, kFeatureCount>;

/// Computes the 37-slot descriptor of an RGB raster. Throws InvalidArgument
/// for non-RGB input or images smaller than 3x3.
FeatureVector extract_features(const Raster& rgb);

/// Default column names `f000` ... `f036`.
std::vector<std::string> feature_column_names();

/// Tabular carrier between pipeline stages. Row width is not fixed to 37 so
/// projected (PCA) tables fit too.
struct FeatureMatrix {
  std::vector<std::string> ids;
  std::optional<std::vector<std::string>> labels;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t width() const noexcept { return columns.size(); }

  /// Throws InvalidArgument when lengths disagree or column names repeat.
  void validate() const;
};

/// `id,label,<columns...>`; reals with 17 significant digits; empty label
/// cells when the matrix is unlabeled.
void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix);
void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& matrix);

/// Parses the format written by write_feature_csv. Labels are present iff any
/// label cell is nonempty. Throws CsvError.
FeatureMatrix read_feature_csv(std::istream& in);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

struct NormalizationParams {
  std::vector<double> mean;
  std::vector<double> stddev;  // population; 0 for constant columns

  std::vector<double> apply(const std::vector<double>& row) const;
};

/// Fits per-column z-scores (population sd). Constant columns map to zero.
NormalizationParams fit_normalization(const std::vector<std::vector<double>>& rows);

/// Column-wise z-score of the whole matrix. Throws InvalidArgument when empty.
std::pair<FeatureMatrix, NormalizationParams> zscore_normalize(const FeatureMatrix& matrix);

struct PcaModel {
  std::vector<double> mean;
  std::vector<std::vector<double>> components;  // d rows, each of input width
  std::vector<double> explained_variance;       // nonincreasing

  std::vector<double> transform(const std::vector<double>& row) const;
  std::vector<double> reconstruct(const std::vector<double>& projected) const;
};

/// Principal axes of the sample covariance (divisor n - 1). Each component is
/// sign-fixed so its largest-magnitude entry (lowest index on ties) is positive.
/// Throws InvalidArgument unless n >= 2 and 1 <= d <= min(n, width).
std::pair<PcaModel, FeatureMatrix> pca_fit_transform(const FeatureMatrix& matrix,
                                                     std::size_t components);

}  // namespace bladeinspect
