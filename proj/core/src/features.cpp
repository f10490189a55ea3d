#include "bladeinspect/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <Eigen/Dense>

#include "bladeinspect/csv.hpp"
#include "bladeinspect/error.hpp"

namespace bladeinspect {

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double third = 0.0;
};

template <typename Sample>
Moments central_moments(std::span<const Sample> values, std::size_t stride, std::size_t offset) {
  const std::size_t n = values.size() / stride;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += values[i * stride + offset];
  Moments m;
  m.mean = sum / static_cast<double>(n);
  double m2 = 0.0;
  double m3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i * stride + offset] - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m.variance = m2 / static_cast<double>(n);
  m.third = m3 / static_cast<double>(n);
  return m;
}

}  // namespace

FeatureVector extract_features(const Raster& rgb) {
  if (rgb.channels() != 3) throw InvalidArgument("extract_features: raster must be RGB");
  if (rgb.width() < 3 || rgb.height() < 3) {
    throw InvalidArgument("extract_features: image smaller than 3x3");
  }
  namespace slot = feature_slot;
  FeatureVector f{};

  const auto samples = rgb.samples();
  for (std::size_t c = 0; c < 3; ++c) {
    const Moments m = central_moments(samples, 3, c);
    const double sd = std::sqrt(m.variance);
    f[slot::kChannelMean + c] = m.mean / 255.0;
    f[slot::kChannelStddev + c] = sd / 255.0;
    f[slot::kChannelSkewness + c] = m.variance > 0.0 ? m.third / (sd * sd * sd) : 0.0;
  }

  const Raster gray = to_grayscale(rgb);
  const auto g = gray.samples();
  const std::size_t w = gray.width();
  const std::size_t h = gray.height();
  const double pixels = static_cast<double>(g.size());

  std::array<std::size_t, slot::kHistogramBins> bins{};
  for (auto v : g) ++bins[v / 16];
  for (std::size_t b = 0; b < bins.size(); ++b) {
    f[slot::kHistogram + b] = static_cast<double>(bins[b]) / pixels;
  }

  const auto at = [&](std::size_t x, std::size_t y) { return static_cast<int>(g[y * w + x]); };
  double magnitude_sum = 0.0;
  std::size_t edges = 0;
  for (std::size_t y = 1; y + 1 < h; ++y) {
    for (std::size_t x = 1; x + 1 < w; ++x) {
      const int gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                     (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const int gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                     (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      const double magnitude = std::sqrt(static_cast<double>(gx * gx + gy * gy));
      magnitude_sum += magnitude;
      if (magnitude > kEdgeThreshold) ++edges;
    }
  }
  const double interior = static_cast<double>((w - 2) * (h - 2));
  f[slot::kGradientMean] = magnitude_sum / interior / (255.0 * std::sqrt(32.0));
  f[slot::kEdgeDensity] = static_cast<double>(edges) / interior;

  const Moments gm = central_moments(g, 1, 0);
  if (gm.variance > 0.0) {
    const double cut = gm.mean - kDarkSpotSigmas * std::sqrt(gm.variance);
    const auto dark = std::count_if(g.begin(), g.end(), [&](std::uint8_t v) { return v < cut; });
    f[slot::kDarkSpotFraction] = static_cast<double>(dark) / pixels;
  }

  // Remainder rows/columns belong to the last cell.
  const std::array<std::size_t, 4> xs{0, w / 3, 2 * (w / 3), w};
  const std::array<std::size_t, 4> ys{0, h / 3, 2 * (h / 3), h};
  for (std::size_t cy = 0; cy < 3; ++cy) {
    for (std::size_t cx = 0; cx < 3; ++cx) {
      double sum = 0.0;
      for (std::size_t y = ys[cy]; y < ys[cy + 1]; ++y) {
        for (std::size_t x = xs[cx]; x < xs[cx + 1]; ++x) sum += at(x, y);
      }
      const double cells = static_cast<double>((ys[cy + 1] - ys[cy]) * (xs[cx + 1] - xs[cx]));
      f[slot::kGridMean + cy * 3 + cx] = sum / cells / 255.0;
    }
  }
  return f;
}

std::vector<std::string> feature_column_names() {
  std::vector<std::string> names;
  names.reserve(kFeatureCount);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "f%03zu", i);
    names.emplace_back(buffer);
  }
  return names;
}

void FeatureMatrix::validate() const {
  if (ids.size() != rows.size()) throw InvalidArgument("feature matrix: ids/rows length mismatch");
  if (labels && labels->size() != rows.size()) {
    throw InvalidArgument("feature matrix: labels/rows length mismatch");
  }
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (!seen.insert(c).second) throw InvalidArgument("feature matrix: duplicate column " + c);
  }
  for (const auto& r : rows) {
    if (r.size() != columns.size()) throw InvalidArgument("feature matrix: ragged row");
  }
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix) {
  matrix.validate();
  std::vector<std::string> header{"id", "label"};
  header.insert(header.end(), matrix.columns.begin(), matrix.columns.end());
  out << csv::join(header) << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << csv::escape(matrix.ids[i]) << ',';
    if (matrix.labels) out << csv::escape((*matrix.labels)[i]);
    for (double v : matrix.rows[i]) out << ',' << csv::format_real(v);
    out << '\n';
  }
}

void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_feature_csv(out, matrix);
  if (!out) throw Error("write failed: " + path.string());
}

FeatureMatrix read_feature_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!csv::next_record(in, line, line_no)) throw CsvError(CsvErrorKind::kEmpty, 1, "no header");
  auto header = csv::split_line(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw CsvError(CsvErrorKind::kBadHeader, line_no, "expected id,label,<features...>");
  }
  FeatureMatrix m;
  m.columns.assign(header.begin() + 2, header.end());
  std::set<std::string> seen_columns;
  for (const auto& c : m.columns) {
    if (!seen_columns.insert(c).second) {
      throw CsvError(CsvErrorKind::kBadHeader, line_no, "duplicate column " + c);
    }
  }

  std::vector<std::string> labels;
  std::set<std::string> seen_ids;
  bool any_label = false;
  while (csv::next_record(in, line, line_no)) {
    auto fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      throw CsvError(CsvErrorKind::kWrongColumnCount, line_no,
                     "expected " + std::to_string(header.size()) + " fields, found " +
                         std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw CsvError(CsvErrorKind::kMissingId, line_no, "");
    if (!seen_ids.insert(fields[0]).second) {
      throw CsvError(CsvErrorKind::kDuplicateId, line_no, fields[0]);
    }
    std::vector<double> row(m.columns.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!csv::parse_real(fields[j + 2], row[j])) {
        throw CsvError(CsvErrorKind::kBadNumber, line_no,
                       "column " + header[j + 2] + ": '" + fields[j + 2] + "'");
      }
    }
    any_label = any_label || !fields[1].empty();
    m.ids.push_back(std::move(fields[0]));
    labels.push_back(std::move(fields[1]));
    m.rows.push_back(std::move(row));
  }
  if (any_label) m.labels = std::move(labels);
  return m;
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_feature_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(e.kind(), e.line(), path.string());
  }
}

std::vector<double> NormalizationParams::apply(const std::vector<double>& row) const {
  if (row.size() != mean.size()) throw InvalidArgument("normalization: row width mismatch");
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = stddev[j] > 0.0 ? (row[j] - mean[j]) / stddev[j] : 0.0;
  }
  return out;
}

NormalizationParams fit_normalization(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("normalization: empty matrix");
  const std::size_t width = rows.front().size();
  const auto n = static_cast<double>(rows.size());
  NormalizationParams p;
  p.mean.assign(width, 0.0);
  p.stddev.assign(width, 0.0);
  for (std::size_t j = 0; j < width; ++j) {
    bool constant = true;
    double sum = 0.0;
    for (const auto& r : rows) {
      sum += r[j];
      constant = constant && r[j] == rows.front()[j];
    }
    p.mean[j] = sum / n;
    if (constant) continue;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[j] - p.mean[j]) * (r[j] - p.mean[j]);
    p.stddev[j] = std::sqrt(ss / n);
  }
  return p;
}

std::pair<FeatureMatrix, NormalizationParams> zscore_normalize(const FeatureMatrix& matrix) {
  if (matrix.size() == 0) throw InvalidArgument("zscore_normalize: empty matrix");
  matrix.validate();
  NormalizationParams params = fit_normalization(matrix.rows);
  FeatureMatrix out = matrix;
  for (auto& r : out.rows) r = params.apply(r);
  return {std::move(out), std::move(params)};
}

std::vector<double> PcaModel::transform(const std::vector<double>& row) const {
  if (row.size() != mean.size()) throw InvalidArgument("pca: row width mismatch");
  std::vector<double> out(components.size(), 0.0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (std::size_t j = 0; j < row.size(); ++j) out[c] += (row[j] - mean[j]) * components[c][j];
  }
  return out;
}

std::vector<double> PcaModel::reconstruct(const std::vector<double>& projected) const {
  if (projected.size() != components.size()) throw InvalidArgument("pca: projection width mismatch");
  std::vector<double> out = mean;
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += projected[c] * components[c][j];
  }
  return out;
}

std::pair<PcaModel, FeatureMatrix> pca_fit_transform(const FeatureMatrix& matrix,
                                                     std::size_t components) {
  matrix.validate();
  const std::size_t n = matrix.size();
  const std::size_t width = matrix.width();
  if (n < 2) throw InvalidArgument("pca: need at least two rows");
  if (components < 1 || components > std::min(n, width)) {
    throw InvalidArgument("pca: component count out of range");
  }

  Eigen::MatrixXd centered(n, width);
  PcaModel model;
  model.mean.assign(width, 0.0);
  for (std::size_t j = 0; j < width; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += matrix.rows[i][j];
    model.mean[j] = sum / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) centered(i, j) = matrix.rows[i][j] - model.mean[j];
  }
  const Eigen::MatrixXd covariance =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  for (std::size_t c = 0; c < components; ++c) {
    const auto col = static_cast<Eigen::Index>(width - 1 - c);
    std::vector<double> direction(width);
    std::size_t pivot = 0;
    for (std::size_t j = 0; j < width; ++j) {
      direction[j] = solver.eigenvectors()(static_cast<Eigen::Index>(j), col);
      if (std::abs(direction[j]) > std::abs(direction[pivot])) pivot = j;
    }
    if (direction[pivot] < 0.0) {
      for (double& v : direction) v = -v;
    }
    model.components.push_back(std::move(direction));
    model.explained_variance.push_back(std::max(0.0, solver.eigenvalues()(col)));
  }

  FeatureMatrix projected;
  projected.ids = matrix.ids;
  projected.labels = matrix.labels;
  for (std::size_t c = 0; c < components; ++c) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "pc%02zu", c);
    projected.columns.emplace_back(buffer);
  }
  for (const auto& r : matrix.rows) projected.rows.push_back(model.transform(r));
  return {std::move(model), std::move(projected)};
}

}  // namespace bladeinspect
