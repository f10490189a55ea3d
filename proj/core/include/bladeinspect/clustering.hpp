#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bladeinspect/features.hpp"

namespace bladeinspect {

enum class DistanceMetric { kEuclidean, kCosine };
enum class Linkage { kSingle, kComplete, kAverage, kWard };

const char* to_string(DistanceMetric metric);
const char* to_string(Linkage linkage);
DistanceMetric parse_distance_metric(std::string_view name);
Linkage parse_linkage(std::string_view name);

/// Condensed symmetric distance matrix with zero diagonal.
class DistanceMatrix {
 public:
  /// `condensed` holds d(i, j) for i < j in row-major order; all entries must
  /// be finite and nonnegative.
  DistanceMatrix(std::size_t n, std::vector<double> condensed,
                 DistanceMetric metric = DistanceMetric::kEuclidean, bool normalized = false);

  /// Builds from a full square matrix, reading the upper triangle.
  static DistanceMatrix from_square(const std::vector<std::vector<double>>& square,
                                    DistanceMetric metric = DistanceMetric::kEuclidean,
                                    bool normalized = false);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const;
  DistanceMetric metric() const noexcept { return metric_; }
  bool normalized() const noexcept { return normalized_; }
  const std::vector<double>& condensed() const noexcept { return condensed_; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_;
  std::vector<double> condensed_;
  DistanceMetric metric_;
  bool normalized_;
};

/// Row distances, z-scoring columns first when `normalize` is set. Cosine
/// distance is 1 - cos, and 1 when either row has zero norm.
DistanceMatrix pairwise_distances(const FeatureMatrix& matrix,
                                  DistanceMetric metric = DistanceMetric::kEuclidean,
                                  bool normalize = true);

struct Merge {
  std::size_t left;   // cluster id: leaves are 0..n-1, merge m creates n+m
  std::size_t right;
  double height;
  std::size_t id;
  std::size_t size;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
  Linkage linkage = Linkage::kAverage;

  std::size_t leaf_count() const noexcept { return leaves.size(); }
};

/// Agglomerative clustering with Lance-Williams updates. The closest pair is
/// merged; ties go to the lexicographically smallest (min leaf of left,
/// min leaf of right) pair, with left the cluster holding the smaller leaf.
/// Leaves default to "0", "1", ... when `leaf_names` is empty.
Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage = Linkage::kAverage,
                       std::vector<std::string> leaf_names = {});

struct ClusterAssignment {
  std::vector<std::size_t> cluster;  // per leaf
  std::size_t cluster_count = 0;
};

/// Keeps the first n - count merges. Clusters are numbered in order of their
/// smallest leaf. Throws InvalidArgument unless 1 <= count <= n.
ClusterAssignment cut_by_count(const Dendrogram& dendrogram, std::size_t count);
/// Keeps exactly the merges with height <= threshold.
ClusterAssignment cut_by_height(const Dendrogram& dendrogram, double threshold);

/// Fraction of leaves whose label is the majority label of their cluster.
double label_purity(const ClusterAssignment& assignment, const std::vector<std::string>& labels);

enum class DendrogramFormat { kText, kNewick };

/// Text: two-space indented tree, heights with 6 decimals, smaller-min-leaf
/// child first. Newick: branch length = parent height - child height,
/// terminated by ";" with no trailing newline.
std::string export_dendrogram(const Dendrogram& dendrogram, DendrogramFormat format);

/// `id,cluster` rows in leaf order.
void write_cluster_csv(std::ostream& out, const Dendrogram& dendrogram,
                       const ClusterAssignment& assignment);
/// Full square matrix with an id header row and column.
void write_distance_csv(std::ostream& out, const DistanceMatrix& distances,
                        const std::vector<std::string>& ids);

}  // namespace bladeinspect
