#include "bladeinspect/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

#include "bladeinspect/csv.hpp"
#include "bladeinspect/error.hpp"

namespace bladeinspect {

const char* to_string(DistanceMetric metric) {
  return metric == DistanceMetric::kEuclidean ? "euclidean" : "cosine";
}

const char* to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::kSingle: return "single";
    case Linkage::kComplete: return "complete";
    case Linkage::kAverage: return "average";
    case Linkage::kWard: return "ward";
  }
  return "unknown";
}

DistanceMetric parse_distance_metric(std::string_view name) {
  if (name == "euclidean") return DistanceMetric::kEuclidean;
  if (name == "cosine") return DistanceMetric::kCosine;
  throw InvalidArgument("unknown distance metric: " + std::string(name));
}

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::kSingle;
  if (name == "complete") return Linkage::kComplete;
  if (name == "average") return Linkage::kAverage;
  if (name == "ward") return Linkage::kWard;
  throw InvalidArgument("unknown linkage: " + std::string(name));
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> condensed, DistanceMetric metric,
                               bool normalized)
    : n_(n), condensed_(std::move(condensed)), metric_(metric), normalized_(normalized) {
  if (n == 0) throw InvalidArgument("distance matrix: no points");
  if (condensed_.size() != n * (n - 1) / 2) throw InvalidArgument("distance matrix: wrong size");
  for (double d : condensed_) {
    if (!std::isfinite(d) || d < 0.0) {
      throw InvalidArgument("distance matrix: entries must be finite and nonnegative");
    }
  }
}

DistanceMatrix DistanceMatrix::from_square(const std::vector<std::vector<double>>& square,
                                           DistanceMetric metric, bool normalized) {
  const std::size_t n = square.size();
  std::vector<double> condensed;
  for (std::size_t i = 0; i < n; ++i) {
    if (square[i].size() != n) throw InvalidArgument("distance matrix: not square");
    for (std::size_t j = i + 1; j < n; ++j) condensed.push_back(square[i][j]);
  }
  return DistanceMatrix(n, std::move(condensed), metric, normalized);
}

std::size_t DistanceMatrix::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double DistanceMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw InvalidArgument("distance matrix: index out of range");
  return i == j ? 0.0 : condensed_[index(i, j)];
}

DistanceMatrix pairwise_distances(const FeatureMatrix& matrix, DistanceMetric metric,
                                  bool normalize) {
  matrix.validate();
  const std::size_t n = matrix.size();
  if (n < 2) throw InvalidArgument("pairwise_distances: need at least two rows");
  for (const auto& r : matrix.rows) {
    for (double v : r) {
      if (!std::isfinite(v)) throw InvalidArgument("pairwise_distances: nonfinite value");
    }
  }
  std::vector<std::vector<double>> rows = matrix.rows;
  if (normalize) {
    const auto params = fit_normalization(rows);
    for (auto& r : rows) r = params.apply(r);
  }

  std::vector<double> condensed;
  condensed.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = rows[i];
      const auto& b = rows[j];
      double d = 0.0;
      if (metric == DistanceMetric::kEuclidean) {
        for (std::size_t c = 0; c < a.size(); ++c) d += (a[c] - b[c]) * (a[c] - b[c]);
        d = std::sqrt(d);
      } else {
        double dot = 0.0;
        double na = 0.0;
        double nb = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) {
          dot += a[c] * b[c];
          na += a[c] * a[c];
          nb += b[c] * b[c];
        }
        d = (na == 0.0 || nb == 0.0) ? 1.0
                                     : std::max(0.0, 1.0 - dot / (std::sqrt(na) * std::sqrt(nb)));
      }
      condensed.push_back(d);
    }
  }
  return DistanceMatrix(n, std::move(condensed), metric, normalize);
}

namespace {

// Lance-Williams update of d(a+b, k). Each result is clamped to the bound the
// recurrence satisfies exactly, so rounding cannot break height monotonicity.
double lance_williams(Linkage linkage, double dak, double dbk, double dab, double na, double nb,
                      double nk) {
  switch (linkage) {
    case Linkage::kSingle: return std::min(dak, dbk);
    case Linkage::kComplete: return std::max(dak, dbk);
    case Linkage::kAverage:
      return std::clamp((na * dak + nb * dbk) / (na + nb), std::min(dak, dbk), std::max(dak, dbk));
    case Linkage::kWard:
      return std::max(((na + nk) * dak + (nb + nk) * dbk - nk * dab) / (na + nb + nk), dab);
  }
  return dak;
}

}  // namespace

Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage,
                       std::vector<std::string> leaf_names) {
  const std::size_t n = distances.size();
  if (leaf_names.empty()) {
    for (std::size_t i = 0; i < n; ++i) leaf_names.push_back(std::to_string(i));
  }
  if (leaf_names.size() != n) throw InvalidArgument("agglomerate: leaf name count mismatch");

  Dendrogram out;
  out.leaves = std::move(leaf_names);
  out.linkage = linkage;

  // Slot s holds the cluster whose smallest leaf is s.
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = distances(i, j);
  }
  std::vector<std::size_t> cluster_id(n);
  std::iota(cluster_id.begin(), cluster_id.end(), 0);
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = n;
    std::size_t best_b = n;
    double best = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        if (best_a == n || d[a][b] < best) {
          best = d[a][b];
          best_a = a;
          best_b = b;
        }
      }
    }

    const std::size_t new_id = n + step;
    out.merges.push_back(
        {cluster_id[best_a], cluster_id[best_b], best, new_id, size[best_a] + size[best_b]});

    const auto na = static_cast<double>(size[best_a]);
    const auto nb = static_cast<double>(size[best_b]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == best_a || k == best_b) continue;
      const double updated = lance_williams(linkage, d[best_a][k], d[best_b][k], best, na, nb,
                                            static_cast<double>(size[k]));
      d[best_a][k] = updated;
      d[k][best_a] = updated;
    }
    active[best_b] = false;
    size[best_a] += size[best_b];
    cluster_id[best_a] = new_id;
  }
  return out;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

ClusterAssignment apply_merges(const Dendrogram& dg, std::size_t keep) {
  const std::size_t n = dg.leaf_count();
  DisjointSets sets(n);
  std::vector<std::size_t> representative(n + dg.merges.size());
  std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(n), 0);
  for (std::size_t m = 0; m < dg.merges.size(); ++m) {
    const auto& merge = dg.merges[m];
    representative[merge.id] = representative[merge.left];
    if (m < keep) sets.unite(representative[merge.left], representative[merge.right]);
  }
  ClusterAssignment out;
  out.cluster.assign(n, 0);
  std::vector<std::size_t> index_of_root(n, n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const std::size_t root = sets.find(leaf);
    if (index_of_root[root] == n) index_of_root[root] = out.cluster_count++;
    out.cluster[leaf] = index_of_root[root];
  }
  return out;
}

}  // namespace

ClusterAssignment cut_by_count(const Dendrogram& dendrogram, std::size_t count) {
  const std::size_t n = dendrogram.leaf_count();
  if (count < 1 || count > n) {
    throw InvalidArgument("cut_by_count: count must lie in [1, " + std::to_string(n) + "]");
  }
  return apply_merges(dendrogram, n - count);
}

ClusterAssignment cut_by_height(const Dendrogram& dendrogram, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("cut_by_height: threshold must be >= 0");
  std::size_t keep = 0;
  while (keep < dendrogram.merges.size() && dendrogram.merges[keep].height <= threshold) ++keep;
  return apply_merges(dendrogram, keep);
}

double label_purity(const ClusterAssignment& assignment, const std::vector<std::string>& labels) {
  if (labels.size() != assignment.cluster.size()) throw InvalidArgument("label_purity: length mismatch");
  if (labels.empty()) throw InvalidArgument("label_purity: no leaves");
  std::vector<std::map<std::string, std::size_t>> tallies(assignment.cluster_count);
  for (std::size_t i = 0; i < labels.size(); ++i) ++tallies.at(assignment.cluster[i])[labels[i]];
  std::size_t majority = 0;
  for (const auto& t : tallies) {
    std::size_t top = 0;
    for (const auto& [label, count] : t) top = std::max(top, count);
    majority += top;
  }
  return static_cast<double>(majority) / static_cast<double>(labels.size());
}

namespace {

std::string fixed6(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

std::string newick_label(const std::string& name) {
  if (name.find_first_of("(),:;'[]") == std::string::npos) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

class DendrogramWriter {
 public:
  explicit DendrogramWriter(const Dendrogram& dg) : dg_(dg), n_(dg.leaf_count()) {
    min_leaf_.resize(n_ + dg.merges.size());
    std::iota(min_leaf_.begin(), min_leaf_.begin() + static_cast<std::ptrdiff_t>(n_), 0);
    for (const auto& m : dg.merges) min_leaf_[m.id] = std::min(min_leaf_[m.left], min_leaf_[m.right]);
  }

  std::size_t root() const { return dg_.merges.empty() ? 0 : dg_.merges.back().id; }

  void text(std::size_t id, std::size_t depth, std::string& out) const {
    out.append(2 * depth, ' ');
    if (id < n_) {
      out += dg_.leaves[id] + '\n';
      return;
    }
    const auto& m = merge(id);
    out += "[" + fixed6(m.height) + "]\n";
    const auto [first, second] = ordered(m);
    text(first, depth + 1, out);
    text(second, depth + 1, out);
  }

  void newick(std::size_t id, std::string& out) const {
    if (id < n_) {
      out += newick_label(dg_.leaves[id]);
      return;
    }
    const auto& m = merge(id);
    const auto [first, second] = ordered(m);
    out += '(';
    newick(first, out);
    out += ':' + fixed6(m.height - height(first)) + ',';
    newick(second, out);
    out += ':' + fixed6(m.height - height(second)) + ')';
  }

 private:
  const Merge& merge(std::size_t id) const { return dg_.merges[id - n_]; }
  double height(std::size_t id) const { return id < n_ ? 0.0 : merge(id).height; }
  std::pair<std::size_t, std::size_t> ordered(const Merge& m) const {
    return min_leaf_[m.left] < min_leaf_[m.right] ? std::pair{m.left, m.right}
                                                  : std::pair{m.right, m.left};
  }

  const Dendrogram& dg_;
  std::size_t n_;
  std::vector<std::size_t> min_leaf_;
};

}  // namespace

std::string export_dendrogram(const Dendrogram& dendrogram, DendrogramFormat format) {
  if (dendrogram.leaf_count() == 0) throw InvalidArgument("export_dendrogram: empty dendrogram");
  if (dendrogram.merges.size() + 1 != dendrogram.leaf_count()) {
    throw InvalidArgument("export_dendrogram: expected n - 1 merges");
  }
  const DendrogramWriter writer(dendrogram);
  std::string out;
  if (format == DendrogramFormat::kText) {
    writer.text(writer.root(), 0, out);
  } else {
    writer.newick(writer.root(), out);
    out += ';';
  }
  return out;
}

void write_cluster_csv(std::ostream& out, const Dendrogram& dendrogram,
                       const ClusterAssignment& assignment) {
  out << "id,cluster\n";
  for (std::size_t i = 0; i < dendrogram.leaf_count(); ++i) {
    out << csv::escape(dendrogram.leaves[i]) << ',' << assignment.cluster.at(i) << '\n';
  }
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& distances,
                        const std::vector<std::string>& ids) {
  if (ids.size() != distances.size()) throw InvalidArgument("write_distance_csv: id count mismatch");
  for (const auto& id : ids) out << ',' << csv::escape(id);
  out << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << csv::escape(ids[i]);
    for (std::size_t j = 0; j < ids.size(); ++j) out << ',' << csv::format_real(distances(i, j));
    out << '\n';
  }
}

}  // namespace bladeinspect
