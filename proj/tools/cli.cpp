#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bladeinspect/clustering.hpp"
#include "bladeinspect/csv.hpp"
#include "bladeinspect/dataset.hpp"
#include "bladeinspect/error.hpp"
#include "bladeinspect/evaluation.hpp"
#include "bladeinspect/features.hpp"
#include "bladeinspect/learners.hpp"
#include "bladeinspect/synthgen.hpp"

namespace bladeinspect::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Error raised by argument validation; the message names the flag.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct GenOptions {
  std::string out;
  std::string counts = "34,33,33";
  std::uint64_t seed = 0;
  std::size_t width = 128;
  std::size_t height = 128;
};

struct FeaturesOptions {
  std::string images;
  std::string labels;
  std::string out;
};

struct EvaluateOptions {
  std::string features;
  std::string out;
  std::size_t k = kDefaultFolds;
  std::uint64_t seed = 0;
  std::string models = "tree,nb,logreg,mlp";
  bool no_standardize = false;
  std::size_t tree_max_depth = TreeConfig{}.max_depth;
  std::size_t tree_min_leaf = TreeConfig{}.min_leaf;
  double logreg_lr = LogisticConfig{}.learning_rate;
  std::size_t logreg_iterations = LogisticConfig{}.max_iterations;
  double logreg_tolerance = LogisticConfig{}.tolerance;
  double logreg_l2 = LogisticConfig{}.l2;
  std::string mlp_hidden = "20";
  std::string mlp_activation = "relu";
  double mlp_lr = MlpConfig{}.learning_rate;
  std::size_t mlp_epochs = MlpConfig{}.epochs;
  double mlp_l2 = MlpConfig{}.l2;
};

struct ClusterOptions {
  std::string features;
  std::string out;
  std::string linkage = "average";
  std::string metric = "euclidean";
  bool no_normalize = false;
  std::optional<std::size_t> cut_count;
  std::optional<double> cut_height;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(item);
  return items;
}

std::size_t parse_count(const std::string& text, const char* flag) {
  std::size_t pos = 0;
  try {
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
      const auto v = std::stoull(text, &pos);
      if (pos == text.size()) return static_cast<std::size_t>(v);
    }
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(flag) + ": '" + text + "' is not a nonnegative integer");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  writer(out);
  if (!out) throw Error("write failed: " + path.string());
}

void ensure_directory(const fs::path& dir, const char* flag) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw UsageError(std::string(flag) + ": cannot create directory " + dir.string());
  }
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// ---- gen ----

int cmd_gen(const GenOptions& o, std::ostream& out) {
  const auto parts = split_list(o.counts);
  if (parts.size() != 3) throw UsageError("--counts: expected healthy,crack,erosion");
  GenConfig config;
  for (std::size_t c = 0; c < 3; ++c) config.counts[c] = parse_count(parts[c], "--counts");
  if (config.total() == 0) throw UsageError("--counts: corpus would be empty");
  if (o.width < 16 || o.height < 16) throw UsageError("--width/--height: minimum is 16");
  config.size = {o.width, o.height};
  config.seed = o.seed;

  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec || !fs::is_directory(o.out)) throw UsageError("--out: cannot create directory " + o.out);
  const auto images = generate_dataset(config, o.out);

  out << "generated " << images.size() << " images in " << o.out << " (seed " << o.seed << ", "
      << o.width << "x" << o.height << ")\n";
  for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
    out << "  " << to_string(kAllConditions[c]) << ": " << config.counts[c] << '\n';
  }
  return 0;
}

// ---- features ----

int cmd_features(const FeaturesOptions& o, std::ostream& out) {
  std::ifstream labels_in(o.labels, std::ios::binary);
  if (!labels_in) throw UsageError("--labels: cannot open " + o.labels);
  std::string line;
  std::size_t line_no = 0;
  if (!csv::next_record(labels_in, line, line_no)) {
    throw UsageError("--labels: " + o.labels + " is empty");
  }
  const auto header = csv::split_line(line);
  if (header.size() != 2 || header[0] != "id" || header[1] != "label") {
    throw CsvError(CsvErrorKind::kBadHeader, line_no, o.labels + ": expected id,label");
  }

  FeatureMatrix matrix;
  matrix.columns = feature_column_names();
  std::vector<std::string> labels;
  std::set<std::string> seen;
  while (csv::next_record(labels_in, line, line_no)) {
    auto fields = csv::split_line(line);
    if (fields.size() != 2) {
      throw CsvError(CsvErrorKind::kWrongColumnCount, line_no, o.labels);
    }
    if (fields[0].empty()) throw CsvError(CsvErrorKind::kMissingId, line_no, o.labels);
    if (!seen.insert(fields[0]).second) {
      throw CsvError(CsvErrorKind::kDuplicateId, line_no, o.labels + ": " + fields[0]);
    }
    const fs::path image = fs::path(o.images) / fields[0];
    Raster raster;
    try {
      raster = load_ppm_file(image);
    } catch (const Error& e) {
      throw Error(image.string() + ": " + e.what());
    }
    const auto f = extract_features(raster);
    matrix.ids.push_back(fields[0]);
    labels.push_back(fields[1]);
    matrix.rows.emplace_back(f.begin(), f.end());
  }
  if (matrix.size() == 0) throw UsageError("--labels: " + o.labels + " lists no images");
  bool any_label = false;
  for (const auto& l : labels) any_label = any_label || !l.empty();
  if (any_label) matrix.labels = std::move(labels);

  write_feature_csv(fs::path(o.out), matrix);
  out << "extracted " << kFeatureCount << " features from " << matrix.size() << " images -> "
      << o.out << '\n';
  return 0;
}

// ---- evaluate ----

LearnerSettings learner_settings(const EvaluateOptions& o) {
  LearnerSettings s;
  s.standardize = !o.no_standardize;
  s.tree.max_depth = o.tree_max_depth;
  s.tree.min_leaf = o.tree_min_leaf;
  s.logistic.learning_rate = o.logreg_lr;
  s.logistic.max_iterations = o.logreg_iterations;
  s.logistic.tolerance = o.logreg_tolerance;
  s.logistic.l2 = o.logreg_l2;
  s.mlp.hidden.clear();
  for (const auto& h : split_list(o.mlp_hidden)) s.mlp.hidden.push_back(parse_count(h, "--mlp-hidden"));
  try {
    s.mlp.activation = parse_activation(o.mlp_activation);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--mlp-activation: ") + e.what());
  }
  s.mlp.learning_rate = o.mlp_lr;
  s.mlp.epochs = o.mlp_epochs;
  s.mlp.l2 = o.mlp_l2;
  s.mlp.seed = o.seed;

  const auto check = [](auto&& validate, const char* flags) {
    try {
      validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(std::string(flags) + ": " + e.what());
    }
  };
  check([&] { s.tree.validate(); }, "--tree-max-depth/--tree-min-leaf");
  check([&] { s.logistic.validate(); }, "--logreg-*");
  check([&] { s.mlp.validate(); }, "--mlp-*");
  return s;
}

ordered_json settings_json(const EvaluateOptions& o, const LearnerSettings& s,
                           const std::vector<LearnerKind>& kinds) {
  ordered_json j;
  j["command"] = "evaluate";
  j["features"] = o.features;
  j["k"] = o.k;
  j["seed"] = o.seed;
  std::vector<std::string> names;
  for (auto k : kinds) names.emplace_back(to_string(k));
  j["models"] = names;
  j["standardize"] = s.standardize;
  j["tree"] = {{"criterion", "gini"}, {"max_depth", s.tree.max_depth}, {"min_leaf", s.tree.min_leaf}};
  j["nb"] = {{"likelihood", "gaussian"}, {"variance_floor_scale", kVarianceFloorScale}};
  j["logreg"] = {{"scheme", "one-vs-rest"},
                 {"learning_rate", s.logistic.learning_rate},
                 {"max_iterations", s.logistic.max_iterations},
                 {"tolerance", s.logistic.tolerance},
                 {"l2", s.logistic.l2}};
  j["mlp"] = {{"hidden", s.mlp.hidden},         {"activation", to_string(s.mlp.activation)},
              {"learning_rate", s.mlp.learning_rate}, {"epochs", s.mlp.epochs},
              {"l2", s.mlp.l2},                 {"seed", s.mlp.seed}};
  return j;
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.k < 2) throw UsageError("--k: must be at least 2");
  std::vector<LearnerKind> kinds;
  for (const auto& name : split_list(o.models)) {
    try {
      const auto kind = parse_learner_kind(name);
      if (std::find(kinds.begin(), kinds.end(), kind) != kinds.end()) {
        throw UsageError("--models: " + name + " listed twice");
      }
      kinds.push_back(kind);
    } catch (const InvalidArgument& e) {
      throw UsageError(std::string("--models: ") + e.what());
    }
  }
  if (kinds.empty()) throw UsageError("--models: no models given");
  const LearnerSettings settings = learner_settings(o);

  const LabeledDataset data = load_labeled_csv(fs::path(o.features));
  if (data.class_count() < 2) {
    throw UsageError("--features: " + o.features + " holds a single class; classification needs two");
  }
  FoldAssignment folds;
  try {
    folds = stratified_kfold(data, o.k, o.seed);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--k: ") + e.what());
  }

  std::vector<Learner> learners;
  for (auto kind : kinds) learners.push_back(make_learner(kind, settings));
  const EvaluationReport report = cross_validate(data, learners, folds);

  const fs::path dir(o.out);
  ensure_directory(dir, "--out");
  write_text(dir / "run_config.json", settings_json(o, settings, kinds).dump(2) + "\n");
  write_file(dir / "folds.csv", [&](std::ostream& os) { write_fold_csv(os, data, folds); });
  write_file(dir / "report.csv", [&](std::ostream& os) { write_report_csv(os, report); });
  write_file(dir / "fold_scores.csv", [&](std::ostream& os) { write_fold_scores_csv(os, report); });
  for (const auto& model : report.models) {
    write_file(dir / ("confusion_" + model.name + ".csv"),
               [&](std::ostream& os) { write_confusion_csv(os, model.confusion); });
    write_file(dir / ("predictions_" + model.name + ".csv"),
               [&](std::ostream& os) { write_predictions_csv(os, data, report, model); });
  }
  if (report.models.size() >= 2) {
    for (auto metric : kComparisonMetrics) {
      const auto matrix = compare_models(report, metric);
      write_file(dir / (std::string("compare_") + to_string(metric) + ".csv"),
                 [&](std::ostream& os) { write_comparison_csv(os, matrix); });
    }
  }

  out << data.size() << " rows, " << data.class_count() << " classes, " << o.k
      << "-fold stratified CV (seed " << o.seed << ")\n";
  out << std::left << std::setw(10) << "Model";
  for (auto m : kReportMetrics) out << std::right << std::setw(10) << display_name(m);
  out << '\n';
  for (const auto& model : report.models) {
    out << std::left << std::setw(10) << model.name;
    for (auto m : kReportMetrics) out << std::right << std::setw(10) << fixed(model.pooled.get(m));
    out << '\n';
  }
  out << "outputs written to " << o.out << '\n';
  return 0;
}

// ---- cluster ----

int cmd_cluster(const ClusterOptions& o, std::ostream& out) {
  if (o.cut_count && o.cut_height) throw UsageError("--cut-count and --cut-height are exclusive");
  Linkage linkage;
  DistanceMetric metric;
  try {
    linkage = parse_linkage(o.linkage);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--linkage: ") + e.what());
  }
  try {
    metric = parse_distance_metric(o.metric);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--metric: ") + e.what());
  }

  const FeatureMatrix matrix = read_feature_csv(fs::path(o.features));
  if (matrix.size() < 2) throw UsageError("--features: clustering needs at least two rows");
  if (o.cut_count && (*o.cut_count < 1 || *o.cut_count > matrix.size())) {
    throw UsageError("--cut-count: must lie in [1, " + std::to_string(matrix.size()) + "]");
  }
  if (o.cut_height && !(*o.cut_height >= 0.0)) throw UsageError("--cut-height: must be >= 0");

  const bool normalize = !o.no_normalize;
  const DistanceMatrix distances = pairwise_distances(matrix, metric, normalize);
  const Dendrogram dendrogram = agglomerate(distances, linkage, matrix.ids);

  const fs::path dir(o.out);
  ensure_directory(dir, "--out");

  ordered_json config;
  config["command"] = "cluster";
  config["features"] = o.features;
  config["linkage"] = to_string(linkage);
  config["metric"] = to_string(metric);
  config["normalize"] = normalize;
  if (o.cut_count) config["cut_count"] = *o.cut_count;
  if (o.cut_height) config["cut_height"] = *o.cut_height;
  write_text(dir / "run_config.json", config.dump(2) + "\n");

  write_file(dir / "distances.csv",
             [&](std::ostream& os) { write_distance_csv(os, distances, matrix.ids); });
  std::string header = "# linkage=" + std::string(to_string(linkage)) +
                       " metric=" + to_string(metric) +
                       " normalize=" + (normalize ? "true" : "false") +
                       " leaves=" + std::to_string(matrix.size()) + "\n";
  write_text(dir / "dendrogram.txt",
             header + export_dendrogram(dendrogram, DendrogramFormat::kText));
  write_text(dir / "dendrogram.nwk", export_dendrogram(dendrogram, DendrogramFormat::kNewick) + "\n");

  out << "clustered " << matrix.size() << " rows (" << to_string(linkage) << " linkage, "
      << (normalize ? "normalized " : "") << to_string(metric) << "), "
      << dendrogram.merges.size() << " merges, top height " << fixed(dendrogram.merges.back().height, 6)
      << '\n';

  if (o.cut_count || o.cut_height) {
    const auto assignment = o.cut_count ? cut_by_count(dendrogram, *o.cut_count)
                                        : cut_by_height(dendrogram, *o.cut_height);
    write_file(dir / "clusters.csv",
               [&](std::ostream& os) { write_cluster_csv(os, dendrogram, assignment); });
    out << assignment.cluster_count << " clusters";
    if (matrix.labels) out << ", label purity " << fixed(label_purity(assignment, *matrix.labels));
    out << '\n';
  }
  out << "outputs written to " << o.out << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blade image fault-detection pipeline: synthesize, extract, evaluate, cluster."};
  app.name("bladeinspect");
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded synthetic blade-image corpus");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--counts", gen.counts, "Images per class: healthy,crack,erosion")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Corpus seed")->capture_default_str();
  gen_cmd->add_option("--width", gen.width, "Image width in pixels")->capture_default_str();
  gen_cmd->add_option("--height", gen.height, "Image height in pixels")->capture_default_str();

  FeaturesOptions feat;
  auto* feat_cmd = app.add_subcommand("features", "Extract the 37-feature table from PPM images");
  feat_cmd->add_option("--images", feat.images, "Directory holding the images")->required();
  feat_cmd->add_option("--labels", feat.labels, "CSV with id,label columns")->required();
  feat_cmd->add_option("--out", feat.out, "Output features CSV")->required();

  EvaluateOptions ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Cross-validate classifiers and compare them");
  ev_cmd->add_option("--features", ev.features, "Labeled features CSV")->required();
  ev_cmd->add_option("--out", ev.out, "Output directory")->required();
  ev_cmd->add_option("--k", ev.k, "Number of folds")->capture_default_str();
  ev_cmd->add_option("--seed", ev.seed, "Fold and MLP seed")->capture_default_str();
  ev_cmd->add_option("--models", ev.models, "Comma-separated subset of tree,nb,logreg,mlp")
      ->capture_default_str();
  ev_cmd->add_flag("--no-standardize", ev.no_standardize,
                   "Skip per-fold z-scoring of features (default: standardize)");
  ev_cmd->add_option("--tree-max-depth", ev.tree_max_depth, "Tree depth limit")->capture_default_str();
  ev_cmd->add_option("--tree-min-leaf", ev.tree_min_leaf, "Minimum samples per leaf")
      ->capture_default_str();
  ev_cmd->add_option("--logreg-lr", ev.logreg_lr, "Logistic learning rate")->capture_default_str();
  ev_cmd->add_option("--logreg-iterations", ev.logreg_iterations, "Logistic iteration limit")
      ->capture_default_str();
  ev_cmd->add_option("--logreg-tolerance", ev.logreg_tolerance, "Gradient-norm stopping tolerance")
      ->capture_default_str();
  ev_cmd->add_option("--logreg-l2", ev.logreg_l2, "Logistic L2 strength")->capture_default_str();
  ev_cmd->add_option("--mlp-hidden", ev.mlp_hidden, "Hidden layer sizes, comma-separated")
      ->capture_default_str();
  ev_cmd->add_option("--mlp-activation", ev.mlp_activation, "relu, sigmoid or tanh")
      ->capture_default_str();
  ev_cmd->add_option("--mlp-lr", ev.mlp_lr, "MLP learning rate")->capture_default_str();
  ev_cmd->add_option("--mlp-epochs", ev.mlp_epochs, "MLP epochs")->capture_default_str();
  ev_cmd->add_option("--mlp-l2", ev.mlp_l2, "MLP L2 strength on weights")->capture_default_str();

  ClusterOptions cl;
  auto* cl_cmd = app.add_subcommand("cluster", "Hierarchical clustering of feature rows");
  cl_cmd->add_option("--features", cl.features, "Features CSV (labels optional)")->required();
  cl_cmd->add_option("--out", cl.out, "Output directory")->required();
  cl_cmd->add_option("--linkage", cl.linkage, "single, complete, average or ward")
      ->capture_default_str();
  cl_cmd->add_option("--metric", cl.metric, "euclidean or cosine")->capture_default_str();
  cl_cmd->add_flag("--no-normalize", cl.no_normalize,
                   "Use raw columns (default: z-score columns first)");
  cl_cmd->add_option("--cut-count", cl.cut_count, "Cut into this many clusters (default: no cut)");
  cl_cmd->add_option("--cut-height", cl.cut_height, "Cut at this merge height (default: no cut)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (feat_cmd->parsed()) return cmd_features(feat, out);
    if (ev_cmd->parsed()) return cmd_evaluate(ev, out);
    if (cl_cmd->parsed()) return cmd_cluster(cl, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace bladeinspect::cli
