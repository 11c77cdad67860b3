#include "medresp/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "medresp/error.hpp"
#include "medresp/extraction.hpp"
#include "medresp/parallel.hpp"
#include "medresp/registry.hpp"
#include "medresp/rng.hpp"

namespace medresp {

using nlohmann::json;

std::size_t Dataset::count(int label) const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void Dataset::validate() const {
  if (rows.size() < 2) throw ContractError("dataset needs at least 2 instances");
  if (labels.size() != rows.size()) throw ContractError("dataset labels do not match rows");
  if (!participants.empty() && participants.size() != rows.size()) {
    throw ContractError("dataset participants do not match rows");
  }
  if (!groups.empty() && groups.size() != rows.size()) throw ContractError("dataset groups do not match rows");
  if (feature_ids.empty()) throw ContractError("dataset has no features");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != feature_ids.size()) {
      throw ContractError("dataset row " + std::to_string(i) + " has wrong length");
    }
    for (double v : rows[i]) {
      if (!std::isfinite(v)) throw ContractError("dataset row " + std::to_string(i) + " is not finite");
    }
    if (labels[i] != 0 && labels[i] != 1) throw ContractError("dataset labels must be 0 or 1");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.feature_ids = feature_ids;
  for (std::size_t i : indices) {
    out.rows.push_back(rows.at(i));
    out.labels.push_back(labels.at(i));
    if (!participants.empty()) out.participants.push_back(participants[i]);
    if (!groups.empty()) out.groups.push_back(groups[i]);
  }
  return out;
}

Dataset dataset_from_table(const FeatureTable& table) {
  Dataset d;
  d.feature_ids = table.feature_ids;
  d.rows = table.rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    switch (table.labels[i]) {
      case Label::baseline: d.labels.push_back(0); break;
      case Label::treatment: d.labels.push_back(1); break;
      case Label::unlabeled:
        throw ContractError("row " + std::to_string(i + 1) + " is unlabeled; run pair first");
    }
    d.participants.push_back(table.participant_ids[i]);
    d.groups.push_back(table.participant_ids[i] + "@" + std::to_string(table.started_at[i].local_day()));
  }
  return d;
}

double gini(std::uint64_t n_class0, std::uint64_t n_class1) {
  const auto n = n_class0 + n_class1;
  if (n == 0) throw ContractError("gini of an empty node");
  const double p0 = static_cast<double>(n_class0) / static_cast<double>(n);
  const double p1 = static_cast<double>(n_class1) / static_cast<double>(n);
  return 1.0 - p0 * p0 - p1 * p1;
}

int Tree::leaf(std::span<const double> row) const {
  int k = 0;
  while (nodes[k].feature >= 0) {
    const auto& node = nodes[k];
    k = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  return k;
}

double Tree::predict(std::span<const double> row) const { return nodes[leaf(row)].p1; }

bool operator==(const ForestConfig& a, const ForestConfig& b) {
  return a.n_trees == b.n_trees && a.mtry == b.mtry && a.min_split == b.min_split && a.max_depth == b.max_depth &&
         a.seed == b.seed && a.compute_oob == b.compute_oob;
}

Forest::Forest(ForestConfig config, std::vector<std::string> feature_ids, std::vector<Tree> trees,
               std::vector<double> importance)
    : config_(config), feature_ids_(std::move(feature_ids)), trees_(std::move(trees)),
      importance_(std::move(importance)) {
  if (importance_.size() != feature_ids_.size()) throw InternalError("importance length mismatch");
}

Prediction Forest::predict(std::span<const double> row) const {
  if (row.size() != feature_ids_.size()) {
    throw ContractError("row has " + std::to_string(row.size()) + " features, forest expects " +
                        std::to_string(feature_ids_.size()));
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw ContractError("row has a non-finite feature value");
  }
  if (trees_.empty()) throw ContractError("forest has no trees");
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.predict(row);
  const double p = sum / static_cast<double>(trees_.size());
  return {p >= 0.5 ? 1 : 0, p};
}

namespace {

// Grows one tree on bootstrap weights. Feature values are read column-major.
class TreeBuilder {
 public:
  TreeBuilder(const std::vector<double>& columns, std::size_t n, std::size_t d, const std::vector<int>& labels,
              const ForestConfig& config, int mtry, std::uint64_t seed)
      : columns_(columns), n_(n), d_(d), labels_(labels), config_(config), mtry_(mtry), rng_(seed),
        weights_(n, 0), importance_(d, 0.0), pool_(d) {
    std::iota(pool_.begin(), pool_.end(), 0);
  }

  Tree build() {
    for (std::size_t k = 0; k < n_; ++k) ++weights_[rng_.index(n_)];
    std::vector<std::uint32_t> in_bag;
    for (std::size_t i = 0; i < n_; ++i) {
      if (weights_[i] > 0) in_bag.push_back(static_cast<std::uint32_t>(i));
    }
    root_weight_ = static_cast<double>(n_);
    grow(in_bag, 0);
    return std::move(tree_);
  }

  const std::vector<std::uint32_t>& weights() const noexcept { return weights_; }
  const std::vector<double>& importance() const noexcept { return importance_; }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;
  };

  double value(std::size_t feature, std::uint32_t row) const { return columns_[feature * n_ + row]; }

  int grow(std::vector<std::uint32_t>& rows, int depth) {
    double w0 = 0.0, w1 = 0.0;
    for (auto r : rows) (labels_[r] ? w1 : w0) += weights_[r];
    const double w = w0 + w1;

    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[id].p1 = w1 / w;

    const bool pure = w0 == 0.0 || w1 == 0.0;
    const bool too_small = w < config_.min_split;
    const bool too_deep = config_.max_depth > 0 && depth >= config_.max_depth;
    if (pure || too_small || too_deep) return id;

    const double parent_score = (w0 * w0 + w1 * w1) / w;
    const Split best = find_split(rows, w0, w1, parent_score);
    if (best.feature < 0) return id;

    importance_[best.feature] += (best.score - parent_score) / root_weight_;

    std::vector<std::uint32_t> left, right;
    for (auto r : rows) (value(best.feature, r) <= best.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[id].feature = best.feature;
    tree_.nodes[id].threshold = best.threshold;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  Split find_split(const std::vector<std::uint32_t>& rows, double w0, double w1, double parent_score) {
    for (int k = 0; k < mtry_; ++k) {
      const auto j = k + static_cast<std::size_t>(rng_.index(d_ - k));
      std::swap(pool_[k], pool_[j]);
    }
    candidates_.assign(pool_.begin(), pool_.begin() + mtry_);
    std::sort(candidates_.begin(), candidates_.end());

    const double w = w0 + w1;
    const double min_gain = 1e-12 * w;
    Split best;
    best.score = parent_score + min_gain;
    for (int f : candidates_) {
      sorted_.clear();
      for (auto r : rows) sorted_.emplace_back(value(f, r), r);
      std::sort(sorted_.begin(), sorted_.end());
      double l0 = 0.0, l1 = 0.0;
      for (std::size_t i = 0; i + 1 < sorted_.size(); ++i) {
        const auto r = sorted_[i].second;
        (labels_[r] ? l1 : l0) += weights_[r];
        const double a = sorted_[i].first;
        const double b = sorted_[i + 1].first;
        if (!(a < b)) continue;
        const double wl = l0 + l1;
        const double r0 = w0 - l0, r1 = w1 - l1;
        const double wr = r0 + r1;
        const double score = (l0 * l0 + l1 * l1) / wl + (r0 * r0 + r1 * r1) / wr;
        if (score > best.score) {
          double mid = a + (b - a) / 2.0;
          if (!(mid < b)) mid = a;
          best = {f, mid, score};
        }
      }
    }
    return best;
  }

  const std::vector<double>& columns_;
  std::size_t n_, d_;
  const std::vector<int>& labels_;
  const ForestConfig& config_;
  int mtry_;
  Rng rng_;
  std::vector<std::uint32_t> weights_;
  std::vector<double> importance_;
  std::vector<int> pool_;
  std::vector<int> candidates_;
  std::vector<std::pair<double, std::uint32_t>> sorted_;
  double root_weight_ = 0.0;
  Tree tree_;
};

}  // namespace

Forest train_forest(const Dataset& data, const ForestConfig& config, int threads) {
  data.validate();
  if (data.count(0) == 0 || data.count(1) == 0) throw ContractError("training data contains a single class");
  if (config.n_trees < 1) throw ContractError("n_trees must be >= 1");
  if (config.min_split < 1) throw ContractError("min_split must be >= 1");
  if (config.max_depth < 0) throw ContractError("max_depth must be >= 0");
  const std::size_t n = data.size();
  const std::size_t d = data.n_features();
  int mtry = config.mtry;
  if (mtry == 0) mtry = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
  if (mtry < 1) throw ContractError("mtry must be >= 1");
  if (static_cast<std::size_t>(mtry) > d) throw ContractError("mtry exceeds the number of features");

  std::vector<double> columns(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < d; ++f) columns[f * n + i] = data.rows[i][f];
  }

  const auto n_trees = static_cast<std::size_t>(config.n_trees);
  std::vector<Tree> trees(n_trees);
  std::vector<std::vector<double>> importances(n_trees);
  std::vector<std::vector<std::uint32_t>> weights(config.compute_oob ? n_trees : 0);
  parallel_for(n_trees, threads, [&](std::size_t t) {
    TreeBuilder builder(columns, n, d, data.labels, config, mtry, derive_seed(config.seed, t));
    trees[t] = builder.build();
    importances[t] = builder.importance();
    if (config.compute_oob) weights[t] = builder.weights();
  });

  std::vector<double> importance(d, 0.0);
  for (const auto& imp : importances) {
    for (std::size_t f = 0; f < d; ++f) importance[f] += imp[f];
  }
  const double total = std::accumulate(importance.begin(), importance.end(), 0.0);
  if (total > 0.0) {
    for (double& v : importance) v /= total;
  }

  Forest forest(config, data.feature_ids, std::move(trees), std::move(importance));
  if (config.compute_oob) {
    std::size_t scored = 0, correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      std::size_t votes = 0;
      for (std::size_t t = 0; t < n_trees; ++t) {
        if (weights[t][i] != 0) continue;
        sum += forest.trees()[t].predict(data.rows[i]);
        ++votes;
      }
      if (votes == 0) continue;
      ++scored;
      if ((sum / static_cast<double>(votes) >= 0.5 ? 1 : 0) == data.labels[i]) ++correct;
    }
    if (scored > 0) forest.oob_accuracy = static_cast<double>(correct) / static_cast<double>(scored);
  }
  return forest;
}

std::vector<int> random_classifier(double p1, std::size_t n, std::uint64_t seed) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw ContractError("class proportion must lie in [0, 1]");
  Rng rng(seed);
  std::vector<int> out(n);
  for (auto& v : out) v = rng.bernoulli(p1) ? 1 : 0;
  return out;
}

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

}  // namespace

std::string Forest::to_json() const {
  json trees = json::array();
  for (const auto& tree : trees_) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         p1 = json::array();
    for (const auto& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      p1.push_back(node.p1);
    }
    trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"p1", p1}});
  }
  json doc{
      {"schema_version", kForestSchemaVersion},
      {"kind", "medresp-forest"},
      {"config",
       {{"n_trees", config_.n_trees},
        {"mtry", config_.mtry},
        {"min_split", config_.min_split},
        {"max_depth", config_.max_depth},
        {"seed", config_.seed},
        {"compute_oob", config_.compute_oob}}},
      {"feature_ids", feature_ids_},
      {"feature_ids_hash", hex64(feature_ids_hash(feature_ids_))},
      {"importance", importance_},
      {"trees", trees},
  };
  doc["oob_accuracy"] = oob_accuracy ? json(*oob_accuracy) : json(nullptr);
  return doc.dump();
}

Forest Forest::from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("kind") != "medresp-forest") throw InputError("not a forest model");
    if (doc.at("schema_version").get<int>() != kForestSchemaVersion) {
      throw InputError("unsupported forest schema_version");
    }
    ForestConfig config;
    const auto& c = doc.at("config");
    config.n_trees = c.at("n_trees").get<int>();
    config.mtry = c.at("mtry").get<int>();
    config.min_split = c.at("min_split").get<int>();
    config.max_depth = c.at("max_depth").get<int>();
    config.seed = c.at("seed").get<std::uint64_t>();
    config.compute_oob = c.at("compute_oob").get<bool>();
    auto ids = doc.at("feature_ids").get<std::vector<std::string>>();
    if (doc.at("feature_ids_hash").get<std::string>() != hex64(feature_ids_hash(ids))) {
      throw InputError("forest feature_ids_hash does not match its feature ids");
    }
    auto importance = doc.at("importance").get<std::vector<double>>();
    std::vector<Tree> trees;
    for (const auto& jt : doc.at("trees")) {
      const auto feature = jt.at("feature").get<std::vector<int>>();
      const auto threshold = jt.at("threshold").get<std::vector<double>>();
      const auto left = jt.at("left").get<std::vector<int>>();
      const auto right = jt.at("right").get<std::vector<int>>();
      const auto p1 = jt.at("p1").get<std::vector<double>>();
      const auto m = feature.size();
      if (m == 0 || threshold.size() != m || left.size() != m || right.size() != m || p1.size() != m) {
        throw InputError("malformed tree in forest model");
      }
      Tree tree;
      for (std::size_t k = 0; k < m; ++k) {
        const int nodes = static_cast<int>(m);
        if (feature[k] >= static_cast<int>(ids.size()) ||
            (feature[k] >= 0 && (left[k] <= static_cast<int>(k) || left[k] >= nodes ||
                                 right[k] <= static_cast<int>(k) || right[k] >= nodes))) {
          throw InputError("malformed tree node in forest model");
        }
        tree.nodes.push_back({feature[k], threshold[k], left[k], right[k], p1[k]});
      }
      trees.push_back(std::move(tree));
    }
    Forest forest(config, std::move(ids), std::move(trees), std::move(importance));
    if (!doc.at("oob_accuracy").is_null()) forest.oob_accuracy = doc.at("oob_accuracy").get<double>();
    return forest;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed forest model: ") + e.what());
  } catch (const InternalError& e) {
    throw InputError(std::string("malformed forest model: ") + e.what());
  }
}

void Forest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << to_json() << '\n';
}

Forest Forest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return from_json(s.str());
}

}  // namespace medresp
