#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace medresp {

struct FeatureTable;

/// Binary classification data. Label 0 is baseline, 1 is treatment.
struct Dataset {
  std::vector<std::string> feature_ids;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  /// Optional per-row participant ids (per-participant accuracy).
  std::vector<std::string> participants;
  /// Optional per-row group keys kept together by grouped CV.
  std::vector<std::string> groups;

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t n_features() const noexcept { return feature_ids.size(); }
  std::size_t count(int label) const noexcept;

  /// Throws ContractError unless rectangular, finite, binary and n >= 2.
  void validate() const;
  Dataset subset(std::span<const std::size_t> indices) const;
};

/// Rows of a feature table. Unlabeled rows are a contract error. Groups are
/// participant and local calendar day, i.e. one baseline/treatment pair.
Dataset dataset_from_table(const FeatureTable& table);

double gini(std::uint64_t n_class0, std::uint64_t n_class1);

struct ForestConfig {
  int n_trees = 500;
  int mtry = 0;  // 0: floor(sqrt(n_features))
  int min_split = 2;
  int max_depth = 0;  // 0: unlimited
  std::uint64_t seed = 0;
  bool compute_oob = false;
};

/// Flat binary tree. Node 0 is the root; a node is a leaf when feature < 0.
/// Rows go left when value <= threshold.
struct Tree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double p1 = 0.0;  // class-1 probability at a leaf
    friend bool operator==(const Node&, const Node&) = default;
  };
  std::vector<Node> nodes;

  double predict(std::span<const double> row) const;
  /// Index of the leaf reached by `row`.
  int leaf(std::span<const double> row) const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

struct Prediction {
  int label = 0;
  double probability = 0.0;
};

class Forest {
 public:
  Forest() = default;
  Forest(ForestConfig config, std::vector<std::string> feature_ids, std::vector<Tree> trees,
         std::vector<double> importance);

  const ForestConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& feature_ids() const noexcept { return feature_ids_; }
  const std::vector<Tree>& trees() const noexcept { return trees_; }
  /// Normalized mean decrease in impurity; all zero if no tree ever split.
  const std::vector<double>& importance() const noexcept { return importance_; }
  std::size_t n_features() const noexcept { return feature_ids_.size(); }

  /// Out-of-bag accuracy, when requested at training time and defined.
  std::optional<double> oob_accuracy;

  /// Probability is the mean leaf class-1 probability; ties go to class 1.
  Prediction predict(std::span<const double> row) const;

  std::string to_json() const;
  static Forest from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static Forest load(const std::filesystem::path& path);

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  ForestConfig config_;
  std::vector<std::string> feature_ids_;
  std::vector<Tree> trees_;
  std::vector<double> importance_;
};

bool operator==(const ForestConfig&, const ForestConfig&);

Forest train_forest(const Dataset& data, const ForestConfig& config, int threads = 1);

/// n independent draws with P(class 1) = p1.
std::vector<int> random_classifier(double p1, std::size_t n, std::uint64_t seed);

inline constexpr int kForestSchemaVersion = 1;

}  // namespace medresp
