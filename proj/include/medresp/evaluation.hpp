#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "medresp/forest.hpp"

namespace medresp {

/// Positive class is treatment (1).
struct ConfusionMatrix {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(int truth, int predicted) noexcept;
  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  std::uint64_t positives() const noexcept { return tp + fn; }
  std::uint64_t negatives() const noexcept { return tn + fp; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double accuracy = 0.0;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Sensitivity TP/(TP+FN), specificity TN/(TN+FP), accuracy (TP+TN)/total.
/// Throws ContractError when either stratum is empty.
Metrics metrics(const ConfusionMatrix& cm);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
  friend bool operator==(const MeanStd&, const MeanStd&) = default;
};

MeanStd mean_std(std::span<const double> values);

enum class FoldMode {
  random,      // uniform permutation, independent of labels and groups
  stratified,  // class proportions balanced across folds
  grouped,     // all rows sharing a group key land in the same fold
};

std::string_view to_string(FoldMode mode) noexcept;
FoldMode parse_fold_mode(std::string_view text);

/// Fold index of every row for one repetition. Fold sizes differ by at most
/// one (in groups, for grouped mode); the first n % folds folds are larger.
std::vector<int> assign_folds(const Dataset& data, int folds, FoldMode mode, std::uint64_t seed);

struct CVConfig {
  int folds = 10;
  int repetitions = 100;
  std::uint64_t seed = 0;
  FoldMode mode = FoldMode::random;
  ForestConfig forest;  // forest.seed is ignored; each fit gets a derived seed
};

struct ParticipantAccuracy {
  std::size_t n_instances = 0;
  std::uint64_t validated = 0;  // n_instances * repetitions
  std::uint64_t correct = 0;
  double accuracy() const noexcept {
    return validated ? static_cast<double>(correct) / static_cast<double>(validated) : 0.0;
  }
  friend bool operator==(const ParticipantAccuracy&, const ParticipantAccuracy&) = default;
};

struct CVResult {
  std::vector<ConfusionMatrix> confusion;
  std::vector<Metrics> per_repetition;
  std::vector<ConfusionMatrix> random_confusion;
  std::vector<Metrics> random_per_repetition;
  MeanStd sensitivity, specificity, accuracy;
  MeanStd random_accuracy;
  /// Mean of the normalized importances of every fitted forest.
  std::vector<double> importance;
  std::map<std::string, ParticipantAccuracy> per_participant;
  /// Per repetition, the validation fold of every row.
  std::vector<std::vector<int>> folds;

  friend bool operator==(const CVResult&, const CVResult&) = default;
};

/// Repeated k-fold cross validation with a random-classifier baseline that
/// guesses from the class proportions of the whole dataset.
CVResult repeated_cv(const Dataset& data, const CVConfig& config, int threads = 1);

struct KsResult {
  double d = 0.0;
  double p = 1.0;
};

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

/// Two-sided two-sample test. The p-value uses the effective size
/// ne = n m / (n + m) and lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) D.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct LedPoint {
  std::string participant_id;
  double led = 0.0;
  double accuracy = 0.0;
  std::size_t n_instances = 0;
};

struct QuadraticFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  std::size_t n_points = 0;
  double led_min = 0.0, led_max = 0.0;
  double fitted_at_min = 0.0, fitted_at_max = 0.0;
  /// Location of the extremum; absent when the fit is linear.
  std::optional<double> vertex;
  bool vertex_is_maximum = false;

  double operator()(double led) const noexcept { return c0 + led * (c1 + led * c2); }
};

/// Least-squares fit of accuracy on (1, led, led^2) over participants with at
/// least `min_instances` instances.
QuadraticFit accuracy_vs_led(std::span<const LedPoint> points, std::size_t min_instances = 20);

}  // namespace medresp
