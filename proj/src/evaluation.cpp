#include "medresp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "medresp/error.hpp"
#include "medresp/parallel.hpp"
#include "medresp/rng.hpp"

namespace medresp {

void ConfusionMatrix::add(int truth, int predicted) noexcept {
  if (truth == 1) {
    (predicted == 1 ? tp : fn) += 1;
  } else {
    (predicted == 1 ? fp : tn) += 1;
  }
}

Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.positives() == 0) throw ContractError("no treatment instances validated");
  if (cm.negatives() == 0) throw ContractError("no baseline instances validated");
  Metrics m;
  m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.positives());
  m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.negatives());
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  return m;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

std::string_view to_string(FoldMode mode) noexcept {
  switch (mode) {
    case FoldMode::random: return "random";
    case FoldMode::stratified: return "stratified";
    case FoldMode::grouped: return "grouped";
  }
  return "random";
}

FoldMode parse_fold_mode(std::string_view text) {
  if (text == "random") return FoldMode::random;
  if (text == "stratified") return FoldMode::stratified;
  if (text == "grouped") return FoldMode::grouped;
  throw InputError("unknown fold mode '" + std::string(text) + "'");
}

namespace {

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

// Near-equal partition of `count` consecutive positions: the first
// count % folds folds receive one extra element.
std::vector<int> partition_positions(std::size_t count, int folds) {
  std::vector<int> fold(count);
  const std::size_t base = count / folds;
  const std::size_t extra = count % folds;
  std::size_t pos = 0;
  for (int k = 0; k < folds; ++k) {
    const std::size_t size = base + (static_cast<std::size_t>(k) < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j) fold[pos++] = k;
  }
  return fold;
}

}  // namespace

std::vector<int> assign_folds(const Dataset& data, int folds, FoldMode mode, std::uint64_t seed) {
  const std::size_t n = data.size();
  if (folds < 2) throw ContractError("folds must be >= 2");
  if (n < static_cast<std::size_t>(folds)) throw ContractError("fewer instances than folds");
  Rng rng(seed);
  std::vector<int> fold(n);

  switch (mode) {
    case FoldMode::random: {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      shuffle(order, rng);
      const auto pos = partition_positions(n, folds);
      for (std::size_t j = 0; j < n; ++j) fold[order[j]] = pos[j];
      break;
    }
    case FoldMode::stratified: {
      // Shuffle within each class, then deal the concatenation round-robin.
      std::vector<std::size_t> order;
      for (int label : {0, 1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
          if (data.labels[i] == label) members.push_back(i);
        }
        shuffle(members, rng);
        order.insert(order.end(), members.begin(), members.end());
      }
      for (std::size_t j = 0; j < n; ++j) fold[order[j]] = static_cast<int>(j % folds);
      break;
    }
    case FoldMode::grouped: {
      if (data.groups.size() != n) throw ContractError("grouped folds need a group key per row");
      std::map<std::string, std::vector<std::size_t>> members;
      for (std::size_t i = 0; i < n; ++i) members[data.groups[i]].push_back(i);
      if (members.size() < static_cast<std::size_t>(folds)) throw ContractError("fewer groups than folds");
      std::vector<const std::vector<std::size_t>*> groups;
      for (const auto& [key, rows] : members) groups.push_back(&rows);
      shuffle(groups, rng);
      const auto pos = partition_positions(groups.size(), folds);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i : *groups[g]) fold[i] = pos[g];
      }
      break;
    }
  }
  return fold;
}

CVResult repeated_cv(const Dataset& data, const CVConfig& config, int threads) {
  data.validate();
  const std::size_t n = data.size();
  if (data.count(0) == 0 || data.count(1) == 0) throw ContractError("evaluation data contains a single class");
  if (config.repetitions < 1) throw ContractError("repetitions must be >= 1");
  if (config.folds < 2) throw ContractError("folds must be >= 2");
  if (n < static_cast<std::size_t>(config.folds)) throw ContractError("fewer instances than folds");

  const auto reps = static_cast<std::size_t>(config.repetitions);
  const auto folds = static_cast<std::size_t>(config.folds);

  CVResult result;
  result.folds.resize(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const std::uint64_t rep_seed = derive_seed(config.seed, r);
    result.folds[r] = assign_folds(data, config.folds, config.mode, derive_seed(rep_seed, 0));
  }

  // One task per (repetition, fold); each writes its own prediction and
  // importance slots.
  std::vector<std::vector<std::pair<std::size_t, int>>> predictions(reps * folds);
  std::vector<std::vector<double>> importances(reps * folds);
  parallel_for(reps * folds, threads, [&](std::size_t task) {
    const std::size_t r = task / folds;
    const int k = static_cast<int>(task % folds);
    const auto& fold = result.folds[r];
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < n; ++i) (fold[i] == k ? test : train).push_back(i);
    const Dataset training = data.subset(train);
    if (training.count(0) == 0 || training.count(1) == 0) {
      throw ContractError("a training split contains a single class; use more instances or stratified folds");
    }
    ForestConfig fc = config.forest;
    fc.seed = derive_seed(derive_seed(config.seed, r), 1 + static_cast<std::uint64_t>(k));
    fc.compute_oob = false;
    const Forest forest = train_forest(training, fc, 1);
    auto& out = predictions[task];
    for (std::size_t i : test) out.emplace_back(i, forest.predict(data.rows[i]).label);
    importances[task] = forest.importance();
  });

  std::map<std::string, std::size_t> participant_sizes;
  for (const auto& p : data.participants) ++participant_sizes[p];
  for (const auto& [id, count] : participant_sizes) {
    result.per_participant[id] = {count, 0, 0};
  }

  const double p1 = static_cast<double>(data.count(1)) / static_cast<double>(n);
  std::vector<double> sens, spec, acc, racc;
  for (std::size_t r = 0; r < reps; ++r) {
    ConfusionMatrix cm;
    for (std::size_t k = 0; k < folds; ++k) {
      for (const auto& [i, predicted] : predictions[r * folds + k]) {
        cm.add(data.labels[i], predicted);
        if (!data.participants.empty()) {
          auto& pa = result.per_participant[data.participants[i]];
          ++pa.validated;
          if (predicted == data.labels[i]) ++pa.correct;
        }
      }
    }
    if (cm.total() != n) throw InternalError("repetition did not validate every instance once");
    const Metrics m = metrics(cm);
    result.confusion.push_back(cm);
    result.per_repetition.push_back(m);
    sens.push_back(m.sensitivity);
    spec.push_back(m.specificity);
    acc.push_back(m.accuracy);

    const auto guesses = random_classifier(p1, n, derive_seed(derive_seed(config.seed, r), 1 + folds));
    ConfusionMatrix rcm;
    for (std::size_t i = 0; i < n; ++i) rcm.add(data.labels[i], guesses[i]);
    const Metrics rm = metrics(rcm);
    result.random_confusion.push_back(rcm);
    result.random_per_repetition.push_back(rm);
    racc.push_back(rm.accuracy);
  }
  result.sensitivity = mean_std(sens);
  result.specificity = mean_std(spec);
  result.accuracy = mean_std(acc);
  result.random_accuracy = mean_std(racc);

  result.importance.assign(data.n_features(), 0.0);
  for (const auto& imp : importances) {
    for (std::size_t f = 0; f < imp.size(); ++f) result.importance[f] += imp[f];
  }
  for (double& v : result.importance) v /= static_cast<double>(importances.size());
  return result;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double q;
  if (lambda < 1.18) {
    // Small-lambda form: 1 - sqrt(2 pi)/lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double pi = 3.14159265358979323846;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double j = 2.0 * k - 1.0;
      const double term = std::exp(-j * j * pi * pi / (8.0 * lambda * lambda));
      sum += term;
      if (term < 1e-300) break;
    }
    q = 1.0 - std::sqrt(2.0 * pi) / lambda * sum;
  } else {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      sum += (k % 2 == 1 ? term : -term);
      if (term < 1e-300) break;
    }
    q = 2.0 * sum;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ContractError("KS test needs two non-empty samples");
  for (double v : a) {
    if (!std::isfinite(v)) throw ContractError("KS sample is not finite");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw ContractError("KS sample is not finite");
  }
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());

  // Sweep the merged order; ties advance both samples before comparing.
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult out;
  out.d = d;
  if (d == 0.0) {
    out.p = 1.0;
    return out;
  }
  const double ne = n * m / (n + m);
  const double sqrt_ne = std::sqrt(ne);
  out.p = kolmogorov_survival((sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d);
  return out;
}

QuadraticFit accuracy_vs_led(std::span<const LedPoint> points, std::size_t min_instances) {
  std::vector<const LedPoint*> kept;
  for (const auto& p : points) {
    if (!std::isfinite(p.led) || !std::isfinite(p.accuracy)) throw ContractError("non-finite LED point");
    if (p.n_instances >= min_instances) kept.push_back(&p);
  }
  if (kept.size() < 3) throw ContractError("quadratic fit needs at least 3 participants after filtering");
  std::vector<double> distinct;
  for (const auto* p : kept) distinct.push_back(p->led);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw ContractError("quadratic fit needs at least 3 distinct LED values");

  // Fit on centred, scaled LED for conditioning, then expand back.
  const double lo = distinct.front(), hi = distinct.back();
  const double centre = 0.5 * (lo + hi);
  const double scale = 0.5 * (hi - lo);
  const auto m = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double u = (kept[i]->led - centre) / scale;
    design(i, 0) = 1.0;
    design(i, 1) = u;
    design(i, 2) = u * u;
    target(i) = kept[i]->accuracy;
  }
  const Eigen::VectorXd a = design.colPivHouseholderQr().solve(target);

  QuadraticFit fit;
  fit.c2 = a(2) / (scale * scale);
  fit.c1 = a(1) / scale - 2.0 * centre * a(2) / (scale * scale);
  fit.c0 = a(0) - a(1) * centre / scale + a(2) * centre * centre / (scale * scale);
  fit.n_points = kept.size();
  fit.led_min = lo;
  fit.led_max = hi;
  fit.fitted_at_min = fit(lo);
  fit.fitted_at_max = fit(hi);
  if (std::abs(a(2)) > 1e-12 * (std::abs(a(0)) + std::abs(a(1)) + 1e-300)) {
    // Vertex in the scaled coordinate, mapped back.
    fit.vertex = centre - scale * a(1) / (2.0 * a(2));
    fit.vertex_is_maximum = a(2) < 0.0;
  }
  return fit;
}

}  // namespace medresp
