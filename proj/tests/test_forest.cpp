#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "medresp/error.hpp"
#include "medresp/forest.hpp"
#include "medresp/rng.hpp"

using namespace medresp;

namespace {

Dataset gaussian(std::size_t n, std::size_t p, std::uint64_t seed, auto&& label_of) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t j = 0; j < p; ++j) d.feature_ids.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(p);
    for (auto& v : row) v = rng.normal();
    d.labels.push_back(label_of(row, rng));
    d.rows.push_back(std::move(row));
  }
  return d;
}

double accuracy_on(const Forest& f, const Dataset& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += f.predict(d.rows[i]).label == d.labels[i];
  return static_cast<double>(ok) / d.size();
}

}  // namespace

TEST_CASE("gini") {
  CHECK(gini(5, 5) == 0.5);
  CHECK(gini(10, 0) == 0.0);
  CHECK(gini(0, 3) == 0.0);
  CHECK(gini(1, 3) == doctest::Approx(0.375));
  CHECK_THROWS_AS(gini(0, 0), ContractError);
}

TEST_CASE("separable data") {
  auto d = gaussian(400, 5, 1, [](const auto& row, Rng&) { return row[2] > 0.3 ? 1 : 0; });
  ForestConfig cfg;
  cfg.n_trees = 100;
  cfg.seed = 3;
  cfg.compute_oob = true;
  const Forest f = train_forest(d, cfg);
  REQUIRE(f.oob_accuracy.has_value());
  CHECK(*f.oob_accuracy >= 0.98);
  const auto top = std::max_element(f.importance().begin(), f.importance().end()) - f.importance().begin();
  CHECK(top == 2);
  double total = 0.0;
  for (double v : f.importance()) {
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("coin labels stay near chance") {
  const auto train = gaussian(400, 8, 5, [](const auto&, Rng& r) { return r.bernoulli(0.5) ? 1 : 0; });
  const auto test = gaussian(2000, 8, 6, [](const auto&, Rng& r) { return r.bernoulli(0.5) ? 1 : 0; });
  ForestConfig cfg;
  cfg.n_trees = 100;
  cfg.seed = 11;
  const Forest f = train_forest(train, cfg);
  const double acc = accuracy_on(f, test);
  CHECK(acc > 0.45);
  CHECK(acc < 0.55);
}

TEST_CASE("signal feature ranks first") {
  int first = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto d = gaussian(300, 12, 100 + seed, [](const auto& row, Rng& r) {
      return row[7] + 0.5 * r.normal() > 0 ? 1 : 0;
    });
    ForestConfig cfg;
    cfg.n_trees = 60;
    cfg.seed = seed;
    const Forest f = train_forest(d, cfg);
    first += std::max_element(f.importance().begin(), f.importance().end()) - f.importance().begin() == 7;
  }
  CHECK(first >= 9);
}

TEST_CASE("prediction ties go to treatment") {
  Tree a, b;
  a.nodes.push_back({-1, 0.0, -1, -1, 0.0});
  b.nodes.push_back({-1, 0.0, -1, -1, 1.0});
  const Forest f(ForestConfig{}, {"x"}, {a, b}, {0.0});
  const std::vector<double> row{0.0};
  CHECK(f.predict(row).probability == 0.5);
  CHECK(f.predict(row).label == 1);
}

TEST_CASE("single leaf when nothing splits") {
  Dataset d;
  d.feature_ids = {"c"};
  for (int i = 0; i < 10; ++i) {
    d.rows.push_back({1.0});
    d.labels.push_back(i < 8 ? 1 : 0);
  }
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.seed = 9;
  const Forest f = train_forest(d, cfg);
  REQUIRE(f.trees()[0].nodes.size() == 1);
  // The bootstrap weights decide the leaf value; the node is still a leaf.
  CHECK(f.trees()[0].nodes[0].feature == -1);
  for (double v : f.importance()) CHECK(v == 0.0);

  ForestConfig many = cfg;
  many.n_trees = 400;
  const Forest g = train_forest(d, many);
  CHECK(g.predict(d.rows[0]).probability == doctest::Approx(0.8).epsilon(0.05));
}

TEST_CASE("split thresholds and routing") {
  Dataset d;
  d.feature_ids = {"x"};
  for (int i = 0; i < 20; ++i) {
    d.rows.push_back({static_cast<double>(i)});
    d.labels.push_back(i >= 10 ? 1 : 0);
  }
  ForestConfig cfg;
  cfg.n_trees = 50;
  cfg.seed = 2;
  const Forest f = train_forest(d, cfg);
  for (const auto& t : f.trees()) {
    for (const auto& n : t.nodes) {
      if (n.feature < 0) continue;
      // midpoint of two observed integers
      CHECK(2.0 * n.threshold == std::round(2.0 * n.threshold));
      CHECK(n.threshold > 0.0);
      CHECK(n.threshold < 19.0);
    }
  }
  CHECK(accuracy_on(f, d) == 1.0);
}

TEST_CASE("training is deterministic and thread invariant") {
  auto d = gaussian(300, 10, 8, [](const auto& row, Rng& r) { return row[0] + row[1] + r.normal() > 0 ? 1 : 0; });
  ForestConfig cfg;
  cfg.n_trees = 40;
  cfg.seed = 77;
  cfg.compute_oob = true;
  const Forest a = train_forest(d, cfg, 1);
  const Forest b = train_forest(d, cfg, 1);
  const Forest c = train_forest(d, cfg, 8);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.to_json() == c.to_json());
  cfg.seed = 78;
  CHECK_FALSE(a == train_forest(d, cfg, 1));
}

TEST_CASE("monotone feature transforms keep predictions") {
  auto d = gaussian(200, 4, 12, [](const auto& row, Rng& r) { return row[1] - row[3] + 0.3 * r.normal() > 0 ? 1 : 0; });
  Dataset e = d;
  for (auto& row : e.rows) {
    for (auto& v : row) v = std::exp(v) * 3.0 + 1.0;
  }
  ForestConfig cfg;
  cfg.n_trees = 30;
  cfg.seed = 4;
  const Forest fd = train_forest(d, cfg);
  const Forest fe = train_forest(e, cfg);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(fd.predict(d.rows[i]).label == fe.predict(e.rows[i]).label);
  CHECK(fd.importance() == fe.importance());
}

TEST_CASE("deep trees memorize distinct rows") {
  auto d = gaussian(150, 6, 30, [](const auto&, Rng& r) { return r.bernoulli(0.5) ? 1 : 0; });
  ForestConfig cfg;
  cfg.n_trees = 200;
  cfg.seed = 1;
  CHECK(accuracy_on(train_forest(d, cfg), d) >= 0.95);
}

TEST_CASE("max depth limits the tree") {
  auto d = gaussian(200, 6, 31, [](const auto&, Rng& r) { return r.bernoulli(0.5) ? 1 : 0; });
  ForestConfig cfg;
  cfg.n_trees = 5;
  cfg.max_depth = 1;
  const Forest f = train_forest(d, cfg);
  for (const auto& t : f.trees()) CHECK(t.nodes.size() <= 3);
}

TEST_CASE("save and load round trip") {
  auto d = gaussian(120, 5, 40, [](const auto& row, Rng&) { return row[4] > 0 ? 1 : 0; });
  ForestConfig cfg;
  cfg.n_trees = 20;
  cfg.seed = 5;
  cfg.compute_oob = true;
  const Forest f = train_forest(d, cfg);
  const auto path = std::filesystem::temp_directory_path() / "medresp_test_forest.json";
  f.save(path);
  const Forest g = Forest::load(path);
  std::filesystem::remove(path);
  CHECK(f == g);
  CHECK(Forest::from_json(f.to_json()) == f);
  CHECK_THROWS_AS(Forest::from_json("{\"kind\": \"other\"}"), InputError);
  CHECK_THROWS(Forest::from_json("not json"));
}

TEST_CASE("input validation") {
  Dataset d;
  d.feature_ids = {"a"};
  d.rows = {{1.0}};
  d.labels = {1};
  CHECK_THROWS_AS(train_forest(d, {}), ContractError);
  d.rows.push_back({std::nan("")});
  d.labels.push_back(0);
  CHECK_THROWS_AS(train_forest(d, {}), ContractError);
  d.rows[1] = {2.0};
  d.labels[1] = 2;
  CHECK_THROWS_AS(train_forest(d, {}), ContractError);
}

TEST_CASE("random classifier") {
  const auto a = random_classifier(0.3, 20000, 8);
  CHECK(a == random_classifier(0.3, 20000, 8));
  const double ones = std::count(a.begin(), a.end(), 1) / 20000.0;
  CHECK(ones == doctest::Approx(0.3).epsilon(0.05));
  const auto zero = random_classifier(0.0, 100, 1);
  CHECK(std::count(zero.begin(), zero.end(), 1) == 0);
}
