#include "fsor/evalkit.hpp"

#include "fsor/baselines.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace fsor;

TEST_CASE("knn basics") {
  Matrix train(2, 3);
  train << 0, 10, 5, 0, 10, 5;
  const std::vector<int> labels{0, 1, 1};

  // a test point equal to a training point, k = 1
  Matrix test(2, 1);
  test << 10, 10;
  CHECK(knn_classify(train, labels, test, 1) == std::vector<int>{1});

  // nearest cluster wins
  test << 1, 1;
  CHECK(knn_classify(train, labels, test, 1) == std::vector<int>{0});
}

TEST_CASE("knn vote tie goes to the smallest class index") {
  Matrix train(1, 3);
  train << 1.0, 2.0, 9.0;
  const std::vector<int> labels{1, 0, 1};
  Matrix test(1, 1);
  test << 0.0;
  // k=2 neighbors are classes {1, 0}: tied vote, class 0 wins
  CHECK(knn_classify(train, labels, test, 2) == std::vector<int>{0});
}

TEST_CASE("knn distance tie goes to the lower training index") {
  Matrix train(1, 2);
  train << 1.0, -1.0;  // both at distance 1 from the origin
  const std::vector<int> labels{1, 0};
  Matrix test(1, 1);
  test << 0.0;
  CHECK(knn_classify(train, labels, test, 1) == std::vector<int>{1});
}

TEST_CASE("knn clamps k to the training size") {
  Matrix train(1, 3);
  train << 0, 1, 2;
  const std::vector<int> labels{0, 0, 1};
  Matrix test(1, 1);
  test << 0.4;
  CHECK(knn_classify(train, labels, test, 10) == std::vector<int>{0});
  CHECK_THROWS_AS(knn_classify(train, labels, test, 0), std::invalid_argument);
}

TEST_CASE("sensitivity and specificity on known confusions") {
  Matrix perfect = Matrix::Zero(3, 3);
  perfect.diagonal() << 4, 5, 6;
  auto [se, sp] = sensitivity_specificity(perfect);
  CHECK(se == doctest::Approx(1.0));
  CHECK(sp == doctest::Approx(1.0));

  Matrix mixed(2, 2);
  mixed << 8, 2, 3, 7;
  std::tie(se, sp) = sensitivity_specificity(mixed);
  CHECK(se == doctest::Approx(0.75));
  CHECK(sp == doctest::Approx(0.75));

  Matrix degenerate(2, 2);
  degenerate << 5, 0, 5, 0;  // everything predicted class 0, balanced truth
  std::tie(se, sp) = sensitivity_specificity(degenerate);
  CHECK(se == doctest::Approx(0.5));
  CHECK(sp == doctest::Approx(0.5));
}

TEST_CASE("macro sensitivity equals balanced accuracy for k = 2") {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> count(1, 30);
  for (int t = 0; t < 20; ++t) {
    Matrix conf(2, 2);
    conf << count(rng), count(rng), count(rng), count(rng);
    const auto [se, sp] = sensitivity_specificity(conf);
    const double balanced =
        0.5 * (conf(0, 0) / conf.row(0).sum() + conf(1, 1) / conf.row(1).sum());
    CHECK(se == doctest::Approx(balanced).epsilon(1e-12));
    CHECK(sp == doctest::Approx(balanced).epsilon(1e-12));  // 2x2 symmetry
  }
}

TEST_CASE("splits are reproducible and stratified within one sample") {
  SynthSpec sp;
  sp.n_samples = 83;
  sp.n_features = 3;
  sp.n_informative = 1;
  sp.n_classes = 3;
  sp.seed = 2;
  const Dataset ds = synthesize(sp);

  SplitSpec spec;
  spec.n_trials = 25;
  spec.seed = 77;
  const auto a = make_splits(ds.labels, ds.k(), spec);
  const auto b = make_splits(ds.labels, ds.k(), spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].train == b[t].train);
    CHECK(a[t].test == b[t].test);
  }

  std::vector<int> class_total(3, 0);
  for (int lab : ds.labels) ++class_total[static_cast<std::size_t>(lab)];
  for (const Split& s : a) {
    std::vector<int> class_train(3, 0);
    for (int i : s.train)
      ++class_train[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])];
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(class_train[static_cast<std::size_t>(c)] -
                     0.7 * class_total[static_cast<std::size_t>(c)]) <= 1.0);
    CHECK(s.train.size() + s.test.size() == ds.labels.size());
  }
}

TEST_CASE("evaluate_ranking at m = d ignores the ranking order") {
  SynthSpec sp;
  sp.n_samples = 60;
  sp.n_features = 6;
  sp.n_informative = 2;
  sp.n_classes = 2;
  sp.class_separation = 3.0;
  sp.seed = 21;
  const Dataset ds = synthesize(sp);
  SplitSpec split;
  split.n_trials = 10;
  split.seed = 5;

  const std::vector<int> identity{0, 1, 2, 3, 4, 5};
  const std::vector<int> permuted{5, 3, 0, 4, 2, 1};
  const auto r1 = evaluate_ranking(ds, identity, {6}, split);
  const auto r2 = evaluate_ranking(ds, permuted, {6}, split);
  CHECK(r1.per_size[0].mean_accuracy == r2.per_size[0].mean_accuracy);
  CHECK(r1.per_size[0].macro_sensitivity == r2.per_size[0].macro_sensitivity);
}

TEST_CASE("well-ranked separable data classifies almost perfectly") {
  SynthSpec sp;
  sp.n_samples = 120;
  sp.n_features = 10;
  sp.n_informative = 3;
  sp.n_classes = 2;
  sp.class_separation = 8.0;
  sp.noise_std = 0.5;
  sp.seed = 404;
  const Dataset ds = synthesize(sp);

  std::vector<int> ranking(10);
  std::iota(ranking.begin(), ranking.end(), 0);  // informative come first
  SplitSpec split;
  split.n_trials = 30;
  split.seed = 11;
  const auto rep = evaluate_ranking(ds, ranking, {3, 5, 10}, split);
  for (const auto& sm : rep.per_size) CHECK(sm.mean_accuracy > 0.95);
}

TEST_CASE("labels split at random over identical features stay at chance") {
  std::mt19937_64 rng(909);
  std::normal_distribution<double> gauss;
  const int n = 200;
  Matrix x(5, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < 5; ++i) x(i, j) = gauss(rng);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % 2;
  const Dataset ds = make_dataset(x, labels);

  std::vector<int> ranking{0, 1, 2, 3, 4};
  SplitSpec split;
  split.n_trials = 40;
  split.seed = 13;
  const auto rep = evaluate_ranking(ds, ranking, {5}, split);
  CHECK(std::abs(rep.per_size[0].mean_accuracy - 0.5) < 0.1);
}

TEST_CASE("a single trial reports zero accuracy spread") {
  SynthSpec sp;
  sp.n_samples = 40;
  sp.n_features = 4;
  sp.n_informative = 2;
  sp.n_classes = 2;
  sp.seed = 3;
  const Dataset ds = synthesize(sp);
  SplitSpec split;
  split.n_trials = 1;
  const auto rep = evaluate_ranking(ds, {0, 1, 2, 3}, {2, 4}, split);
  for (const auto& sm : rep.per_size) CHECK(sm.std_accuracy == 0.0);
}

TEST_CASE("per-trial accuracy equals the confusion trace ratio") {
  SynthSpec sp;
  sp.n_samples = 50;
  sp.n_features = 4;
  sp.n_informative = 2;
  sp.n_classes = 2;
  sp.class_separation = 2.0;
  sp.seed = 815;
  const Dataset ds = synthesize(sp);
  SplitSpec split;
  split.n_trials = 1;
  split.seed = 99;
  const auto rep = evaluate_ranking(ds, {0, 1, 2, 3}, {4}, split);

  // recompute the single trial by hand
  const auto splits = make_splits(ds.labels, ds.k(), split);
  const Split& s = splits[0];
  Matrix train = ds.features(Eigen::all, s.train);
  Matrix test = ds.features(Eigen::all, s.test);
  std::vector<int> train_labels, test_labels;
  for (int i : s.train) train_labels.push_back(ds.labels[static_cast<std::size_t>(i)]);
  for (int i : s.test) test_labels.push_back(ds.labels[static_cast<std::size_t>(i)]);
  const auto preds = knn_classify(train, train_labels, test, 5);
  Matrix conf = Matrix::Zero(2, 2);
  for (std::size_t i = 0; i < preds.size(); ++i)
    conf(test_labels[i], preds[i]) += 1.0;
  CHECK(rep.per_size[0].mean_accuracy ==
        doctest::Approx(conf.trace() / conf.sum()).epsilon(1e-12));
}

TEST_CASE("evaluate_ranking validates its arguments") {
  SynthSpec sp;
  sp.n_samples = 20;
  sp.n_features = 3;
  sp.n_informative = 1;
  sp.n_classes = 2;
  sp.seed = 1;
  const Dataset ds = synthesize(sp);
  SplitSpec split;
  split.n_trials = 2;
  CHECK_THROWS_AS(evaluate_ranking(ds, {0, 1}, {1}, split),
                  std::invalid_argument);  // not a permutation
  CHECK_THROWS_AS(evaluate_ranking(ds, {0, 1, 2}, {4}, split),
                  std::invalid_argument);  // size out of range
  CHECK_THROWS_AS(evaluate_ranking(ds, {0, 1, 2}, {}, split),
                  std::invalid_argument);  // empty sizes
}
