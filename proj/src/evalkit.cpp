#include "fsor/evalkit.hpp"

#include "fsor/logging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fsor {

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  if (n_trials < 1)
    throw std::invalid_argument("split: n_trials must be >= 1");
}

std::vector<Split> make_splits(const std::vector<int>& labels, int k,
                               const SplitSpec& spec) {
  spec.validate();
  const int n = static_cast<int>(labels.size());
  if (n < 2) throw std::invalid_argument("split: needs at least two samples");

  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    const int lab = labels[static_cast<std::size_t>(i)];
    if (lab < 0 || lab >= k)
      throw std::invalid_argument("split: label out of range");
    by_class[static_cast<std::size_t>(lab)].push_back(i);
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<Split> splits;
  splits.reserve(static_cast<std::size_t>(spec.n_trials));
  for (int t = 0; t < spec.n_trials; ++t) {
    Split s;
    if (spec.stratified) {
      for (int c = 0; c < k; ++c) {
        std::vector<int> idx = by_class[static_cast<std::size_t>(c)];
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto sz = static_cast<long>(idx.size());
        long ntr = std::lround(spec.train_fraction * static_cast<double>(sz));
        ntr = std::clamp(ntr, 0L, sz);
        s.train.insert(s.train.end(), idx.begin(), idx.begin() + ntr);
        s.test.insert(s.test.end(), idx.begin() + ntr, idx.end());
      }
    } else {
      std::vector<int> idx(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      long ntr = std::lround(spec.train_fraction * static_cast<double>(n));
      ntr = std::clamp(ntr, 1L, static_cast<long>(n - 1));
      s.train.assign(idx.begin(), idx.begin() + ntr);
      s.test.assign(idx.begin() + ntr, idx.end());
    }
    if (s.train.empty() || s.test.empty())
      throw std::invalid_argument(
          "split: a trial produced an empty train or test set");
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    splits.push_back(std::move(s));
  }
  return splits;
}

std::vector<int> knn_classify(const Matrix& train_x,
                              const std::vector<int>& train_labels,
                              const Matrix& test_x, int k_neighbors) {
  const Eigen::Index n_train = train_x.cols();
  const Eigen::Index n_test = test_x.cols();
  if (n_train < 1) throw std::invalid_argument("knn: empty training set");
  if (train_x.rows() != test_x.rows())
    throw std::invalid_argument("knn: feature dimensions differ");
  if (static_cast<Eigen::Index>(train_labels.size()) != n_train)
    throw std::invalid_argument("knn: label count mismatch");
  if (k_neighbors < 1)
    throw std::invalid_argument("knn: k_neighbors must be >= 1");
  if (k_neighbors > n_train) {
    logging::warn("knn: k_neighbors=" + std::to_string(k_neighbors) +
                  " exceeds training size " + std::to_string(n_train) +
                  "; clamped");
    k_neighbors = static_cast<int>(n_train);
  }
  int n_classes = 0;
  for (int lab : train_labels) n_classes = std::max(n_classes, lab + 1);

  const Vector train_sq = train_x.colwise().squaredNorm();
  const Vector test_sq = test_x.colwise().squaredNorm();
  const Matrix cross = train_x.transpose() * test_x;  // n_train x n_test

  std::vector<int> preds(static_cast<std::size_t>(n_test), 0);
  std::vector<int> order(static_cast<std::size_t>(n_train));
  std::vector<int> votes(static_cast<std::size_t>(n_classes));
  for (Eigen::Index j = 0; j < n_test; ++j) {
    std::iota(order.begin(), order.end(), 0);
    auto closer = [&](int a, int b) {
      const double da = train_sq(a) - 2.0 * cross(a, j);
      const double db = train_sq(b) - 2.0 * cross(b, j);
      if (da != db) return da < db;
      return a < b;  // distance tie: lower training index
    };
    std::partial_sort(order.begin(), order.begin() + k_neighbors, order.end(),
                      closer);
    std::fill(votes.begin(), votes.end(), 0);
    for (int t = 0; t < k_neighbors; ++t)
      ++votes[static_cast<std::size_t>(
          train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])])];
    int best = 0;
    for (int c = 1; c < n_classes; ++c)
      if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)])
        best = c;  // vote tie: smallest class index wins by scan order
    preds[static_cast<std::size_t>(j)] = best;
  }
  return preds;
}

std::pair<double, double> sensitivity_specificity(const Matrix& confusion) {
  const Eigen::Index k = confusion.rows();
  if (k != confusion.cols() || k < 1)
    throw std::invalid_argument("sensitivity_specificity: square matrix required");
  if ((confusion.array() < 0.0).any())
    throw std::invalid_argument("sensitivity_specificity: negative counts");
  const double total = confusion.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("sensitivity_specificity: no samples");

  double sens = 0.0, spec = 0.0;
  int counted = 0;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double row = confusion.row(c).sum();
    if (!(row > 0.0)) continue;  // class absent: excluded from both averages
    const double col = confusion.col(c).sum();
    const double tp = confusion(c, c);
    const double fp = col - tp;
    const double tn = total - row - col + tp;
    sens += tp / row;
    // tn + fp == 0 only when every true sample is class c; no false positive
    // is possible, so the one-vs-rest specificity is vacuously perfect
    spec += (tn + fp) > 0.0 ? tn / (tn + fp) : 1.0;
    ++counted;
  }
  if (counted == 0)
    throw std::invalid_argument("sensitivity_specificity: empty confusion");
  return {sens / counted, spec / counted};
}

EvalReport evaluate_ranking(const Dataset& dataset,
                            const std::vector<int>& ranking,
                            const std::vector<int>& sizes,
                            const SplitSpec& split, int k_neighbors,
                            bool normalize) {
  dataset.validate();
  const Eigen::Index d = dataset.d();
  const int k = dataset.k();
  if (!is_permutation(ranking, d))
    throw std::invalid_argument("evaluate_ranking: ranking is not a permutation of 0..d-1");
  if (sizes.empty())
    throw std::invalid_argument("evaluate_ranking: no feature-set sizes given");
  std::vector<int> ms = sizes;
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.front() < 1 || ms.back() > d)
    throw std::invalid_argument("evaluate_ranking: sizes must lie in 1..d");

  const auto splits = make_splits(dataset.labels, k, split);

  EvalReport rep;
  rep.classifier_name = "knn";
  for (const Split& s : splits) {
    std::vector<bool> present(static_cast<std::size_t>(k), false);
    for (int i : s.test)
      present[static_cast<std::size_t>(dataset.labels[static_cast<std::size_t>(i)])] = true;
    for (int c = 0; c < k; ++c)
      if (!present[static_cast<std::size_t>(c)]) ++rep.excluded_class_trials;
  }

  for (int m : ms) {
    // the feature subset is a set: canonical ascending order makes the
    // result independent of the ranking order within the selected prefix
    std::vector<int> sel(ranking.begin(), ranking.begin() + m);
    std::sort(sel.begin(), sel.end());
    const Matrix xsub = dataset.features(sel, Eigen::all);

    std::vector<double> accs, senss, specs;
    accs.reserve(splits.size());
    for (const Split& s : splits) {
      Matrix train = xsub(Eigen::all, s.train);
      Matrix test = xsub(Eigen::all, s.test);
      if (normalize) {
        const double ntr = static_cast<double>(train.cols());
        for (Eigen::Index r = 0; r < train.rows(); ++r) {
          const double mean = train.row(r).mean();
          train.row(r).array() -= mean;
          test.row(r).array() -= mean;
          const double var = train.row(r).squaredNorm() / ntr;
          if (var > 0.0) {
            const double sd = std::sqrt(var);
            train.row(r) /= sd;
            test.row(r) /= sd;
          }
        }
      }
      std::vector<int> train_labels, test_labels;
      train_labels.reserve(s.train.size());
      for (int i : s.train)
        train_labels.push_back(dataset.labels[static_cast<std::size_t>(i)]);
      for (int i : s.test)
        test_labels.push_back(dataset.labels[static_cast<std::size_t>(i)]);

      const auto preds = knn_classify(train, train_labels, test, k_neighbors);
      Matrix conf = Matrix::Zero(k, k);
      for (std::size_t i = 0; i < preds.size(); ++i)
        conf(test_labels[i], preds[i]) += 1.0;
      accs.push_back(conf.trace() / conf.sum());
      const auto [se, sp] = sensitivity_specificity(conf);
      senss.push_back(se);
      specs.push_back(sp);
    }

    const double trials = static_cast<double>(accs.size());
    SizeMetrics sm;
    sm.m = m;
    sm.mean_accuracy =
        std::accumulate(accs.begin(), accs.end(), 0.0) / trials;
    double var = 0.0;
    for (double a : accs) var += (a - sm.mean_accuracy) * (a - sm.mean_accuracy);
    sm.std_accuracy = std::sqrt(var / trials);
    sm.macro_sensitivity =
        std::accumulate(senss.begin(), senss.end(), 0.0) / trials;
    sm.macro_specificity =
        std::accumulate(specs.begin(), specs.end(), 0.0) / trials;
    rep.per_size.push_back(sm);
  }
  return rep;
}

}  // namespace fsor
