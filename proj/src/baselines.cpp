#include "fsor/baselines.hpp"

#include <cmath>

namespace fsor {

namespace {

constexpr double kFisherCap = 1e12;

std::vector<Eigen::Index> class_counts(const Dataset& ds) {
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(ds.k()), 0);
  for (int lab : ds.labels) ++counts[static_cast<std::size_t>(lab)];
  return counts;
}

}  // namespace

FeatureScores fisher_score(const Dataset& dataset) {
  dataset.validate();
  const Eigen::Index d = dataset.d();
  const Eigen::Index n = dataset.n();
  const int k = dataset.k();
  const auto counts = class_counts(dataset);

  FeatureScores out;
  out.method_name = "fisher";
  out.scores = Vector::Zero(d);

  for (Eigen::Index j = 0; j < d; ++j) {
    const double mu = dataset.features.row(j).mean();
    double between = 0.0, within = 0.0;
    for (int c = 0; c < k; ++c) {
      const double nc = static_cast<double>(counts[static_cast<std::size_t>(c)]);
      double sum = 0.0, sumsq = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (dataset.labels[static_cast<std::size_t>(i)] != c) continue;
        const double v = dataset.features(j, i);
        sum += v;
        sumsq += v * v;
      }
      const double mc = sum / nc;
      const double var = std::max(0.0, sumsq / nc - mc * mc);
      between += nc * (mc - mu) * (mc - mu);
      within += nc * var;
    }
    double score;
    if (within > 0.0)
      score = std::min(between / within, kFisherCap);
    else
      score = between > 0.0 ? kFisherCap : 0.0;
    out.scores(j) = score;
  }
  out.ranking = descending_ranking(out.scores);
  return out;
}

FeatureScores correlation_score(const Dataset& dataset) {
  dataset.validate();
  if (dataset.n() < 3)
    throw std::invalid_argument("correlation_score: needs n >= 3");
  const Eigen::Index d = dataset.d();
  const Eigen::Index n = dataset.n();
  const int k = dataset.k();
  const double nn = static_cast<double>(n);
  const auto counts = class_counts(dataset);

  FeatureScores out;
  out.method_name = "cc";
  out.scores = Vector::Zero(d);

  for (Eigen::Index j = 0; j < d; ++j) {
    const double xbar = dataset.features.row(j).mean();
    const double xvar =
        (dataset.features.row(j).array() - xbar).square().sum() / nn;
    if (!(xvar > 0.0)) continue;  // constant feature scores 0
    const double xstd = std::sqrt(xvar);
    double best = 0.0;
    for (int c = 0; c < k; ++c) {
      const double p = static_cast<double>(counts[static_cast<std::size_t>(c)]) / nn;
      const double ivar = p * (1.0 - p);
      if (!(ivar > 0.0)) continue;
      double class_sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (dataset.labels[static_cast<std::size_t>(i)] == c)
          class_sum += dataset.features(j, i);
      const double cov = class_sum / nn - xbar * p;
      best = std::max(best, std::abs(cov / (xstd * std::sqrt(ivar))));
    }
    out.scores(j) = best;
  }
  out.ranking = descending_ranking(out.scores);
  return out;
}

}  // namespace fsor
