#include "bindiag/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bindiag/error.hpp"
#include "bindiag/parallel.hpp"

namespace bindiag {

namespace {

double accuracyOf(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

double mutualInformation(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  if (x.size() != y.size()) throw InvalidInput("mutualInformation: length mismatch");
  if (x.empty()) throw InvalidInput("mutualInformation: empty input");
  const std::size_t ax = *std::max_element(x.begin(), x.end()) + 1u;
  const std::size_t ay = *std::max_element(y.begin(), y.end()) + 1u;
  std::vector<std::size_t> joint(ax * ay, 0), px(ax, 0), py(ay, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++joint[x[i] * ay + y[i]];
    ++px[x[i]];
    ++py[y[i]];
  }
  const double n = static_cast<double>(x.size());
  double mi = 0.0;
  for (std::size_t a = 0; a < ax; ++a) {
    for (std::size_t b = 0; b < ay; ++b) {
      const auto nab = joint[a * ay + b];
      if (nab == 0) continue;
      const double pab = static_cast<double>(nab) / n;
      mi += pab * std::log2(static_cast<double>(nab) * n /
                            (static_cast<double>(px[a]) * static_cast<double>(py[b])));
    }
  }
  return std::max(0.0, mi);
}

SelectionResult mrmrRank(const BitMatrix& matrix, std::span<const std::uint8_t> labels,
                         std::size_t k) {
  if (labels.size() != matrix.rows()) throw InvalidInput("mrmrRank: label count mismatch");
  const std::size_t cols = matrix.cols();
  k = std::min(k, cols);

  std::vector<std::vector<std::uint8_t>> columns(cols);
  std::vector<double> relevance(cols);
  parallelFor(cols, [&](std::size_t c) {
    columns[c] = matrix.column(c);
    relevance[c] = mutualInformation(columns[c], labels);
  });

  SelectionResult result;
  std::vector<double> redundancySum(cols, 0.0);
  std::vector<bool> selected(cols, false);
  for (std::size_t step = 0; step < k; ++step) {
    if (step > 0) {
      const auto& last = columns[result.orderedColumns.back()];
      parallelFor(cols, [&](std::size_t c) {
        if (!selected[c]) redundancySum[c] += mutualInformation(columns[c], last);
      });
    }
    std::size_t best = cols;
    double bestScore = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cols; ++c) {
      if (selected[c]) continue;
      const double redundancy = step == 0 ? 0.0 : redundancySum[c] / static_cast<double>(step);
      const double score = relevance[c] - redundancy;
      if (best == cols || score > bestScore + kScoreTieTolerance) {
        best = c;
        bestScore = score;
      }
    }
    selected[best] = true;
    result.orderedColumns.push_back(best);
    const double redundancy = step == 0 ? 0.0 : redundancySum[best] / static_cast<double>(step);
    result.scores.push_back({best, relevance[best], redundancy, bestScore});
  }
  return result;
}

std::vector<CurvePoint> forwardCurve(const BitMatrix& train, std::span<const std::uint8_t> labels,
                                     std::span<const std::size_t> rankedColumns,
                                     const Trainer& trainer, std::span<const EvalSet> evalSets,
                                     std::size_t maxK) {
  if (maxK > rankedColumns.size()) throw InvalidInput("forwardCurve: maxK exceeds ranked columns");
  std::vector<std::size_t> trainRows(train.rows());
  for (std::size_t i = 0; i < trainRows.size(); ++i) trainRows[i] = i;

  std::vector<CurvePoint> curve;
  curve.reserve(maxK);
  for (std::size_t k = 1; k <= maxK; ++k) {
    const auto cols = rankedColumns.first(k);
    const BitMatrix trainK = train.select(trainRows, cols);
    const FittedClassifier model = trainer(trainK, labels);

    CurvePoint point;
    point.k = k;
    point.oobAccuracy = model.oobAccuracy();
    point.trainPredictions = model.predictAll(trainK);
    point.trainAccuracy = accuracyOf(point.trainPredictions, labels);
    for (const auto& set : evalSets) {
      std::vector<std::size_t> rows(set.matrix->rows());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      const BitMatrix evalK = set.matrix->select(rows, cols);
      auto predicted = model.predictAll(evalK);
      point.evalAccuracies.push_back(accuracyOf(predicted, set.labels));
      point.evalPredictions.push_back(std::move(predicted));
    }
    curve.push_back(std::move(point));
  }
  return curve;
}

std::size_t selectOptimalK(std::span<const CurvePoint> curve, std::size_t maxK) {
  if (curve.empty()) throw InvalidInput("selectOptimalK: empty curve");
  std::size_t bestK = 0;
  double bestAccuracy = -1.0;
  for (const auto& point : curve) {
    if (point.k < 1 || point.k > maxK) continue;
    if (point.trainAccuracy > bestAccuracy ||
        (point.trainAccuracy == bestAccuracy && point.k < bestK)) {
      bestAccuracy = point.trainAccuracy;
      bestK = point.k;
    }
  }
  if (bestK == 0) throw InvalidInput("selectOptimalK: no curve point with K <= maxK");
  return bestK;
}

}  // namespace bindiag
