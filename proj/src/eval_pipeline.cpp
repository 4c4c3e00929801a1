#include "bindiag/eval_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "bindiag/error.hpp"

namespace bindiag {

namespace {

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

std::vector<std::uint8_t> codesOf(const IndicatorMatrix& matrix, std::span<const std::size_t> rows) {
  std::vector<std::uint8_t> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(static_cast<std::uint8_t>(matrix.labels[r]));
  return out;
}

// Largest-remainder apportionment of `total` across classes in proportion
// to `counts`; leftover units go to the lowest class codes among equal
// remainders.
std::vector<std::size_t> proportionalQuotas(const std::vector<std::size_t>& counts,
                                            std::size_t total) {
  const std::size_t all = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::vector<std::size_t> quota(counts.size());
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder, class)
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    quota[c] = counts[c] * total / all;
    assigned += quota[c];
    remainders.emplace_back(counts[c] * total % all, c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++quota[remainders[i].second];
  return quota;
}

// Maps predictions over plan.testRows to slice accuracies.
std::vector<double> sliceAccuracies(const SplitPlan& plan, const IndicatorMatrix& matrix,
                                    std::span<const std::uint8_t> testPredictions) {
  std::vector<std::size_t> position(matrix.labels.size(), 0);
  for (std::size_t i = 0; i < plan.testRows.size(); ++i) position[plan.testRows[i]] = i;
  std::vector<double> out;
  for (const auto& slice : plan.slices) {
    std::size_t hits = 0;
    for (auto r : slice) hits += testPredictions[position[r]] == static_cast<std::uint8_t>(matrix.labels[r]);
    out.push_back(static_cast<double>(hits) / static_cast<double>(slice.size()));
  }
  return out;
}

EvalReport assembleReport(ClassifierKind kind, std::size_t indicators,
                          std::span<const std::uint8_t> trainPred,
                          std::span<const std::uint8_t> trainTruth,
                          std::span<const std::uint8_t> testPred,
                          std::span<const std::uint8_t> testTruth, std::optional<double> oob,
                          const SplitPlan& plan, const IndicatorMatrix& matrix) {
  EvalReport report;
  report.classifier = kind;
  report.numIndicators = indicators;
  report.trainAccuracy = accuracy(trainPred, trainTruth);
  report.oobAccuracy = oob;
  report.sliceAccuracies = sliceAccuracies(plan, matrix, testPred);
  std::tie(report.sliceMean, report.sliceSd) = meanAndSd(report.sliceAccuracies);
  report.testAccuracy = accuracy(testPred, testTruth);
  report.trainConfusion = confusionMatrix(trainPred, trainTruth);
  report.confusion = confusionMatrix(testPred, testTruth);
  return report;
}

}  // namespace

std::pair<double, double> meanAndSd(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

SplitPlan makeSplit(std::span<const AnomalyClass> labels, std::uint64_t seed,
                    const SplitOptions& options) {
  const std::size_t testSize = options.sliceCount * options.sliceSize;
  if (options.sliceCount == 0 || options.sliceSize == 0 || options.trainSize == 0) {
    throw InvalidInput("makeSplit: sizes must be positive");
  }
  if (options.trainSize + testSize != labels.size()) {
    throw InvalidInput("makeSplit: " + std::to_string(labels.size()) +
                       " rows cannot form a train set of " + std::to_string(options.trainSize) +
                       " plus " + std::to_string(options.sliceCount) + " slices of " +
                       std::to_string(options.sliceSize));
  }

  std::vector<std::vector<std::size_t>> byClass(kNumClasses);
  for (std::size_t i = 0; i < labels.size(); ++i) byClass[classCode(labels[i])].push_back(i);
  std::vector<std::size_t> counts;
  for (const auto& rows : byClass) {
    if (rows.empty()) throw InvalidInput("makeSplit: every class must be present");
    counts.push_back(rows.size());
  }

  std::vector<std::size_t> trainQuota;
  if (options.balancedTrain) {
    if (options.trainSize % kNumClasses != 0) {
      throw InvalidInput("makeSplit: balanced train size must be divisible by the class count");
    }
    trainQuota.assign(kNumClasses, options.trainSize / kNumClasses);
  } else {
    trainQuota = proportionalQuotas(counts, options.trainSize);
  }

  SplitPlan plan;
  plan.seed = seed;
  plan.slices.resize(options.sliceCount);
  std::mt19937_64 rng(seed);
  std::size_t nextExtraSlice = 0;
  for (std::size_t c = 0; c < byClass.size(); ++c) {
    auto rows = byClass[c];
    if (trainQuota[c] > rows.size()) {
      throw InvalidInput("makeSplit: class " + std::to_string(c) + " too small for its train quota");
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    plan.trainRows.insert(plan.trainRows.end(), rows.begin(),
                          rows.begin() + static_cast<std::ptrdiff_t>(trainQuota[c]));
    const std::size_t testCount = rows.size() - trainQuota[c];
    const std::size_t base = testCount / options.sliceCount;
    std::size_t extras = testCount % options.sliceCount;
    auto cursor = rows.begin() + static_cast<std::ptrdiff_t>(trainQuota[c]);
    std::vector<std::size_t> take(options.sliceCount, base);
    for (; extras > 0; --extras) {
      ++take[nextExtraSlice];
      nextExtraSlice = (nextExtraSlice + 1) % options.sliceCount;
    }
    for (std::size_t s = 0; s < options.sliceCount; ++s) {
      plan.slices[s].insert(plan.slices[s].end(), cursor,
                            cursor + static_cast<std::ptrdiff_t>(take[s]));
      cursor += static_cast<std::ptrdiff_t>(take[s]);
    }
  }

  std::sort(plan.trainRows.begin(), plan.trainRows.end());
  for (auto& slice : plan.slices) {
    if (slice.size() != options.sliceSize) {
      throw InvalidInput("makeSplit: class composition does not allow equal stratified slices");
    }
    std::sort(slice.begin(), slice.end());
    plan.testRows.insert(plan.testRows.end(), slice.begin(), slice.end());
  }
  std::sort(plan.testRows.begin(), plan.testRows.end());
  return plan;
}

double accuracy(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth) {
  if (predicted.size() != truth.size()) throw InvalidInput("accuracy: length mismatch");
  if (truth.empty()) throw InvalidInput("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Confusion confusionMatrix(std::span<const std::uint8_t> predicted,
                          std::span<const std::uint8_t> truth) {
  if (predicted.size() != truth.size()) throw InvalidInput("confusionMatrix: length mismatch");
  if (truth.empty()) throw InvalidInput("confusionMatrix: empty input");
  Confusion m{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= kNumClasses || predicted[i] >= kNumClasses) {
      throw InvalidInput("confusionMatrix: class code out of range");
    }
    ++m[truth[i]][predicted[i]];
  }
  return m;
}

std::array<double, kNumClasses> perClassError(const Confusion& confusion) {
  std::array<double, kNumClasses> err{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto total = std::accumulate(confusion[c].begin(), confusion[c].end(), std::int64_t{0});
    err[c] = total == 0 ? 0.0
                        : static_cast<double>(total - confusion[c][c]) / static_cast<double>(total);
  }
  return err;
}

EvalReport evaluateColumns(const IndicatorMatrix& matrix, const SplitPlan& plan,
                           ClassifierKind kind, std::span<const std::size_t> columns,
                           const ForestParams& forest) {
  const BitMatrix trainX = matrix.cells.select(plan.trainRows, columns);
  const BitMatrix testX = matrix.cells.select(plan.testRows, columns);
  const auto trainY = codesOf(matrix, plan.trainRows);
  const auto testY = codesOf(matrix, plan.testRows);
  const auto model = fitClassifier(kind, trainX, trainY, forest);
  const auto trainPred = model.predictAll(trainX);
  const auto testPred = model.predictAll(testX);
  return assembleReport(kind, columns.size(), trainPred, trainY, testPred, testY,
                        model.oobAccuracy(), plan, matrix);
}

EvalReport runFullIndicators(const IndicatorMatrix& matrix, const SplitPlan& plan,
                             ClassifierKind kind, const ForestParams& forest) {
  const auto all = iota(matrix.cells.cols());
  return evaluateColumns(matrix, plan, kind, all, forest);
}

ForwardRun runForwardSelection(const IndicatorMatrix& matrix, const SplitPlan& plan,
                               ClassifierKind kind, std::size_t curveMaxK, std::size_t kCap,
                               const ForestParams& forest) {
  const BitMatrix trainX = matrix.cells.selectRows(plan.trainRows);
  const BitMatrix testX = matrix.cells.selectRows(plan.testRows);
  const auto trainY = codesOf(matrix, plan.trainRows);
  const auto testY = codesOf(matrix, plan.testRows);

  ForwardRun run;
  run.classifier = kind;
  const std::size_t maxK = std::min(curveMaxK, matrix.cells.cols());
  run.selection = mrmrRank(trainX, trainY, maxK);

  const Trainer trainer = [&](const BitMatrix& x, std::span<const std::uint8_t> y) {
    return fitClassifier(kind, x, y, forest);
  };
  const EvalSet testSet{&testX, testY};
  const auto curve = forwardCurve(trainX, trainY, run.selection.orderedColumns, trainer,
                                  std::span(&testSet, 1), maxK);

  for (const auto& point : curve) {
    run.curve.push_back({point.k, assembleReport(kind, point.k, point.trainPredictions, trainY,
                                                 point.evalPredictions.front(), testY,
                                                 point.oobAccuracy, plan, matrix)});
  }
  run.kStar = selectOptimalK(curve, std::min(kCap, maxK));
  run.atKStar = run.curve[run.kStar - 1].report;

  if (kind == ClassifierKind::NaiveBayes) {
    const std::span<const std::size_t> chosen(run.selection.orderedColumns.data(), run.kStar);
    const auto model = nbTrain(trainX.select(iota(trainX.rows()), chosen), trainY);
    std::vector<IndicatorSpec> catalog;
    for (auto c : chosen) catalog.push_back(matrix.catalog[c]);
    run.explanation = explainTable(model, catalog, true);
    run.rawExplanation = explainTable(model, catalog, false);
  }
  return run;
}

std::vector<ClassErrorPoint> perClassErrorCurve(const ForwardRun& run) {
  std::vector<ClassErrorPoint> out;
  for (const auto& point : run.curve) {
    out.push_back({point.k, perClassError(point.report.trainConfusion),
                   perClassError(point.report.confusion)});
  }
  return out;
}

std::vector<ClassErrorPoint> perClassErrorCurve(const IndicatorMatrix& matrix,
                                                const SplitPlan& plan, ClassifierKind kind,
                                                std::size_t maxK, const ForestParams& forest) {
  return perClassErrorCurve(runForwardSelection(matrix, plan, kind, maxK, maxK, forest));
}

}  // namespace bindiag
