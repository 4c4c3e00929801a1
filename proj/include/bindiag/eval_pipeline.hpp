#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bindiag/classifiers.hpp"
#include "bindiag/feature_select.hpp"
#include "bindiag/indicator_bank.hpp"

namespace bindiag {

struct SplitOptions {
  std::size_t trainSize = 1000;
  std::size_t sliceCount = 10;
  std::size_t sliceSize = 500;
  /// Equal class counts in the training set instead of dataset proportions.
  bool balancedTrain = false;
};

/// Row indices into an IndicatorMatrix. The slices partition the test set.
struct SplitPlan {
  std::vector<std::size_t> trainRows;
  std::vector<std::size_t> testRows;
  std::vector<std::vector<std::size_t>> slices;
  std::uint64_t seed = 0;
};

/// Stratified split. Training quotas follow the class proportions (largest
/// remainder, ties to the lowest class code); each slice gets floor(n_c / S)
/// rows of class c and the leftovers are dealt round-robin across slices.
/// Throws InvalidInput if trainSize + sliceCount * sliceSize != rows or a
/// class cannot fill its quota.
SplitPlan makeSplit(std::span<const AnomalyClass> labels, std::uint64_t seed,
                    const SplitOptions& options = {});

using Confusion = std::array<std::array<std::int64_t, kNumClasses>, kNumClasses>;

double accuracy(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth);
/// Entry [true][predicted].
Confusion confusionMatrix(std::span<const std::uint8_t> predicted,
                          std::span<const std::uint8_t> truth);
/// Per class: fraction of rows of that class predicted as something else.
std::array<double, kNumClasses> perClassError(const Confusion& confusion);

struct EvalReport {
  ClassifierKind classifier = ClassifierKind::NaiveBayes;
  std::size_t numIndicators = 0;
  double trainAccuracy = 0.0;
  std::optional<double> oobAccuracy;
  std::vector<double> sliceAccuracies;
  double sliceMean = 0.0;
  double sliceSd = 0.0;  // n - 1 denominator
  double testAccuracy = 0.0;
  Confusion trainConfusion{};
  Confusion confusion{};  // full test set
};

/// Trains on plan.trainRows restricted to `columns` and evaluates.
EvalReport evaluateColumns(const IndicatorMatrix& matrix, const SplitPlan& plan,
                           ClassifierKind kind, std::span<const std::size_t> columns,
                           const ForestParams& forest = {});

/// All columns of the matrix.
EvalReport runFullIndicators(const IndicatorMatrix& matrix, const SplitPlan& plan,
                             ClassifierKind kind, const ForestParams& forest = {});

struct ForwardPoint {
  std::size_t k = 0;
  EvalReport report;
};

struct ForwardRun {
  ClassifierKind classifier = ClassifierKind::NaiveBayes;
  SelectionResult selection;
  std::vector<ForwardPoint> curve;
  std::size_t kStar = 0;
  EvalReport atKStar;
  /// Naive Bayes at K*: one row per selected indicator, in mRMR order.
  std::vector<ExplanationRow> explanation;
  std::vector<ExplanationRow> rawExplanation;
};

/// mRMR over the training rows only, then the forward curve for
/// K = 1..curveMaxK and K* = argmax train accuracy over K <= kCap.
ForwardRun runForwardSelection(const IndicatorMatrix& matrix, const SplitPlan& plan,
                               ClassifierKind kind, std::size_t curveMaxK,
                               std::size_t kCap = 30, const ForestParams& forest = {});

struct ClassErrorPoint {
  std::size_t k = 0;
  std::array<double, kNumClasses> train{};
  std::array<double, kNumClasses> test{};
};

std::vector<ClassErrorPoint> perClassErrorCurve(const ForwardRun& run);
std::vector<ClassErrorPoint> perClassErrorCurve(const IndicatorMatrix& matrix,
                                                const SplitPlan& plan, ClassifierKind kind,
                                                std::size_t maxK, const ForestParams& forest = {});

/// Sample mean and n - 1 standard deviation.
std::pair<double, double> meanAndSd(std::span<const double> values);

}  // namespace bindiag
