#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bindiag/bit_matrix.hpp"
#include "bindiag/classifiers.hpp"

namespace bindiag {

/// Plug-in mutual information in bits between two discrete code sequences.
/// Throws InvalidInput on length mismatch or empty input.
double mutualInformation(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

struct MIScore {
  std::size_t columnIndex = 0;
  double relevance = 0.0;   // MI(x; y)
  double redundancy = 0.0;  // mean MI(x; x_s) over already selected s
  double score = 0.0;       // relevance - redundancy
};

struct SelectionResult {
  std::vector<std::size_t> orderedColumns;
  std::vector<MIScore> scores;
};

/// Criterion values closer than this are ties, resolved by lowest column index.
inline constexpr double kScoreTieTolerance = 1e-12;

/// Greedy mRMR ranking, difference (MID) form. Returns min(K, cols) columns.
SelectionResult mrmrRank(const BitMatrix& matrix, std::span<const std::uint8_t> labels,
                         std::size_t k);

/// A labeled set of rows over the full column space.
struct EvalSet {
  const BitMatrix* matrix = nullptr;
  std::span<const std::uint8_t> labels;
};

using Trainer =
    std::function<FittedClassifier(const BitMatrix&, std::span<const std::uint8_t>)>;

struct CurvePoint {
  std::size_t k = 0;
  double trainAccuracy = 0.0;
  std::optional<double> oobAccuracy;
  std::vector<double> evalAccuracies;  // one per EvalSet
  std::vector<std::uint8_t> trainPredictions;
  std::vector<std::vector<std::uint8_t>> evalPredictions;
};

/// For K = 1..maxK, trains on the first K ranked columns and records
/// accuracies on the training rows and on every EvalSet.
std::vector<CurvePoint> forwardCurve(const BitMatrix& train, std::span<const std::uint8_t> labels,
                                     std::span<const std::size_t> rankedColumns,
                                     const Trainer& trainer, std::span<const EvalSet> evalSets,
                                     std::size_t maxK);

/// K in [1, maxK] with the highest training accuracy, smallest on ties.
std::size_t selectOptimalK(std::span<const CurvePoint> curve, std::size_t maxK = 30);

}  // namespace bindiag
