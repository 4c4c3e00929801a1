#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bindiag/bit_matrix.hpp"
#include "bindiag/indicator_bank.hpp"

namespace bindiag {

/// Bernoulli Naive Bayes over binary indicators. theta[c][j] estimates
/// P(x_j = 1 | class c) with one pseudo-count per outcome, so every theta is
/// strictly inside (0, 1).
struct NaiveBayesModel {
  std::vector<double> priors;
  std::vector<std::vector<double>> theta;
  std::vector<std::int64_t> classCounts;
  std::vector<std::vector<std::int64_t>> onesCounts;
  // log theta and log(1 - theta), cached for prediction.
  std::vector<std::vector<double>> logOn;
  std::vector<std::vector<double>> logOff;

  std::size_t numClasses() const { return priors.size(); }
  std::size_t numColumns() const { return theta.empty() ? 0 : theta.front().size(); }
  /// Unsmoothed frequency count(x_j = 1, y = c) / count(y = c).
  double rawTheta(std::size_t cls, std::size_t column) const;
};

/// Throws InvalidInput if some class in [0, numClasses) has no row.
NaiveBayesModel nbTrain(const BitMatrix& matrix, std::span<const std::uint8_t> labels,
                        int numClasses = kNumClasses);

/// Rebuilds priors, theta and the log caches from the counts.
NaiveBayesModel nbFromCounts(std::vector<std::int64_t> classCounts,
                             std::vector<std::vector<std::int64_t>> onesCounts);

struct NbPrediction {
  std::uint8_t cls = 0;
  std::vector<double> logScores;
};

NbPrediction nbPredict(const NaiveBayesModel& model, std::span<const std::uint8_t> row);

struct ExplanationRow {
  std::string name;       // full indicator name
  std::string shortName;  // e.g. "confu(2,3)"
  std::vector<double> theta;
};

/// One row per model column: P(indicator = 1 | class). `smoothed = false`
/// reports raw frequencies instead of the Laplace estimates.
std::vector<ExplanationRow> explainTable(const NaiveBayesModel& model,
                                         const std::vector<IndicatorSpec>& catalog,
                                         bool smoothed = true);

// Text format: header line "bindiag-naive-bayes 1 <classes> <columns>",
// then "priors", "class_counts", and one line per column with the catalog
// name, per-class one-counts and per-class theta.
void writeNaiveBayes(std::ostream& out, const NaiveBayesModel& model,
                     const std::vector<IndicatorSpec>& catalog);
NaiveBayesModel readNaiveBayes(std::istream& in, std::vector<std::string>* columnNames = nullptr);

}  // namespace bindiag
