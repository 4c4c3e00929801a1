#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bindiag/bit_matrix.hpp"
#include "bindiag/signal_sim.hpp"
#include "bindiag/stat_tests.hpp"

namespace bindiag {

// Aggregators turn the stride-1 bit series of one (test, tau, level) into a
// single indicator bit. Derived aggregators first keep every delta-th bit.

/// 1 iff at least one window rejects.
struct AnyWindow {
  friend bool operator==(const AnyWindow&, const AnyWindow&) = default;
};

/// 1 iff the fraction of rejecting windows is at least beta.
struct GlobalRatio {
  double beta = 0.1;
  int delta = 1;
  friend bool operator==(const GlobalRatio&, const GlobalRatio&) = default;
};

/// 1 iff some run of consecutive rejecting windows has length >= ceil(beta * n).
struct ConsecutiveRatio {
  double beta = 0.1;
  int delta = 1;
  friend bool operator==(const ConsecutiveRatio&, const ConsecutiveRatio&) = default;
};

/// 1 iff some block of l consecutive windows holds at least k rejections.
struct LocalRatio {
  int l = 3;
  int k = 2;
  int delta = 1;
  friend bool operator==(const LocalRatio&, const LocalRatio&) = default;
};

using Aggregator = std::variant<AnyWindow, GlobalRatio, ConsecutiveRatio, LocalRatio>;

/// Recipe for one indicator column. smoothing is the moving-average width
/// applied to the signal first; 1 means the raw signal.
struct IndicatorSpec {
  TestKind test = TestKind::MWU;
  int tau = 30;
  double level = 0.005;
  int smoothing = 1;
  Aggregator aggregator;
  std::string name;

  bool smoothed() const { return smoothing > 1; }
  friend bool operator==(const IndicatorSpec&, const IndicatorSpec&) = default;
};

struct GridConfig {
  std::vector<TestKind> tests{TestKind::MWU, TestKind::KS2, TestKind::FVar};
  std::vector<int> taus{30, 50, 100};
  std::vector<double> levels{0.005, 0.1, 0.5};
  std::vector<int> deltas{1, 5, 10};
  std::vector<double> betas{0.1, 0.3, 0.5};
  std::vector<std::pair<int, int>> localPairs{{3, 2}, {5, 3}, {5, 4}};  // (l, k)
  std::vector<int> smoothings{1, 5};

  /// Throws InvalidInput if any value violates an operation precondition.
  void validate() const;
  std::size_t simplePerVariant() const;
  std::size_t derivedPerVariant() const;
  std::size_t columnCount() const;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Keeps positions 0, delta, 2*delta, ...
std::vector<std::uint8_t> subsample(std::span<const std::uint8_t> bits, int delta);

std::uint8_t simpleIndicator(std::span<const std::uint8_t> bits);
std::uint8_t globalRatio(std::span<const std::uint8_t> bits, double beta, int delta);
std::uint8_t consecutiveRatio(std::span<const std::uint8_t> bits, double beta, int delta);
/// Returns 0 when fewer than l bits survive subsampling.
std::uint8_t localRatio(std::span<const std::uint8_t> bits, int l, int k, int delta);
std::uint8_t applyAggregator(const Aggregator& aggregator, std::span<const std::uint8_t> bits);

/// Smallest integer count that reaches fraction beta of n. A 1e-9 slack
/// absorbs binary representation error, so 0.3 * 10 gives 3.
std::size_t fractionThreshold(double beta, std::size_t n);

/// Name following the explanation-table scheme ("u test", "confu(2,3)",
/// "ratef(0.1)", "lseqf(0.3)") plus a bracketed detail suffix that makes it
/// unique, e.g. "confu(2,3)[tau=30,level=0.005,delta=1,ma=1]".
std::string nameIndicator(const IndicatorSpec& spec);
/// Name without the detail suffix.
std::string shortName(const IndicatorSpec& spec);

/// Every column of the grid in canonical order: smoothing, test, tau, level,
/// then aggregator kind and parameters, each ascending.
std::vector<IndicatorSpec> buildCatalog(const GridConfig& grid);

struct IndicatorMatrix {
  BitMatrix cells;
  std::vector<IndicatorSpec> catalog;
  std::vector<std::int64_t> observationIds;
  std::vector<AnomalyClass> labels;

  std::vector<std::uint8_t> labelCodes() const;
};

/// Indicator bits for one signal, one per catalog column. Indicators whose
/// window does not fit the (smoothed) signal are 0.
std::vector<std::uint8_t> indicatorRow(const Signal& signal, const GridConfig& grid);

IndicatorMatrix buildMatrix(const std::vector<Signal>& signals, const GridConfig& grid);

struct DedupResult {
  IndicatorMatrix matrix;
  /// Original index of each surviving column.
  std::vector<std::size_t> keptColumns;
  /// For every original column, the index of its surviving twin in matrix.
  std::vector<std::size_t> representative;
};

/// Keeps the first column of each group of identical columns.
DedupResult dedupColumns(const IndicatorMatrix& matrix);

}  // namespace bindiag
