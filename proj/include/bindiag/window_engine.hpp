#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bindiag/stat_tests.hpp"

namespace bindiag {

/// p-values of one test over every stride-1 window of a (possibly smoothed)
/// signal, in window order.
struct PValueSeries {
  TestKind testKind = TestKind::MWU;
  int tau = 0;
  bool smoothed = false;
  std::vector<double> pValues;
};

struct BitSeries {
  std::vector<std::uint8_t> bits;
  double level = 0.0;
};

/// All m - tau + 1 windows of length tau, window k covering [k, k + tau).
/// Throws InvalidInput for odd tau or tau > m.
std::vector<std::span<const double>> extractWindows(std::span<const double> values, int tau);

/// Tests the first half of the window against the second half. A degenerate
/// window (zero variance for the F-test) yields p = 1.
TestResult windowTest(std::span<const double> window, TestKind test);

PValueSeries pValueSeries(std::span<const double> values, TestKind test, int tau,
                          bool smoothed = false);

/// bit = 1 iff p < level. Throws InvalidInput for level outside (0, 1).
BitSeries binarize(const PValueSeries& series, double level);

/// Centered moving average without padding: m - width + 1 outputs.
std::vector<double> movingAverage(std::span<const double> values, int width = 5);

/// Debug dump: "position,p_value" rows.
void writePValueSeriesCsv(std::ostream& out, const PValueSeries& series);

}  // namespace bindiag
