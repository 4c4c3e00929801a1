#include "bindiag/window_engine.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "bindiag/error.hpp"

namespace bindiag {

namespace {

void checkTau(std::size_t length, int tau) {
  if (tau <= 0 || tau % 2 != 0) {
    throw InvalidInput("window length must be positive and even, got " + std::to_string(tau));
  }
  if (static_cast<std::size_t>(tau) > length) {
    throw InvalidInput("window length " + std::to_string(tau) + " exceeds signal length " +
                       std::to_string(length));
  }
}

}  // namespace

std::vector<std::span<const double>> extractWindows(std::span<const double> values, int tau) {
  checkTau(values.size(), tau);
  const auto width = static_cast<std::size_t>(tau);
  std::vector<std::span<const double>> windows;
  windows.reserve(values.size() - width + 1);
  for (std::size_t k = 0; k + width <= values.size(); ++k) {
    windows.push_back(values.subspan(k, width));
  }
  return windows;
}

TestResult windowTest(std::span<const double> window, TestKind test) {
  if (window.size() % 2 != 0) throw InvalidInput("window length must be even");
  const auto half = window.size() / 2;
  try {
    return runTest(test, window.first(half), window.subspan(half));
  } catch (const DegenerateInput&) {
    return {1.0, 1.0};
  }
}

PValueSeries pValueSeries(std::span<const double> values, TestKind test, int tau, bool smoothed) {
  PValueSeries series;
  series.testKind = test;
  series.tau = tau;
  series.smoothed = smoothed;
  const auto windows = extractWindows(values, tau);
  series.pValues.reserve(windows.size());
  for (const auto& w : windows) series.pValues.push_back(windowTest(w, test).pValue);
  return series;
}

BitSeries binarize(const PValueSeries& series, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidInput("level must lie in (0, 1)");
  BitSeries out;
  out.level = level;
  out.bits.reserve(series.pValues.size());
  for (double p : series.pValues) out.bits.push_back(p < level ? 1 : 0);
  return out;
}

std::vector<double> movingAverage(std::span<const double> values, int width) {
  if (width <= 0 || width % 2 == 0) throw InvalidInput("moving-average width must be odd");
  const auto w = static_cast<std::size_t>(width);
  if (w > values.size()) throw InvalidInput("moving-average width exceeds signal length");
  std::vector<double> out(values.size() - w + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < w; ++j) sum += values[i + j];
    out[i] = sum / static_cast<double>(w);
  }
  return out;
}

void writePValueSeriesCsv(std::ostream& out, const PValueSeries& series) {
  out << "position,p_value\n";
  char buf[32];
  for (std::size_t k = 0; k < series.pValues.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", series.pValues[k]);
    out << k << ',' << buf << '\n';
  }
}

}  // namespace bindiag
