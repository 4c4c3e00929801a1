#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "bindiag/error.hpp"
#include "bindiag/window_engine.hpp"

using namespace bindiag;

namespace {

std::vector<double> noise(std::uint64_t seed, int m) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> v(static_cast<std::size_t>(m));
  for (auto& x : v) x = z(rng);
  return v;
}

}  // namespace

TEST_CASE("window counts follow m - tau + 1") {
  const std::vector<double> v100(100, 0.0), v200(200, 0.0);
  CHECK(extractWindows(v100, 100).size() == 1);
  CHECK(extractWindows(v100, 30).size() == 71);
  CHECK(extractWindows(v200, 50).size() == 151);
  const auto w = extractWindows(v100, 30);
  CHECK(w[5].data() == v100.data() + 5);
  CHECK(w[5].size() == 30);
  CHECK_THROWS_AS(extractWindows(v100, 101), InvalidInput);
  CHECK_THROWS_AS(extractWindows(v100, 31), InvalidInput);
}

TEST_CASE("window test splits the window into halves") {
  const std::vector<double> flat(30, 2.0);
  CHECK(windowTest(flat, TestKind::MWU).pValue >= 0.9);
  CHECK(windowTest(flat, TestKind::KS2).pValue >= 0.9);
  CHECK(windowTest(flat, TestKind::FVar).pValue == 1.0);

  std::vector<double> w = noise(3, 30);
  std::vector<double> swapped(w.begin() + 15, w.end());
  swapped.insert(swapped.end(), w.begin(), w.begin() + 15);
  for (auto kind : kAllTests) {
    const std::span<const double> whole(w);
    CHECK(windowTest(w, kind).pValue == runTest(kind, whole.first(15), whole.last(15)).pValue);
    CHECK(windowTest(w, kind).pValue == doctest::Approx(windowTest(swapped, kind).pValue));
  }
}

TEST_CASE("a five-sigma step is detected by the U test") {
  int detected = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    auto w = noise(1000 + static_cast<std::uint64_t>(r), 30);
    for (std::size_t i = 15; i < 30; ++i) w[i] += 5.0;
    detected += windowTest(w, TestKind::MWU).pValue < 0.005 ? 1 : 0;
  }
  CHECK(detected >= 495);
}

TEST_CASE("p-value series length and composition") {
  const auto v = noise(8, 150);
  for (auto kind : kAllTests) {
    for (int tau : {30, 50, 100}) {
      const auto series = pValueSeries(v, kind, tau);
      REQUIRE(series.pValues.size() == 150u - static_cast<std::size_t>(tau) + 1u);
      const auto windows = extractWindows(v, tau);
      for (std::size_t k = 0; k < windows.size(); k += 17)
        CHECK(series.pValues[k] == windowTest(windows[k], kind).pValue);
      for (double p : series.pValues) {
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0);
      }
    }
  }
}

TEST_CASE("constant signal yields no evidence") {
  const std::vector<double> flat(120, 1.5);
  for (double p : pValueSeries(flat, TestKind::MWU, 30).pValues) CHECK(p >= 0.9);
  for (double p : pValueSeries(flat, TestKind::KS2, 30).pValues) CHECK(p >= 0.9);
  for (double p : pValueSeries(flat, TestKind::FVar, 30).pValues) CHECK(p == 1.0);
}

TEST_CASE("null signal at level 0.5 sets about half the bits") {
  double total = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const auto bits = binarize(pValueSeries(noise(50 + static_cast<std::uint64_t>(r), 200), TestKind::FVar, 30), 0.5).bits;
    double ones = 0;
    for (auto b : bits) ones += b;
    total += ones / static_cast<double>(bits.size());
  }
  CHECK(std::abs(total / reps - 0.5) <= 0.15);
}

TEST_CASE("step at the center is flagged by the centered window") {
  int detected = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    auto v = noise(7000 + static_cast<std::uint64_t>(r), 100);
    for (std::size_t i = 50; i < 100; ++i) v[i] += 5.0;
    const auto bits = binarize(pValueSeries(v, TestKind::MWU, 30), 0.005).bits;
    detected += bits[50 - 15];
  }
  CHECK(detected >= 495);
}

TEST_CASE("binarize is strict and monotone in the level") {
  PValueSeries s;
  s.pValues = {0.004, 0.1, 0.6};
  CHECK(binarize(s, 0.1).bits == std::vector<std::uint8_t>{1, 0, 0});
  s.pValues = {0.49, 0.49};
  CHECK(binarize(s, 0.5).bits == std::vector<std::uint8_t>{1, 1});
  s.pValues = {0.005, 0.005};
  CHECK(binarize(s, 0.005).bits == std::vector<std::uint8_t>{0, 0});
  CHECK_THROWS_AS(binarize(s, 0.0), InvalidInput);
  CHECK_THROWS_AS(binarize(s, 1.0), InvalidInput);

  const auto series = pValueSeries(noise(9, 180), TestKind::KS2, 50);
  const auto lo = binarize(series, 0.1).bits, hi = binarize(series, 0.5).bits;
  for (std::size_t i = 0; i < lo.size(); ++i) CHECK(lo[i] <= hi[i]);
}

TEST_CASE("moving average is centered and valid-only") {
  const std::vector<double> flat(100, 3.0);
  const auto avg = movingAverage(flat);
  CHECK(avg.size() == 96);
  for (double x : avg) CHECK(x == doctest::Approx(3.0));
  const std::vector<double> five{1, 2, 3, 4, 5};
  CHECK(movingAverage(five) == std::vector<double>{3.0});
  std::vector<double> ramp(40);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i);
  const auto r = movingAverage(ramp);
  REQUIRE(r.size() == 36);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == doctest::Approx(ramp[i + 2]));
  CHECK_THROWS_AS(movingAverage(std::vector<double>(4, 1.0)), InvalidInput);
  CHECK_THROWS_AS(movingAverage(ramp, 4), InvalidInput);

  const auto smoothed = pValueSeries(movingAverage(noise(1, 100)), TestKind::MWU, 30, true);
  CHECK(smoothed.pValues.size() == 96u - 30u + 1u);
  CHECK(smoothed.smoothed);
}

TEST_CASE("p-value series dumps one row per window") {
  const auto series = pValueSeries(noise(2, 100), TestKind::MWU, 100);
  std::ostringstream out;
  writePValueSeriesCsv(out, series);
  const std::string text = out.str();
  CHECK(text.rfind("position,p_value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}
