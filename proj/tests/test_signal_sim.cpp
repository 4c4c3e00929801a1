#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "bindiag/dataset_io.hpp"
#include "bindiag/error.hpp"
#include "bindiag/signal_sim.hpp"

using namespace bindiag;

namespace {

double mean(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += v[i];
  return s / static_cast<double>(to - from);
}

double sampleSd(const std::vector<double>& v, std::size_t from, std::size_t to) {
  const double mu = mean(v, from, to);
  double ss = 0.0;
  for (std::size_t i = from; i < to; ++i) ss += (v[i] - mu) * (v[i] - mu);
  return std::sqrt(ss / static_cast<double>(to - from - 1));
}

}  // namespace

TEST_CASE("normal signal has the requested length and no metadata") {
  auto rng = signalRng(1, 0);
  const auto s = genNormal(rng, 100);
  CHECK(s.values.size() == 100);
  CHECK(s.label == AnomalyClass::NoAnomaly);
  CHECK_FALSE(s.changeIndex.has_value());
  CHECK_FALSE(s.shiftParam.has_value());
  CHECK(std::abs(mean(s.values, 0, 100)) < 0.5);
}

TEST_CASE("length distribution is uniform over 100..200") {
  auto rng = signalRng(99, 0);
  std::vector<int> counts(101, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const int m = drawLength(rng);
    REQUIRE(m >= 100);
    REQUIRE(m <= 200);
    ++counts[static_cast<std::size_t>(m - 100)];
  }
  const double expected = draws / 101.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(100);
  CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 0.001);
}

TEST_CASE("change index stays inside the allowed range") {
  auto rng = signalRng(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const int m = drawLength(rng);
    const int js = drawChangeIndex(rng, m);
    REQUIRE(js >= 2 * m / 10);
    REQUIRE(js <= 8 * m / 10);
  }
}

TEST_CASE("shift parameters stay inside their ranges") {
  auto rng = signalRng(11, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto v = genVarianceShift(rng, 120);
    REQUIRE(*v.shiftParam >= 1.01);
    REQUIRE(*v.shiftParam <= 5.0);
    const auto a = genMeanShift(rng, 120, DatasetVariant::A);
    REQUIRE(*a.shiftParam >= 1.01);
    REQUIRE(*a.shiftParam <= 5.0);
    const auto b = genMeanShift(rng, 120, DatasetVariant::B);
    REQUIRE(*b.shiftParam >= 0.505);
    REQUIRE(*b.shiftParam <= 2.5);
    const auto t = genSlopeShift(rng, 120);
    REQUIRE(*t.shiftParam >= 0.02);
    REQUIRE(*t.shiftParam <= 3.0);
    for (const auto* s : {&v, &a, &b, &t}) REQUIRE_NOTHROW(validateSignal(*s));
  }
}

TEST_CASE("variance shift with sigma fixed at 5 has post-change sd near 5") {
  // sd of 161 N(0,25) draws: relative se about 1/sqrt(320), so [4,6] is > 4 se.
  int inside = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    auto rng = signalRng(123, r);
    const auto s = genVarianceShift(rng, 200, {40, 5.0});
    const double sd = sampleSd(s.values, 39, 200);
    inside += (sd >= 4.0 && sd <= 6.0) ? 1 : 0;
  }
  CHECK(inside >= 990);
}

TEST_CASE("slope shift with lambda fixed at 1 has mean 10 ten steps after the change") {
  double sum = 0.0, sumAtChange = 0.0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    auto rng = signalRng(77, r);
    const auto s = genSlopeShift(rng, 150, {60, 1.0});
    sum += s.values[59 + 10];
    sumAtChange += s.values[59];
  }
  CHECK(std::abs(sum / reps - 10.0) < 0.15);
  CHECK(std::abs(sumAtChange / reps) < 0.15);
}

TEST_CASE("segment moments match their generative laws") {
  // Mean of each segment within 4 standard errors in at least 99% of replicates.
  const int reps = 10000;
  int ok = 0;
  for (int r = 0; r < reps; ++r) {
    auto rng = signalRng(4242, r);
    const int m = drawLength(rng);
    const auto s = genMeanShift(rng, m, DatasetVariant::A);
    const auto js = static_cast<std::size_t>(*s.changeIndex);
    const double pre = mean(s.values, 0, js - 1);
    const double post = mean(s.values, js - 1, s.values.size());
    const bool preOk = std::abs(pre) <= 4.0 / std::sqrt(static_cast<double>(js - 1));
    const bool postOk = std::abs(post - *s.shiftParam) <=
                        4.0 / std::sqrt(static_cast<double>(s.values.size() - js + 1));
    ok += (preOk && postOk) ? 1 : 0;
  }
  CHECK(ok >= 9900);
}

TEST_CASE("dataset has the requested class counts, unique ids and is deterministic") {
  DatasetSpec spec;
  spec.countNormal = 4;
  spec.countPerAnomaly = 1;
  const auto small = genDataset(spec);
  CHECK(small.size() == 7);

  spec.countNormal = 300;
  spec.countPerAnomaly = 100;
  const auto a = genDataset(spec);
  const auto b = genDataset(spec);
  REQUIRE(a.size() == 600);
  std::array<int, kNumClasses> perClass{};
  std::set<std::int64_t> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++perClass[static_cast<std::size_t>(classCode(a[i].label))];
    ids.insert(a[i].id);
    CHECK(a[i].values == b[i].values);
    CHECK_NOTHROW(validateSignal(a[i]));
  }
  CHECK(perClass == std::array<int, kNumClasses>{300, 100, 100, 100});
  CHECK(ids.size() == a.size());

  spec.seed += 1;
  const auto c = genDataset(spec);
  CHECK(c[0].values != a[0].values);
}

TEST_CASE("a signal depends only on its seed and id") {
  DatasetSpec big;
  big.countNormal = 30;
  big.countPerAnomaly = 10;
  DatasetSpec small = big;
  small.countPerAnomaly = 5;
  const auto x = genDataset(big);
  const auto y = genDataset(small);
  for (std::size_t i = 0; i < 30; ++i) CHECK(x[i].values == y[i].values);
}

TEST_CASE("validateSignal rejects broken metadata") {
  auto rng = signalRng(1, 1);
  auto s = genMeanShift(rng, 100, DatasetVariant::A);
  auto noIndex = s;
  noIndex.changeIndex.reset();
  CHECK_THROWS_AS(validateSignal(noIndex), InvalidInput);
  auto badIndex = s;
  badIndex.changeIndex = 90;
  CHECK_THROWS_AS(validateSignal(badIndex), InvalidInput);
  auto shortSignal = s;
  shortSignal.values.resize(99);
  CHECK_THROWS_AS(validateSignal(shortSignal), InvalidInput);
  CHECK_THROWS_AS(genNormal(rng, 99), InvalidInput);
  CHECK_THROWS_AS(parseVariant("C"), InvalidInput);
  CHECK(parseVariant("b") == DatasetVariant::B);
}

TEST_CASE("dataset round-trips through CSV and binary exactly") {
  DatasetSpec spec;
  spec.countNormal = 6;
  spec.countPerAnomaly = 3;
  const auto data = genDataset(spec);

  std::stringstream csv;
  writeDatasetCsv(csv, data);
  const auto fromCsv = readDatasetCsv(csv);
  std::stringstream bin;
  writeDatasetBinary(bin, data);
  const auto fromBin = readDatasetBinary(bin);
  REQUIRE(fromCsv.size() == data.size());
  REQUIRE(fromBin.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const auto* other : {&fromCsv[i], &fromBin[i]}) {
      CHECK(other->id == data[i].id);
      CHECK(other->label == data[i].label);
      CHECK(other->values == data[i].values);
      CHECK(other->changeIndex == data[i].changeIndex);
      CHECK(other->shiftParam == data[i].shiftParam);
    }
  }

  std::stringstream junk("not a dataset");
  CHECK_THROWS(readDatasetBinary(junk));
}
