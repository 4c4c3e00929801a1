#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "bindiag/error.hpp"
#include "bindiag/indicator_bank.hpp"
#include "bindiag/matrix_io.hpp"
#include "bindiag/window_engine.hpp"
#include "oracles.hpp"
#include "sweeps.hpp"

using namespace bindiag;

namespace {

using Bits = std::vector<std::uint8_t>;

std::vector<Signal> smallDataset(std::uint64_t seed = 3) {
  DatasetSpec spec;
  spec.countNormal = 12;
  spec.countPerAnomaly = 4;
  spec.seed = seed;
  return genDataset(spec);
}

}  // namespace

TEST_CASE("subsample keeps every delta-th position") {
  CHECK(subsample(Bits(10, 1), 1).size() == 10);
  CHECK(subsample(Bits{1, 0, 0, 0, 1, 0, 0, 0, 1}, 4) == Bits{1, 1, 1});
  CHECK(subsample(Bits(71, 0), 10).size() == 8);
  CHECK_THROWS_AS(subsample(Bits(5, 0), 0), InvalidInput);
}

TEST_CASE("simple indicator is a logical OR") {
  CHECK(simpleIndicator(Bits(100, 0)) == 0);
  Bits one(100, 0);
  one[63] = 1;
  CHECK(simpleIndicator(one) == 1);
  CHECK(simpleIndicator(Bits(7, 1)) == 1);
  CHECK_THROWS_AS(simpleIndicator(Bits{}), InvalidInput);
}

TEST_CASE("global ratio examples") {
  CHECK(globalRatio(Bits{1, 0, 1, 0}, 0.5, 1) == 1);
  CHECK(globalRatio(Bits{1, 0, 0, 0}, 0.5, 1) == 0);
  CHECK(globalRatio(Bits{1, 0, 1, 0, 1}, 0.5, 2) == 1);
  // 3 of 10 must reach beta = 0.3 despite 0.3 * 10 rounding above 3.
  CHECK(globalRatio(Bits{1, 1, 1, 0, 0, 0, 0, 0, 0, 0}, 0.3, 1) == 1);
}

TEST_CASE("consecutive ratio examples") {
  CHECK(consecutiveRatio(Bits{0, 1, 1, 1, 1, 1, 0, 0, 0, 0}, 0.5, 1) == 1);
  CHECK(consecutiveRatio(Bits{0, 1, 1, 1, 1, 0, 1, 0, 0, 0}, 0.5, 1) == 0);
  CHECK(consecutiveRatio(Bits{1, 0, 1, 0, 1, 0, 1, 0, 1, 0}, 0.3, 1) == 0);
  CHECK(consecutiveRatio(Bits{1, 0, 1, 1, 1, 0, 0, 0, 0, 0}, 0.3, 1) == 1);
  CHECK(fractionThreshold(0.3, 10) == 3);
  CHECK(fractionThreshold(0.1, 71) == 8);
  CHECK(fractionThreshold(0.1, 3) == 1);
}

TEST_CASE("local ratio examples") {
  CHECK(localRatio(Bits{1, 0, 1}, 3, 2, 1) == 1);
  CHECK(localRatio(Bits{1, 0, 0, 0, 1}, 3, 2, 1) == 0);
  CHECK(localRatio(Bits{1, 1}, 3, 2, 1) == 0);
  CHECK(localRatio(Bits{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}, 3, 3, 5) == 1);
}

TEST_CASE("aggregators equal brute-force scans across the default grid") {
  CHECK(sweeps::aggregatorMismatches(GridConfig{}, 10000, 2017) == 0);
}

TEST_CASE("aggregators are monotone in their thresholds") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 2000; ++t) {
    const auto bits = oracle::randomBits(rng, 1 + rng() % 200, 0.5);
    for (int delta : {1, 5, 10}) {
      REQUIRE(globalRatio(bits, 0.1, delta) >= globalRatio(bits, 0.3, delta));
      REQUIRE(globalRatio(bits, 0.3, delta) >= globalRatio(bits, 0.5, delta));
      REQUIRE(consecutiveRatio(bits, 0.1, delta) >= consecutiveRatio(bits, 0.3, delta));
      REQUIRE(consecutiveRatio(bits, 0.3, delta) >= consecutiveRatio(bits, 0.5, delta));
      REQUIRE(localRatio(bits, 5, 3, delta) >= localRatio(bits, 5, 4, delta));
    }
  }
}

TEST_CASE("column arithmetic of the default grid") {
  const GridConfig grid;
  CHECK(grid.simplePerVariant() == 27);
  CHECK(grid.derivedPerVariant() == 729);
  CHECK(grid.columnCount() == 1512);
  const auto catalog = buildCatalog(grid);
  CHECK(catalog.size() == 1512);
  std::set<std::string> names;
  for (const auto& spec : catalog) names.insert(spec.name);
  CHECK(names.size() == catalog.size());

  std::size_t simpleRaw = 0, derivedRaw = 0;
  for (const auto& spec : catalog) {
    if (spec.smoothed()) continue;
    (std::holds_alternative<AnyWindow>(spec.aggregator) ? simpleRaw : derivedRaw) += 1;
  }
  CHECK(simpleRaw == 27);
  CHECK(derivedRaw == 729);
  CHECK_FALSE(catalog.front().smoothed());
  CHECK(catalog.back().smoothed());
}

TEST_CASE("indicator names follow the explanation-table scheme") {
  IndicatorSpec spec;
  spec.test = TestKind::MWU;
  spec.aggregator = LocalRatio{3, 2, 1};
  CHECK(shortName(spec) == "confu(2,3)");
  CHECK(nameIndicator(spec) == "confu(2,3)[tau=30,level=0.005,delta=1,ma=1]");
  spec.test = TestKind::FVar;
  spec.aggregator = GlobalRatio{0.1, 5};
  CHECK(shortName(spec) == "ratef(0.1)");
  spec.aggregator = ConsecutiveRatio{0.3, 10};
  CHECK(shortName(spec) == "lseqf(0.3)");
  spec.test = TestKind::KS2;
  spec.aggregator = AnyWindow{};
  spec.smoothing = 5;
  spec.tau = 100;
  spec.level = 0.5;
  CHECK(shortName(spec) == "ks test");
  CHECK(nameIndicator(spec) == "ks test[tau=100,level=0.5,ma=5]");
}

TEST_CASE("indicator row recomputes from the window engine") {
  const auto data = smallDataset();
  const GridConfig grid;
  const auto catalog = buildCatalog(grid);
  for (std::size_t s = 0; s < data.size(); s += 5) {
    const auto row = indicatorRow(data[s], grid);
    REQUIRE(row.size() == catalog.size());
    const auto smooth = movingAverage(data[s].values, 5);
    for (std::size_t c = 0; c < catalog.size(); c += 7) {
      const auto& spec = catalog[c];
      const auto& values = spec.smoothed() ? smooth : data[s].values;
      if (static_cast<int>(values.size()) < spec.tau) {
        CHECK(row[c] == 0);
        continue;
      }
      const auto bits = binarize(pValueSeries(values, spec.test, spec.tau), spec.level).bits;
      CHECK(row[c] == applyAggregator(spec.aggregator, bits));
    }
  }
}

TEST_CASE("too-short smoothed signal gives zero for tau = 100") {
  auto rng = signalRng(1, 1);
  auto s = genMeanShift(rng, 100, DatasetVariant::A);
  const GridConfig grid;
  const auto row = indicatorRow(s, grid);
  const auto catalog = buildCatalog(grid);
  for (std::size_t c = 0; c < catalog.size(); ++c)
    if (catalog[c].smoothed() && catalog[c].tau == 100) CHECK(row[c] == 0);
}

TEST_CASE("matrix build is deterministic and dedup is idempotent") {
  const auto data = smallDataset();
  GridConfig grid;
  const auto m = buildMatrix(data, grid);
  CHECK(m.cells.rows() == data.size());
  CHECK(m.cells.cols() == 1512);
  CHECK(buildMatrix(data, grid).cells == m.cells);

  const auto once = dedupColumns(m);
  CHECK(once.matrix.cells.cols() < m.cells.cols());
  std::set<std::vector<std::uint8_t>> distinct;
  for (std::size_t c = 0; c < once.matrix.cells.cols(); ++c) distinct.insert(once.matrix.cells.column(c));
  CHECK(distinct.size() == once.matrix.cells.cols());
  for (std::size_t c = 0; c < m.cells.cols(); ++c)
    CHECK(m.cells.column(c) == once.matrix.cells.column(once.representative[c]));
  const auto twice = dedupColumns(once.matrix);
  CHECK(twice.matrix.cells == once.matrix.cells);
  CHECK(twice.matrix.catalog == once.matrix.catalog);
}

TEST_CASE("two constant-zero columns collapse to one") {
  IndicatorMatrix m;
  m.cells = BitMatrix(3, 3);
  m.cells.set(1, 1, 1);
  IndicatorSpec spec;
  for (int i = 0; i < 3; ++i) {
    spec.tau = 30 + 2 * i;
    spec.name = nameIndicator(spec);
    m.catalog.push_back(spec);
  }
  m.observationIds = {0, 1, 2};
  m.labels.assign(3, AnomalyClass::NoAnomaly);
  const auto d = dedupColumns(m);
  CHECK(d.keptColumns == std::vector<std::size_t>{0, 1});
  CHECK(d.representative == std::vector<std::size_t>{0, 1, 0});
}

TEST_CASE("indicator matrix round-trips through its files") {
  const auto data = smallDataset(9);
  const auto m = dedupColumns(buildMatrix(data, GridConfig{})).matrix;
  const auto dir = std::filesystem::temp_directory_path() / "bindiag_matrix_io_test";
  std::filesystem::remove_all(dir);
  saveIndicatorMatrix(dir, m);
  const auto back = loadIndicatorMatrix(dir);
  CHECK(back.cells == m.cells);
  CHECK(back.catalog == m.catalog);
  CHECK(back.observationIds == m.observationIds);
  CHECK(back.labels == m.labels);
  std::filesystem::remove_all(dir);

  std::stringstream junk("BDIMxxxx");
  CHECK_THROWS(readBitMatrixBinary(junk));
}

TEST_CASE("grid validation rejects out-of-range values") {
  GridConfig grid;
  CHECK_NOTHROW(grid.validate());
  grid.taus = {31};
  CHECK_THROWS_AS(grid.validate(), InvalidInput);
  grid = GridConfig{};
  grid.levels = {1.0};
  CHECK_THROWS_AS(grid.validate(), InvalidInput);
  grid = GridConfig{};
  grid.localPairs = {{3, 4}};
  CHECK_THROWS_AS(grid.validate(), InvalidInput);
}
