#include "bindiag/indicator_bank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>
#include <unordered_map>

#include "bindiag/error.hpp"
#include "bindiag/parallel.hpp"
#include "bindiag/window_engine.hpp"

namespace bindiag {

namespace {

template <typename T>
std::vector<T> sortedUnique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

GridConfig canonical(const GridConfig& grid) {
  GridConfig g;
  g.tests = sortedUnique(grid.tests);
  g.taus = sortedUnique(grid.taus);
  g.levels = sortedUnique(grid.levels);
  g.deltas = sortedUnique(grid.deltas);
  g.betas = sortedUnique(grid.betas);
  g.localPairs = sortedUnique(grid.localPairs);
  g.smoothings = sortedUnique(grid.smoothings);
  return g;
}

// Aggregators applied to each bit series, in column order.
std::vector<Aggregator> aggregatorList(const GridConfig& g) {
  std::vector<Aggregator> out;
  out.emplace_back(AnyWindow{});
  for (double beta : g.betas)
    for (int delta : g.deltas) out.emplace_back(GlobalRatio{beta, delta});
  for (double beta : g.betas)
    for (int delta : g.deltas) out.emplace_back(ConsecutiveRatio{beta, delta});
  for (const auto& [l, k] : g.localPairs)
    for (int delta : g.deltas) out.emplace_back(LocalRatio{l, k, delta});
  return out;
}

std::string formatNumber(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void requireNonEmpty(std::span<const std::uint8_t> bits, const char* what) {
  if (bits.empty()) throw InvalidInput(std::string(what) + ": empty bit series");
}

void requireDelta(int delta) {
  if (delta < 1) throw InvalidInput("jump parameter must be >= 1");
}

std::size_t maxRun(std::span<const std::uint8_t> bits) {
  std::size_t best = 0, run = 0;
  for (auto b : bits) {
    run = b ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::size_t countOnes(std::span<const std::uint8_t> bits) {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

}  // namespace

void GridConfig::validate() const {
  if (tests.empty() || taus.empty() || levels.empty() || smoothings.empty()) {
    throw InvalidInput("grid: tests, taus, levels and smoothings must be non-empty");
  }
  for (int tau : taus)
    if (tau < 4 || tau % 2 != 0) throw InvalidInput("grid: tau must be even and >= 4");
  for (double level : levels)
    if (!(level > 0.0 && level < 1.0)) throw InvalidInput("grid: level must lie in (0, 1)");
  for (int delta : deltas)
    if (delta < 1) throw InvalidInput("grid: delta must be >= 1");
  for (double beta : betas)
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidInput("grid: beta must lie in (0, 1)");
  for (const auto& [l, k] : localPairs)
    if (k < 1 || k > l) throw InvalidInput("grid: local pair needs 1 <= k <= l");
  for (int w : smoothings)
    if (w < 1 || w % 2 == 0) throw InvalidInput("grid: smoothing width must be odd and >= 1");
  if (deltas.empty() && (!betas.empty() || !localPairs.empty())) {
    throw InvalidInput("grid: derived indicators need at least one delta");
  }
}

std::size_t GridConfig::simplePerVariant() const {
  const auto g = canonical(*this);
  return g.tests.size() * g.taus.size() * g.levels.size();
}

std::size_t GridConfig::derivedPerVariant() const {
  const auto g = canonical(*this);
  return simplePerVariant() * g.deltas.size() * (2 * g.betas.size() + g.localPairs.size());
}

std::size_t GridConfig::columnCount() const {
  return canonical(*this).smoothings.size() * (simplePerVariant() + derivedPerVariant());
}

std::vector<std::uint8_t> subsample(std::span<const std::uint8_t> bits, int delta) {
  requireDelta(delta);
  std::vector<std::uint8_t> out;
  if (bits.empty()) return out;
  const auto step = static_cast<std::size_t>(delta);
  out.reserve((bits.size() - 1) / step + 1);
  for (std::size_t i = 0; i < bits.size(); i += step) out.push_back(bits[i]);
  return out;
}

std::size_t fractionThreshold(double beta, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(beta * static_cast<double>(n) - 1e-9));
}

std::uint8_t simpleIndicator(std::span<const std::uint8_t> bits) {
  requireNonEmpty(bits, "simpleIndicator");
  return std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }) ? 1 : 0;
}

std::uint8_t globalRatio(std::span<const std::uint8_t> bits, double beta, int delta) {
  const auto kept = subsample(bits, delta);
  requireNonEmpty(kept, "globalRatio");
  return countOnes(kept) >= fractionThreshold(beta, kept.size()) ? 1 : 0;
}

std::uint8_t consecutiveRatio(std::span<const std::uint8_t> bits, double beta, int delta) {
  const auto kept = subsample(bits, delta);
  requireNonEmpty(kept, "consecutiveRatio");
  const auto need = std::max<std::size_t>(1, fractionThreshold(beta, kept.size()));
  return maxRun(kept) >= need ? 1 : 0;
}

std::uint8_t localRatio(std::span<const std::uint8_t> bits, int l, int k, int delta) {
  if (k < 1 || k > l) throw InvalidInput("localRatio: need 1 <= k <= l");
  const auto kept = subsample(bits, delta);
  const auto block = static_cast<std::size_t>(l);
  if (kept.size() < block) return 0;
  std::size_t inBlock = countOnes(std::span(kept).first(block));
  if (inBlock >= static_cast<std::size_t>(k)) return 1;
  for (std::size_t end = block; end < kept.size(); ++end) {
    inBlock += kept[end];
    inBlock -= kept[end - block];
    if (inBlock >= static_cast<std::size_t>(k)) return 1;
  }
  return 0;
}

std::uint8_t applyAggregator(const Aggregator& aggregator, std::span<const std::uint8_t> bits) {
  return std::visit(
      [&](const auto& a) -> std::uint8_t {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, AnyWindow>) {
          return simpleIndicator(bits);
        } else if constexpr (std::is_same_v<A, GlobalRatio>) {
          return globalRatio(bits, a.beta, a.delta);
        } else if constexpr (std::is_same_v<A, ConsecutiveRatio>) {
          return consecutiveRatio(bits, a.beta, a.delta);
        } else {
          return localRatio(bits, a.l, a.k, a.delta);
        }
      },
      aggregator);
}

std::string shortName(const IndicatorSpec& spec) {
  const std::string t(testName(spec.test));
  return std::visit(
      [&](const auto& a) -> std::string {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, AnyWindow>) {
          return t + " test";
        } else if constexpr (std::is_same_v<A, GlobalRatio>) {
          return "rate" + t + "(" + formatNumber(a.beta) + ")";
        } else if constexpr (std::is_same_v<A, ConsecutiveRatio>) {
          return "lseq" + t + "(" + formatNumber(a.beta) + ")";
        } else {
          return "conf" + t + "(" + std::to_string(a.k) + "," + std::to_string(a.l) + ")";
        }
      },
      spec.aggregator);
}

std::string nameIndicator(const IndicatorSpec& spec) {
  std::string name = shortName(spec) + "[tau=" + std::to_string(spec.tau) +
                     ",level=" + formatNumber(spec.level);
  std::visit(
      [&](const auto& a) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(a)>, AnyWindow>) {
          name += ",delta=" + std::to_string(a.delta);
        }
      },
      spec.aggregator);
  name += ",ma=" + std::to_string(spec.smoothing) + "]";
  return name;
}

std::vector<IndicatorSpec> buildCatalog(const GridConfig& grid) {
  grid.validate();
  const auto g = canonical(grid);
  const auto aggregators = aggregatorList(g);
  std::vector<IndicatorSpec> catalog;
  catalog.reserve(g.columnCount());
  for (int smoothing : g.smoothings)
    for (TestKind test : g.tests)
      for (int tau : g.taus)
        for (double level : g.levels)
          for (const auto& agg : aggregators) {
            IndicatorSpec spec{test, tau, level, smoothing, agg, {}};
            spec.name = nameIndicator(spec);
            catalog.push_back(std::move(spec));
          }
  return catalog;
}

std::vector<std::uint8_t> IndicatorMatrix::labelCodes() const {
  std::vector<std::uint8_t> codes(labels.size());
  std::transform(labels.begin(), labels.end(), codes.begin(),
                 [](AnomalyClass c) { return static_cast<std::uint8_t>(c); });
  return codes;
}

std::vector<std::uint8_t> indicatorRow(const Signal& signal, const GridConfig& grid) {
  const auto g = canonical(grid);
  const auto aggregators = aggregatorList(g);
  std::vector<std::uint8_t> row;
  row.reserve(g.columnCount());
  for (int smoothing : g.smoothings) {
    const std::vector<double> values =
        smoothing > 1 ? movingAverage(signal.values, smoothing) : signal.values;
    for (TestKind test : g.tests) {
      for (int tau : g.taus) {
        if (static_cast<std::size_t>(tau) > values.size()) {
          row.insert(row.end(), g.levels.size() * aggregators.size(), 0);
          continue;
        }
        const auto series = pValueSeries(values, test, tau, smoothing > 1);
        for (double level : g.levels) {
          const auto bits = binarize(series, level);
          for (const auto& agg : aggregators) row.push_back(applyAggregator(agg, bits.bits));
        }
      }
    }
  }
  return row;
}

IndicatorMatrix buildMatrix(const std::vector<Signal>& signals, const GridConfig& grid) {
  if (signals.empty()) throw InvalidInput("buildMatrix: empty dataset");
  IndicatorMatrix matrix;
  matrix.catalog = buildCatalog(grid);
  matrix.cells = BitMatrix(signals.size(), matrix.catalog.size());
  matrix.observationIds.reserve(signals.size());
  matrix.labels.reserve(signals.size());
  for (const auto& s : signals) {
    matrix.observationIds.push_back(s.id);
    matrix.labels.push_back(s.label);
  }
  parallelFor(signals.size(), [&](std::size_t i) {
    const auto row = indicatorRow(signals[i], grid);
    std::copy(row.begin(), row.end(), matrix.cells.row(i).begin());
  });
  return matrix;
}

DedupResult dedupColumns(const IndicatorMatrix& matrix) {
  const auto& cells = matrix.cells;
  DedupResult result;
  result.representative.resize(cells.cols());
  std::unordered_map<std::string, std::size_t> seen;
  std::string key(cells.rows(), '\0');
  for (std::size_t c = 0; c < cells.cols(); ++c) {
    for (std::size_t r = 0; r < cells.rows(); ++r) key[r] = static_cast<char>(cells.at(r, c));
    const auto [it, inserted] = seen.try_emplace(key, result.keptColumns.size());
    if (inserted) result.keptColumns.push_back(c);
    result.representative[c] = it->second;
  }
  std::vector<std::size_t> allRows(cells.rows());
  for (std::size_t r = 0; r < allRows.size(); ++r) allRows[r] = r;
  result.matrix.cells = cells.select(allRows, result.keptColumns);
  for (auto c : result.keptColumns) result.matrix.catalog.push_back(matrix.catalog[c]);
  result.matrix.observationIds = matrix.observationIds;
  result.matrix.labels = matrix.labels;
  return result;
}

}  // namespace bindiag
