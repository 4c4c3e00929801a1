// Acceptance run: full pipeline on data sets A and B plus the oracle suites.
// Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bindiag/indicator_bank.hpp"
#include "bindiag/parallel.hpp"
#include "bindiag/report.hpp"
#include "bindiag/run_config.hpp"
#include "oracles.hpp"
#include "sweeps.hpp"

namespace fs = std::filesystem;
using namespace bindiag;

namespace {

struct PipelineRun {
  std::size_t columnsBefore = 0;
  std::size_t columnsAfter = 0;
  IndicatorMatrix matrix;
  EvaluationResult result;
};

PipelineRun runPipeline(const RunConfig& config, const fs::path& outDir) {
  const auto start = std::chrono::steady_clock::now();
  setThreadCount(config.threads);
  PipelineRun run;
  const auto signals = genDataset(config.datasetSpec());
  auto full = buildMatrix(signals, config.grid);
  run.columnsBefore = full.cells.cols();
  run.matrix = dedupColumns(full).matrix;
  run.columnsAfter = run.matrix.cells.cols();
  run.result = runEvaluation(config, run.matrix);
  writeEvaluation(outDir, config, run.matrix, run.result);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "[acceptance] data set %s, threads %d: %zu -> %zu columns, %.1f s\n",
               std::string(variantName(config.dataset)).c_str(), config.threads,
               run.columnsBefore, run.columnsAfter, seconds);
  return run;
}

int failures = 0;

void verdict(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[4096];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool inBand(double x, double lo, double hi) { return x >= lo && x <= hi; }

const ForwardPoint& pointAt(const ForwardRun& run, std::size_t k) {
  for (const auto& p : run.curve)
    if (p.k == k) return p;
  throw std::runtime_error("curve has no K=" + std::to_string(k));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(out);

  RunConfig configA;
  configA.threads = 1;
  RunConfig configB = configA;
  configB.dataset = DatasetVariant::B;

  const auto a = runPipeline(configA, out / "A");
  const auto b = runPipeline(configB, out / "B");
  const auto& rfA = *a.result.rfFull;
  const auto& rfB = *b.result.rfFull;
  const auto& nbA = *a.result.nbFull;
  const auto& nbB = *b.result.nbFull;
  const auto& fwdNbA = *a.result.nbForward;
  const auto& fwdNbB = *b.result.nbForward;

  // 1. Forest, all distinct indicators, set A.
  {
    const double gap = std::abs(*rfA.oobAccuracy - rfA.sliceMean);
    verdict(1, inBand(rfA.sliceMean, 0.90, 0.96) && gap <= 0.03, "RF all indicators, set A",
            fmt("slice mean %.4f in [0.90,0.96]; OOB %.4f, |OOB - mean| %.4f <= 0.03",
                rfA.sliceMean, *rfA.oobAccuracy, gap));
  }
  // 2. Forest, set B, below A.
  verdict(2, inBand(rfB.sliceMean, 0.89, 0.95) && rfB.sliceMean < rfA.sliceMean,
          "RF all indicators, set B",
          fmt("slice mean %.4f in [0.89,0.95]; below set A %.4f", rfB.sliceMean, rfA.sliceMean));
  // 3. Naive Bayes, all indicators.
  verdict(3, inBand(nbA.sliceMean, 0.72, 0.82) && inBand(nbB.sliceMean, 0.68, 0.79),
          "NB all indicators",
          fmt("set A %.4f in [0.72,0.82]; set B %.4f in [0.68,0.79]", nbA.sliceMean, nbB.sliceMean));
  // 4. Naive Bayes after forward selection.
  {
    const double selA = fwdNbA.atKStar.sliceMean, selB = fwdNbB.atKStar.sliceMean;
    const bool ok = fwdNbA.kStar <= 30 && fwdNbB.kStar <= 30 && inBand(selA, 0.85, 0.93) &&
                    inBand(selB, 0.84, 0.92) && selA - nbA.sliceMean >= 0.07 &&
                    selB - nbB.sliceMean >= 0.07;
    verdict(4, ok, "NB after mRMR selection",
            fmt("set A K*=%zu mean %.4f in [0.85,0.93], gain %.4f >= 0.07; set B K*=%zu mean %.4f "
                "in [0.84,0.92], gain %.4f >= 0.07",
                fwdNbA.kStar, selA, selA - nbA.sliceMean, fwdNbB.kStar, selB, selB - nbB.sliceMean));
  }
  // 5. Naive Bayes train/test stability along the whole curve.
  {
    double worst = 0.0;
    std::size_t worstK = 0;
    char worstSet = 'A';
    for (const auto* run : {&fwdNbA, &fwdNbB}) {
      for (const auto& p : run->curve) {
        const double gap = std::abs(p.report.trainAccuracy - p.report.sliceMean);
        if (gap > worst) {
          worst = gap;
          worstK = p.k;
          worstSet = run == &fwdNbA ? 'A' : 'B';
        }
      }
    }
    verdict(5, worst < 0.03, "NB train vs test stability",
            fmt("largest |train - slice mean| %.4f (set %c, K=%zu) < 0.03 over K=1..%zu", worst,
                worstSet, worstK, configA.curveMaxK));
  }
  // 6. Forest curve stagnation.
  {
    const auto& rfCurveA = *a.result.rfForward;
    const auto& rfCurveB = *b.result.rfForward;
    const double dA = std::abs(pointAt(rfCurveA, 30).report.sliceMean - pointAt(rfCurveA, 100).report.sliceMean);
    const double dB = std::abs(pointAt(rfCurveB, 30).report.sliceMean - pointAt(rfCurveB, 100).report.sliceMean);
    verdict(6, dA <= 0.02 && dB <= 0.02, "RF curve stagnation",
            fmt("set A |mean(K=30) - mean(K=100)| %.4f, set B %.4f, both <= 0.02", dA, dB));
  }
  // 7. Confusion structure, Naive Bayes full, set A.
  {
    const auto& cm = nbA.confusion;
    const auto slope = static_cast<std::size_t>(classCode(AnomalyClass::SlopeShift));
    const auto mean = static_cast<std::size_t>(classCode(AnomalyClass::MeanShift));
    const auto var = static_cast<std::size_t>(classCode(AnomalyClass::VarianceShift));
    const auto none = static_cast<std::size_t>(classCode(AnomalyClass::NoAnomaly));
    std::size_t bi = 0, bj = 0;
    std::int64_t best = -1;
    for (std::size_t i = 0; i < kNumClasses; ++i)
      for (std::size_t j = 0; j < kNumClasses; ++j)
        if (i != j && cm[i][j] > best) {
          best = cm[i][j];
          bi = i;
          bj = j;
        }
    const bool ok = cm[slope][mean] > cm[slope][var] && bi == none && bj == var;
    verdict(7, ok, "NB confusion structure, set A",
            fmt("trend->mean %lld vs trend->variance %lld; largest error block %s->%s = %lld "
                "(no change->variance = %lld)",
                static_cast<long long>(cm[slope][mean]), static_cast<long long>(cm[slope][var]),
                std::string(className(classFromCode(static_cast<int>(bi)))).c_str(),
                std::string(className(classFromCode(static_cast<int>(bj)))).c_str(),
                static_cast<long long>(best), static_cast<long long>(cm[none][var])));
  }
  // 8. Explanation table pattern at K*.
  {
    std::string found;
    const auto& columns = fwdNbA.selection.orderedColumns;
    for (std::size_t i = 0; i < fwdNbA.kStar && found.empty(); ++i) {
      const auto& spec = a.matrix.catalog[columns[i]];
      const auto& theta = fwdNbA.explanation[i].theta;
      const bool confirmatory = spec.test == TestKind::MWU && !std::holds_alternative<AnyWindow>(spec.aggregator);
      if (confirmatory && theta[0] < 0.05 && theta[1] < 0.05 && theta[2] > 0.90 && theta[3] > 0.90)
        found = fmt("%s theta = %.4f / %.4f / %.4f / %.4f", spec.name.c_str(), theta[0], theta[1],
                    theta[2], theta[3]);
    }
    verdict(8, !found.empty(), "explanation table pattern, set A",
            found.empty() ? fmt("no U-test derived indicator among the %zu selected fits", fwdNbA.kStar)
                          : found);
  }
  // 9. Indicator arithmetic.
  {
    const GridConfig grid;
    const bool arithmetic = grid.simplePerVariant() == 27 && grid.derivedPerVariant() == 729 &&
                            a.columnsBefore == 1512 && b.columnsBefore == 1512;
    const bool fewer = a.columnsAfter < a.columnsBefore && b.columnsAfter < b.columnsBefore;
    const bool band = inBand(static_cast<double>(a.columnsAfter), 600, 1000) &&
                      inBand(static_cast<double>(b.columnsAfter), 600, 1000);
    verdict(9, arithmetic && fewer && band, "indicator arithmetic",
            fmt("%zu simple + %zu derived per variant, %zu pre-dedup; distinct: set A %zu, set B %zu "
                "(band [600,1000])",
                grid.simplePerVariant(), grid.derivedPerVariant(), a.columnsBefore, a.columnsAfter,
                b.columnsAfter));
  }
  // 10. Statistical-test property suite.
  {
    const auto enumeration = sweeps::mwuEnumerationMismatches(8, 2, 10);
    const std::vector<int> halves{15, 25, 50};
    const std::vector<double> levels{0.005, 0.1, 0.5};
    const int trials = 100000;
    const auto calibration = sweeps::nullCalibration(halves, levels, trials, 20170101);
    std::string off;
    for (const auto& c : calibration) {
      if (std::abs(c.z()) > 3.0)
        off += fmt("%s %s/%d/%g rate %.4f (z %.1f)", off.empty() ? "" : ",", std::string(testName(c.test)).c_str(), c.half,
                   c.level, c.rate, c.z());
    }
    const auto statistics = sweeps::statisticMismatches(1000, 11);
    verdict(10, enumeration == 0 && off.empty() && statistics == 0, "statistical-test properties",
            fmt("(a) MWU enumeration mismatches %zu; (b) %zu test/half/level cells, %d trials each, "
                "outside 3 SE:%s; (c) KS D / F mismatches %zu",
                enumeration, calibration.size(), trials, off.empty() ? " none" : off.c_str(), statistics));
  }
  // 11. Aggregator oracle suite.
  {
    const auto bad = sweeps::aggregatorMismatches(GridConfig{}, 10000, 2017);
    verdict(11, bad == 0, "aggregator oracle",
            fmt("%zu mismatches over 10000 random bit vectors x full grid", bad));
  }
  // 12. mRMR oracle.
  {
    const auto bad = sweeps::mrmrMismatches(200, 200, 10, 12);
    verdict(12, bad == 0, "mRMR oracle", fmt("%zu of 200 random 200x10 traces differ", bad));
  }
  // 13. Determinism across thread counts: rerun set A with 4 threads.
  {
    RunConfig config4 = configA;
    config4.threads = 4;
    runPipeline(config4, out / "A_threads4");
    std::string differing;
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(out / "A")) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      if (slurp(entry.path()) != slurp(out / "A_threads4" / entry.path().filename()))
        differing += " " + entry.path().filename().string();
    }
    verdict(13, differing.empty() && compared >= 9, "determinism",
            fmt("%zu report CSVs compared between 1 and 4 threads; differing:%s", compared,
                differing.empty() ? " none" : differing.c_str()));
  }

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
