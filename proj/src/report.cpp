#include "bindiag/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "bindiag/error.hpp"

namespace bindiag {

namespace {

std::string fmt(double v, int decimals = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::ofstream openReport(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

const char* kClassHeader = "no change,variance,mean,trend";

void writeAccuracyHeader(std::ostream& out, std::size_t slices) {
  out << "dataset,classifier,indicators,train_accuracy,oob_accuracy,test_slice_mean,"
         "test_slice_sd,full_test_accuracy";
  for (std::size_t s = 1; s <= slices; ++s) out << ",slice_" << s;
  out << '\n';
}

void writeAccuracyRow(std::ostream& out, std::string_view dataset, const EvalReport& r) {
  out << dataset << ',' << classifierName(r.classifier) << ',' << r.numIndicators << ','
      << fmt(r.trainAccuracy) << ',' << (r.oobAccuracy ? fmt(*r.oobAccuracy) : "") << ','
      << fmt(r.sliceMean) << ',' << fmt(r.sliceSd) << ',' << fmt(r.testAccuracy);
  for (double a : r.sliceAccuracies) out << ',' << fmt(a);
  out << '\n';
}

void writeConfusion(std::ostream& out, const Confusion& m) {
  out << "true_class," << kClassHeader << ",total\n";
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    out << className(static_cast<AnomalyClass>(t));
    std::int64_t total = 0;
    for (std::size_t p = 0; p < kNumClasses; ++p) {
      out << ',' << m[t][p];
      total += m[t][p];
    }
    out << ',' << total << '\n';
  }
}

void writeExplanation(std::ostream& out, const ForwardRun& run) {
  out << "rank,indicator,name,theta_no_change,theta_variance,theta_mean,theta_trend,"
         "raw_no_change,raw_variance,raw_mean,raw_trend\n";
  for (std::size_t i = 0; i < run.explanation.size(); ++i) {
    const auto& row = run.explanation[i];
    out << i + 1 << ',' << row.shortName << ",\"" << row.name << '"';
    for (double t : row.theta) out << ',' << fmt(t);
    for (double t : run.rawExplanation[i].theta) out << ',' << fmt(t);
    out << '\n';
  }
}

void writeCurves(std::ostream& out, const std::vector<const ForwardRun*>& runs,
                 std::size_t slices) {
  out << "classifier,k,train_accuracy,oob_accuracy,test_slice_mean,test_slice_sd,"
         "full_test_accuracy";
  for (std::size_t s = 1; s <= slices; ++s) out << ",slice_" << s;
  out << '\n';
  for (const auto* run : runs) {
    for (const auto& p : run->curve) {
      const auto& r = p.report;
      out << classifierName(run->classifier) << ',' << p.k << ',' << fmt(r.trainAccuracy) << ','
          << (r.oobAccuracy ? fmt(*r.oobAccuracy) : "") << ',' << fmt(r.sliceMean) << ','
          << fmt(r.sliceSd) << ',' << fmt(r.testAccuracy);
      for (double a : r.sliceAccuracies) out << ',' << fmt(a);
      out << '\n';
    }
  }
}

void writePerClassError(std::ostream& out, const std::vector<const ForwardRun*>& runs) {
  out << "classifier,k,set," << kClassHeader << '\n';
  for (const auto* run : runs) {
    for (const auto& p : perClassErrorCurve(*run)) {
      for (const auto& [set, errors] : {std::pair{"train", p.train}, std::pair{"test", p.test}}) {
        out << classifierName(run->classifier) << ',' << p.k << ',' << set;
        for (double e : errors) out << ',' << fmt(e);
        out << '\n';
      }
    }
  }
}

std::string accuracyCell(const EvalReport& r) {
  return fmt(r.sliceMean, 4) + " (" + fmt(r.sliceSd, 4) + ")";
}

}  // namespace

EvaluationResult runEvaluation(const RunConfig& config, const IndicatorMatrix& matrix) {
  EvaluationResult result;
  result.plan = makeSplit(matrix.labels, config.seedSplit, config.splitOptions());
  const auto forest = config.forestParams();
  const bool nb = config.classifier != ClassifierChoice::RandomForest;
  const bool rf = config.classifier != ClassifierChoice::NaiveBayes;
  if (rf) {
    result.rfFull = runFullIndicators(matrix, result.plan, ClassifierKind::RandomForest, forest);
    result.rfForward = runForwardSelection(matrix, result.plan, ClassifierKind::RandomForest,
                                           config.curveMaxK, config.maxK, forest);
  }
  if (nb) {
    result.nbFull = runFullIndicators(matrix, result.plan, ClassifierKind::NaiveBayes, forest);
    result.nbForward = runForwardSelection(matrix, result.plan, ClassifierKind::NaiveBayes,
                                           config.curveMaxK, config.maxK, forest);
  }
  return result;
}

void writeSelectionCsv(std::ostream& out, const SelectionResult& selection,
                       const std::vector<IndicatorSpec>& catalog) {
  out << "step,column,name,relevance,redundancy,criterion\n";
  for (std::size_t i = 0; i < selection.scores.size(); ++i) {
    const auto& s = selection.scores[i];
    out << i + 1 << ',' << s.columnIndex << ",\"" << catalog[s.columnIndex].name << "\","
        << fmt(s.relevance, 10) << ',' << fmt(s.redundancy, 10) << ',' << fmt(s.score, 10) << '\n';
  }
}

void writeSplitCsv(std::ostream& out, const SplitPlan& plan, const IndicatorMatrix& matrix) {
  out << "id,label,set,slice\n";
  for (auto r : plan.trainRows) {
    out << matrix.observationIds[r] << ',' << classCode(matrix.labels[r]) << ",train,\n";
  }
  for (std::size_t s = 0; s < plan.slices.size(); ++s) {
    for (auto r : plan.slices[s]) {
      out << matrix.observationIds[r] << ',' << classCode(matrix.labels[r]) << ",test," << s + 1
          << '\n';
    }
  }
}

void writeEvaluation(const std::filesystem::path& dir, const RunConfig& config,
                     const IndicatorMatrix& matrix, const EvaluationResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::string dataset(variantName(config.dataset));
  const auto slices = result.plan.slices.size();
  if (result.rfFull) {
    auto f = openReport(dir / "table2.csv");
    writeAccuracyHeader(f, slices);
    writeAccuracyRow(f, dataset, *result.rfFull);
  }
  if (result.nbFull) {
    auto t3 = openReport(dir / "table3.csv");
    writeAccuracyHeader(t3, slices);
    writeAccuracyRow(t3, dataset, *result.nbFull);
    auto t4 = openReport(dir / "table4.csv");
    writeConfusion(t4, result.nbFull->confusion);
  }
  std::vector<const ForwardRun*> runs;
  if (result.rfForward) runs.push_back(&*result.rfForward);
  if (result.nbForward) runs.push_back(&*result.nbForward);
  if (!runs.empty()) {
    auto t5 = openReport(dir / "table5.csv");
    t5 << "dataset,classifier,k_star,train_accuracy,test_slice_mean,test_slice_sd,"
          "full_test_accuracy\n";
    for (const auto* run : runs) {
      const auto& r = run->atKStar;
      t5 << dataset << ',' << classifierName(run->classifier) << ',' << run->kStar << ','
         << fmt(r.trainAccuracy) << ',' << fmt(r.sliceMean) << ',' << fmt(r.sliceSd) << ','
         << fmt(r.testAccuracy) << '\n';
    }
    auto curves = openReport(dir / "curves.csv");
    writeCurves(curves, runs, slices);
    auto errors = openReport(dir / "per_class_error.csv");
    writePerClassError(errors, runs);
    auto selection = openReport(dir / "selection.csv");
    writeSelectionCsv(selection, runs.front()->selection, matrix.catalog);
  }
  if (result.nbForward) {
    auto t6 = openReport(dir / "table6.csv");
    writeExplanation(t6, *result.nbForward);
  }
  {
    auto split = openReport(dir / "split.csv");
    writeSplitCsv(split, result.plan, matrix);
  }
  auto text = openReport(dir / "report.txt");
  text << renderTextReport(config, result);
}

std::string renderTextReport(const RunConfig& config, const EvaluationResult& result) {
  std::ostringstream out;
  const std::string dataset(variantName(config.dataset));
  out << "Data set " << dataset << "\n\n";
  if (result.rfFull) {
    const auto& r = *result.rfFull;
    out << "Random Forest, all " << r.numIndicators << " indicators\n"
        << "  training accuracy    " << fmt(r.trainAccuracy, 4) << "\n"
        << "  out-of-bag accuracy  " << fmt(r.oobAccuracy.value_or(0.0), 4) << "\n"
        << "  test slices          " << accuracyCell(r) << "\n\n";
  }
  if (result.nbFull) {
    const auto& r = *result.nbFull;
    out << "Naive Bayes, all " << r.numIndicators << " indicators\n"
        << "  training accuracy    " << fmt(r.trainAccuracy, 4) << "\n"
        << "  test slices          " << accuracyCell(r) << "\n\n"
        << "Naive Bayes confusion matrix, full test set (rows: true class)\n";
    out << std::setw(12) << "";
    for (int p = 0; p < kNumClasses; ++p) out << std::setw(11) << className(static_cast<AnomalyClass>(p));
    out << std::setw(8) << "total" << '\n';
    for (int t = 0; t < kNumClasses; ++t) {
      out << std::setw(12) << className(static_cast<AnomalyClass>(t));
      std::int64_t total = 0;
      for (int p = 0; p < kNumClasses; ++p) {
        out << std::setw(11) << r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
        total += r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
      }
      out << std::setw(8) << total << '\n';
    }
    out << '\n';
  }
  for (const auto* run : {result.rfForward ? &*result.rfForward : nullptr,
                          result.nbForward ? &*result.nbForward : nullptr}) {
    if (!run) continue;
    out << (run->classifier == ClassifierKind::NaiveBayes ? "Naive Bayes" : "Random Forest")
        << ", best K in 1.." << config.maxK << ": K* = " << run->kStar << "\n"
        << "  training accuracy    " << fmt(run->atKStar.trainAccuracy, 4) << "\n"
        << "  test slices          " << accuracyCell(run->atKStar) << "\n\n";
  }
  if (result.nbForward) {
    out << "P(indicator = 1 | class) for the " << result.nbForward->kStar
        << " selected indicators\n";
    out << std::left << std::setw(14) << "indicator" << std::right;
    for (int c = 0; c < kNumClasses; ++c) out << std::setw(11) << className(static_cast<AnomalyClass>(c));
    out << "  detail\n";
    for (const auto& row : result.nbForward->explanation) {
      out << std::left << std::setw(14) << row.shortName << std::right;
      for (double t : row.theta) out << std::setw(11) << fmt(t, 4);
      out << "  " << row.name.substr(row.shortName.size()) << '\n';
    }
  }
  return out.str();
}

std::string renderCsvTable(std::istream& csv) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') {
        quoted = !quoted;
      } else if (ch == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    if (widths.size() < r.size()) widths.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      out << std::left << std::setw(static_cast<int>(widths[i])) << r[i];
      if (i + 1 < r.size()) out << "  ";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace bindiag
