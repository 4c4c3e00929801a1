#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bindiag/eval_pipeline.hpp"
#include "bindiag/run_config.hpp"

namespace bindiag {

struct EvaluationResult {
  SplitPlan plan;
  std::optional<EvalReport> rfFull;
  std::optional<EvalReport> nbFull;
  std::optional<ForwardRun> rfForward;
  std::optional<ForwardRun> nbForward;
};

/// Full-indicator and forward-selection runs for the configured classifiers.
EvaluationResult runEvaluation(const RunConfig& config, const IndicatorMatrix& matrix);

/// Writes table2.csv (forest, all indicators), table3.csv (Naive Bayes, all
/// indicators), table4.csv (Naive Bayes confusion), table5.csv (selected
/// K*), table6.csv (explanation at K*), curves.csv, per_class_error.csv,
/// selection.csv, split.csv and report.txt. Tables for a classifier that was
/// not run are omitted.
void writeEvaluation(const std::filesystem::path& dir, const RunConfig& config,
                     const IndicatorMatrix& matrix, const EvaluationResult& result);

void writeSelectionCsv(std::ostream& out, const SelectionResult& selection,
                       const std::vector<IndicatorSpec>& catalog);
void writeSplitCsv(std::ostream& out, const SplitPlan& plan, const IndicatorMatrix& matrix);

/// Plain-text rendering of the evaluation tables.
std::string renderTextReport(const RunConfig& config, const EvaluationResult& result);

/// Aligns a CSV file into columns for terminal display.
std::string renderCsvTable(std::istream& csv);

}  // namespace bindiag
