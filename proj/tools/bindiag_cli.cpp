// Command-line front end: generate -> indicators -> select -> evaluate -> report.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "bindiag/dataset_io.hpp"
#include "bindiag/error.hpp"
#include "bindiag/matrix_io.hpp"
#include "bindiag/parallel.hpp"
#include "bindiag/report.hpp"
#include "bindiag/run_config.hpp"
#include "bindiag/version.hpp"

namespace fs = std::filesystem;
using namespace bindiag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

class StageTimer {
 public:
  explicit StageTimer(std::string stage) : stage_(std::move(stage)), start_(Clock::now()) {}
  void log(const std::string& message) const {
    const double seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    std::cerr << "[" << stage_ << "] " << message << " (" << std::fixed << std::setprecision(1)
              << seconds << " s)\n";
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::string stage_;
  Clock::time_point start_;
};

struct Flags {
  std::string config;
  std::uint64_t seedData = 0, seedSplit = 0, seedForest = 0;
  std::string out;
  int threads = 0;
  std::string classifier;
  std::string dataset;
  std::size_t maxK = 0;
  std::size_t curveMaxK = 0;
  int trees = 0;
  bool balancedTrain = false;
  bool exportCsv = false;
  bool saveModels = false;
};

void writeManifest(const fs::path& dir, const std::string& command, const RunConfig& config,
                   const nlohmann::json& outputs) {
  nlohmann::json manifest = {{"command", command},
                             {"version", kVersion},
                             {"config", nlohmann::json::parse(configToJson(config))},
                             {"outputs", outputs}};
  std::ofstream f(dir / ("manifest_" + command + ".json"), std::ios::trunc);
  if (!f) throw IoError("cannot write manifest in " + dir.string());
  f << manifest.dump(2) << '\n';
  saveConfig(dir / "config.json", config);
}

fs::path prepareOut(const RunConfig& config) {
  const fs::path dir(config.outDir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void requireFile(const fs::path& path, const char* producer) {
  if (!fs::exists(path)) {
    throw IoError(path.string() + " not found (run '" + producer + "' first)");
  }
}

void cmdGenerate(const RunConfig& config) {
  StageTimer timer("generate");
  const auto dir = prepareOut(config);
  const auto signals = genDataset(config.datasetSpec());
  saveDatasetBinary(dir / "dataset.bin", signals);
  saveDatasetCsv(dir / "dataset.csv", signals);
  writeManifest(dir, "generate", config, {{"signals", signals.size()}});
  timer.log(std::to_string(signals.size()) + " signals written to " + (dir / "dataset.bin").string());
}

void cmdIndicators(const RunConfig& config, bool exportCsv) {
  StageTimer timer("indicators");
  const auto dir = prepareOut(config);
  requireFile(dir / "dataset.bin", "generate");
  const auto signals = loadDatasetBinary(dir / "dataset.bin");
  const auto full = buildMatrix(signals, config.grid);
  timer.log(std::to_string(full.catalog.size()) + " columns before dedup");
  const auto dedup = dedupColumns(full);
  timer.log(std::to_string(dedup.matrix.catalog.size()) + " distinct columns after dedup");
  saveIndicatorMatrix(dir, dedup.matrix);
  {
    std::ofstream f(dir / "dedup_map.tsv", std::ios::trunc);
    if (!f) throw IoError("cannot write " + (dir / "dedup_map.tsv").string());
    writeDedupMapTsv(f, full.catalog, dedup);
  }
  if (exportCsv) {
    std::ofstream f(dir / "indicators.csv", std::ios::trunc);
    if (!f) throw IoError("cannot write " + (dir / "indicators.csv").string());
    writeMatrixCsv(f, dedup.matrix);
  }
  writeManifest(dir, "indicators", config,
                {{"observations", full.cells.rows()},
                 {"simple_per_variant", config.grid.simplePerVariant()},
                 {"derived_per_variant", config.grid.derivedPerVariant()},
                 {"columns_before_dedup", full.catalog.size()},
                 {"columns_after_dedup", dedup.matrix.catalog.size()}});
}

IndicatorMatrix loadMatrixFor(const fs::path& dir) {
  requireFile(dir / "matrix.bin", "indicators");
  return loadIndicatorMatrix(dir);
}

void cmdSelect(const RunConfig& config) {
  StageTimer timer("select");
  const auto dir = prepareOut(config);
  const auto matrix = loadMatrixFor(dir);
  const auto plan = makeSplit(matrix.labels, config.seedSplit, config.splitOptions());
  const BitMatrix train = matrix.cells.selectRows(plan.trainRows);
  std::vector<std::uint8_t> labels;
  for (auto r : plan.trainRows) labels.push_back(static_cast<std::uint8_t>(matrix.labels[r]));
  const auto selection = mrmrRank(train, labels, config.curveMaxK);
  {
    std::ofstream f(dir / "selection.csv", std::ios::trunc);
    if (!f) throw IoError("cannot write " + (dir / "selection.csv").string());
    writeSelectionCsv(f, selection, matrix.catalog);
  }
  {
    std::ofstream f(dir / "split.csv", std::ios::trunc);
    if (!f) throw IoError("cannot write " + (dir / "split.csv").string());
    writeSplitCsv(f, plan, matrix);
  }
  writeManifest(dir, "select", config, {{"selected", selection.orderedColumns.size()}});
  timer.log("ranked " + std::to_string(selection.orderedColumns.size()) + " indicators");
}

void cmdEvaluate(const RunConfig& config, bool saveModels) {
  StageTimer timer("evaluate");
  const auto dir = prepareOut(config);
  const auto matrix = loadMatrixFor(dir);
  const auto result = runEvaluation(config, matrix);
  writeEvaluation(dir, config, matrix, result);
  nlohmann::json outputs = {{"indicators", matrix.catalog.size()}};
  if (result.nbFull) outputs["nb_full_slice_mean"] = result.nbFull->sliceMean;
  if (result.rfFull) outputs["rf_full_slice_mean"] = result.rfFull->sliceMean;
  if (result.nbForward) outputs["nb_k_star"] = result.nbForward->kStar;
  if (result.rfForward) outputs["rf_k_star"] = result.rfForward->kStar;

  if (saveModels) {
    const auto trainX = matrix.cells.selectRows(result.plan.trainRows);
    std::vector<std::uint8_t> labels;
    for (auto r : result.plan.trainRows) labels.push_back(static_cast<std::uint8_t>(matrix.labels[r]));
    if (result.nbForward) {
      const auto& run = *result.nbForward;
      const std::vector<std::size_t> chosen(run.selection.orderedColumns.begin(),
                                            run.selection.orderedColumns.begin() +
                                                static_cast<std::ptrdiff_t>(run.kStar));
      std::vector<std::size_t> rows(trainX.rows());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      std::vector<IndicatorSpec> catalog;
      for (auto c : chosen) catalog.push_back(matrix.catalog[c]);
      std::ofstream f(dir / "nb_model.txt", std::ios::trunc);
      writeNaiveBayes(f, nbTrain(trainX.select(rows, chosen), labels), catalog);
    }
    if (result.rfFull) {
      std::ofstream f(dir / "rf_model.bin", std::ios::binary | std::ios::trunc);
      writeForest(f, rfTrain(trainX, labels, config.forestParams()));
    }
  }
  writeManifest(dir, "evaluate", config, outputs);
  timer.log("reports written to " + dir.string());
  std::cout << renderTextReport(config, result);
}

void cmdReport(const RunConfig& config) {
  const fs::path dir(config.outDir);
  bool any = false;
  for (const char* name : {"table2.csv", "table3.csv", "table4.csv", "table5.csv", "table6.csv"}) {
    std::ifstream f(dir / name);
    if (!f) continue;
    any = true;
    std::cout << "== " << name << '\n' << renderCsvTable(f) << '\n';
  }
  if (!any) throw IoError("no report tables in " + dir.string() + " (run 'evaluate' first)");
}

RunConfig resolveConfig(const CLI::App& app, const Flags& flags) {
  RunConfig config = flags.config.empty() ? RunConfig{} : loadConfig(flags.config);
  if (app.count("--seed-data")) config.seedData = flags.seedData;
  if (app.count("--seed-split")) config.seedSplit = flags.seedSplit;
  if (app.count("--seed-forest")) config.seedForest = flags.seedForest;
  if (app.count("--out")) config.outDir = flags.out;
  if (app.count("--threads")) config.threads = flags.threads;
  if (app.count("--classifier")) config.classifier = parseChoice(flags.classifier);
  if (app.count("--dataset")) config.dataset = parseVariant(flags.dataset);
  if (app.count("--max-k")) config.maxK = flags.maxK;
  if (app.count("--curve-max-k")) config.curveMaxK = flags.curveMaxK;
  if (app.count("--trees")) config.trees = flags.trees;
  if (app.count("--balanced-train")) config.balancedTrain = flags.balancedTrain;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary-indicator anomaly diagnosis on simulated change-point signals"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "JSON run configuration; flags override its values")
      ->check(CLI::ExistingFile);
  app.add_option("--seed-data", flags.seedData, "Seed for signal generation");
  app.add_option("--seed-split", flags.seedSplit, "Seed for the train/test split");
  app.add_option("--seed-forest", flags.seedForest, "Seed for the Random Forest");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--threads", flags.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--classifier", flags.classifier, "nb, rf or both")
      ->check(CLI::IsMember({"nb", "rf", "both"}));
  app.add_option("--dataset", flags.dataset, "Data set variant A or B")
      ->check(CLI::IsMember({"A", "B", "a", "b"}));
  app.add_option("--max-k", flags.maxK, "Largest K considered when choosing K*")
      ->check(CLI::PositiveNumber);
  app.add_option("--curve-max-k", flags.curveMaxK, "Length of the forward-selection curve")
      ->check(CLI::PositiveNumber);
  app.add_option("--trees", flags.trees, "Trees per forest")->check(CLI::PositiveNumber);
  app.add_flag("--balanced-train", flags.balancedTrain, "Equal class counts in the training set");

  auto* generate = app.add_subcommand("generate", "Simulate the labeled signal data set");
  auto* indicators = app.add_subcommand("indicators", "Build and deduplicate the indicator matrix");
  indicators->add_flag("--export-csv", flags.exportCsv, "Also write indicators.csv");
  auto* select = app.add_subcommand("select", "Rank indicators with mRMR on the training split");
  auto* evaluate = app.add_subcommand("evaluate", "Run the classifiers and write report tables");
  evaluate->add_flag("--save-models", flags.saveModels, "Also write nb_model.txt and rf_model.bin");
  auto* report = app.add_subcommand("report", "Print the report tables of a finished run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig config = resolveConfig(app, flags);
    setThreadCount(config.threads);
    if (generate->parsed()) cmdGenerate(config);
    if (indicators->parsed()) cmdIndicators(config, flags.exportCsv);
    if (select->parsed()) cmdSelect(config);
    if (evaluate->parsed()) cmdEvaluate(config, flags.saveModels);
    if (report->parsed()) cmdReport(config);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
