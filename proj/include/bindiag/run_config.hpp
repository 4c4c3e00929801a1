#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bindiag/eval_pipeline.hpp"
#include "bindiag/indicator_bank.hpp"
#include "bindiag/random_forest.hpp"
#include "bindiag/signal_sim.hpp"

namespace bindiag {

enum class ClassifierChoice { NaiveBayes, RandomForest, Both };

std::string_view choiceName(ClassifierChoice choice);  // "nb" / "rf" / "both"
ClassifierChoice parseChoice(std::string_view text);

/// Everything that determines a run. Defaults reproduce the reference
/// experiment: data set A, 3000 + 3 x 1000 signals, the full parameter grid,
/// 1000 training rows and 10 test slices of 500.
struct RunConfig {
  DatasetVariant dataset = DatasetVariant::A;
  std::uint64_t seedData = 20170101;
  std::uint64_t seedSplit = 1;
  std::uint64_t seedForest = 2;
  int countNormal = 3000;
  int countPerAnomaly = 1000;
  GridConfig grid;
  ClassifierChoice classifier = ClassifierChoice::Both;
  std::size_t maxK = 30;        // cap on the K* search
  std::size_t curveMaxK = 100;  // forward curve length
  int trees = 500;
  int mtry = 0;
  bool balancedTrain = false;
  std::size_t trainSize = 1000;
  std::size_t sliceCount = 10;
  std::size_t sliceSize = 500;
  int threads = 0;
  std::string outDir = "out";

  DatasetSpec datasetSpec() const;
  SplitOptions splitOptions() const;
  ForestParams forestParams() const;
  /// Throws InvalidInput on any out-of-range value.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string configToJson(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig configFromJson(const std::string& text);

RunConfig loadConfig(const std::filesystem::path& path);
void saveConfig(const std::filesystem::path& path, const RunConfig& config);

}  // namespace bindiag
