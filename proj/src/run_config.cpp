#include "bindiag/run_config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "bindiag/error.hpp"

namespace bindiag {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "dataset",     "seed_data",  "seed_split",     "seed_forest", "count_normal",
    "count_per_anomaly", "grid", "classifier",     "max_k",       "curve_max_k",
    "trees",       "mtry",       "balanced_train", "train_size",  "slice_count",
    "slice_size",  "threads",    "out"};

const std::set<std::string> kGridKeys = {"tests", "taus",        "levels",    "deltas",
                                         "betas", "local_pairs", "smoothings"};

json gridToJson(const GridConfig& g) {
  json tests = json::array();
  for (auto t : g.tests) tests.push_back(std::string(testName(t)));
  json pairs = json::array();
  for (const auto& [l, k] : g.localPairs) pairs.push_back({l, k});
  return {{"tests", tests},   {"taus", g.taus},         {"levels", g.levels},
          {"deltas", g.deltas}, {"betas", g.betas}, {"local_pairs", pairs},
          {"smoothings", g.smoothings}};
}

GridConfig gridFromJson(const json& j) {
  GridConfig g;
  for (const auto& [key, _] : j.items())
    if (!kGridKeys.count(key)) throw InvalidInput("config: unknown grid key '" + key + "'");
  if (j.contains("tests")) {
    g.tests.clear();
    for (const auto& t : j.at("tests")) g.tests.push_back(parseTestKind(t.get<std::string>()));
  }
  if (j.contains("taus")) g.taus = j.at("taus").get<std::vector<int>>();
  if (j.contains("levels")) g.levels = j.at("levels").get<std::vector<double>>();
  if (j.contains("deltas")) g.deltas = j.at("deltas").get<std::vector<int>>();
  if (j.contains("betas")) g.betas = j.at("betas").get<std::vector<double>>();
  if (j.contains("local_pairs")) {
    g.localPairs.clear();
    for (const auto& p : j.at("local_pairs")) {
      if (!p.is_array() || p.size() != 2) throw InvalidInput("config: local pair must be [l, k]");
      g.localPairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
  }
  if (j.contains("smoothings")) g.smoothings = j.at("smoothings").get<std::vector<int>>();
  return g;
}

}  // namespace

std::string_view choiceName(ClassifierChoice choice) {
  switch (choice) {
    case ClassifierChoice::NaiveBayes: return "nb";
    case ClassifierChoice::RandomForest: return "rf";
    case ClassifierChoice::Both: return "both";
  }
  return "?";
}

ClassifierChoice parseChoice(std::string_view text) {
  if (text == "nb") return ClassifierChoice::NaiveBayes;
  if (text == "rf") return ClassifierChoice::RandomForest;
  if (text == "both") return ClassifierChoice::Both;
  throw InvalidInput("classifier must be nb, rf or both, got '" + std::string(text) + "'");
}

DatasetSpec RunConfig::datasetSpec() const {
  return {dataset, countNormal, countPerAnomaly, seedData};
}

SplitOptions RunConfig::splitOptions() const {
  return {trainSize, sliceCount, sliceSize, balancedTrain};
}

ForestParams RunConfig::forestParams() const { return {trees, mtry, seedForest}; }

void RunConfig::validate() const {
  grid.validate();
  if (countNormal < 1 || countPerAnomaly < 1) throw InvalidInput("config: class counts must be >= 1");
  if (maxK < 1 || curveMaxK < 1) throw InvalidInput("config: max_k and curve_max_k must be >= 1");
  if (trees < 1) throw InvalidInput("config: trees must be >= 1");
  if (mtry < 0) throw InvalidInput("config: mtry must be >= 0");
  if (threads < 0) throw InvalidInput("config: threads must be >= 0");
  if (trainSize < 1 || sliceCount < 1 || sliceSize < 1) {
    throw InvalidInput("config: split sizes must be >= 1");
  }
  const auto rows = static_cast<std::size_t>(countNormal) + 3 * static_cast<std::size_t>(countPerAnomaly);
  if (trainSize + sliceCount * sliceSize != rows) {
    throw InvalidInput("config: train_size + slice_count * slice_size must equal the " +
                       std::to_string(rows) + " signals");
  }
  for (int tau : grid.taus) {
    for (int w : grid.smoothings) {
      if (tau > kMaxLength - w + 1) {
        throw InvalidInput("config: tau " + std::to_string(tau) + " never fits a signal smoothed with width " +
                           std::to_string(w));
      }
    }
  }
}

std::string configToJson(const RunConfig& c) {
  json j = {{"dataset", std::string(variantName(c.dataset))},
            {"seed_data", c.seedData},
            {"seed_split", c.seedSplit},
            {"seed_forest", c.seedForest},
            {"count_normal", c.countNormal},
            {"count_per_anomaly", c.countPerAnomaly},
            {"grid", gridToJson(c.grid)},
            {"classifier", std::string(choiceName(c.classifier))},
            {"max_k", c.maxK},
            {"curve_max_k", c.curveMaxK},
            {"trees", c.trees},
            {"mtry", c.mtry},
            {"balanced_train", c.balancedTrain},
            {"train_size", c.trainSize},
            {"slice_count", c.sliceCount},
            {"slice_size", c.sliceSize},
            {"threads", c.threads},
            {"out", c.outDir}};
  return j.dump(2) + "\n";
}

RunConfig configFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.count(key)) throw InvalidInput("config: unknown key '" + key + "'");

  RunConfig c;
  try {
    if (j.contains("dataset")) c.dataset = parseVariant(j.at("dataset").get<std::string>());
    if (j.contains("seed_data")) c.seedData = j.at("seed_data").get<std::uint64_t>();
    if (j.contains("seed_split")) c.seedSplit = j.at("seed_split").get<std::uint64_t>();
    if (j.contains("seed_forest")) c.seedForest = j.at("seed_forest").get<std::uint64_t>();
    if (j.contains("count_normal")) c.countNormal = j.at("count_normal").get<int>();
    if (j.contains("count_per_anomaly")) c.countPerAnomaly = j.at("count_per_anomaly").get<int>();
    if (j.contains("grid")) c.grid = gridFromJson(j.at("grid"));
    if (j.contains("classifier")) c.classifier = parseChoice(j.at("classifier").get<std::string>());
    if (j.contains("max_k")) c.maxK = j.at("max_k").get<std::size_t>();
    if (j.contains("curve_max_k")) c.curveMaxK = j.at("curve_max_k").get<std::size_t>();
    if (j.contains("trees")) c.trees = j.at("trees").get<int>();
    if (j.contains("mtry")) c.mtry = j.at("mtry").get<int>();
    if (j.contains("balanced_train")) c.balancedTrain = j.at("balanced_train").get<bool>();
    if (j.contains("train_size")) c.trainSize = j.at("train_size").get<std::size_t>();
    if (j.contains("slice_count")) c.sliceCount = j.at("slice_count").get<std::size_t>();
    if (j.contains("slice_size")) c.sliceSize = j.at("slice_size").get<std::size_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("out")) c.outDir = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return configFromJson(ss.str());
}

void saveConfig(const std::filesystem::path& path, const RunConfig& config) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << configToJson(config);
}

}  // namespace bindiag
