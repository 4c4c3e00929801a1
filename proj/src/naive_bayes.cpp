#include "bindiag/naive_bayes.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bindiag/error.hpp"

namespace bindiag {

namespace {

constexpr char kMagic[] = "bindiag-naive-bayes";
constexpr int kVersion = 1;

std::string formatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double NaiveBayesModel::rawTheta(std::size_t cls, std::size_t column) const {
  return static_cast<double>(onesCounts[cls][column]) / static_cast<double>(classCounts[cls]);
}

NaiveBayesModel nbFromCounts(std::vector<std::int64_t> classCounts,
                             std::vector<std::vector<std::int64_t>> onesCounts) {
  NaiveBayesModel m;
  const std::size_t classes = classCounts.size();
  std::int64_t total = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (classCounts[c] <= 0) {
      throw InvalidInput("naive Bayes: class " + std::to_string(c) + " has no training rows");
    }
    total += classCounts[c];
  }
  m.priors.resize(classes);
  m.theta.resize(classes);
  m.logOn.resize(classes);
  m.logOff.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    m.priors[c] = static_cast<double>(classCounts[c]) / static_cast<double>(total);
    const auto& ones = onesCounts[c];
    const double denom = static_cast<double>(classCounts[c] + 2);
    for (auto count : ones) {
      const double t = static_cast<double>(count + 1) / denom;
      m.theta[c].push_back(t);
      m.logOn[c].push_back(std::log(t));
      m.logOff[c].push_back(std::log1p(-t));
    }
  }
  m.classCounts = std::move(classCounts);
  m.onesCounts = std::move(onesCounts);
  return m;
}

NaiveBayesModel nbTrain(const BitMatrix& matrix, std::span<const std::uint8_t> labels,
                        int numClasses) {
  if (labels.size() != matrix.rows()) throw InvalidInput("nbTrain: label count mismatch");
  const auto classes = static_cast<std::size_t>(numClasses);
  std::vector<std::int64_t> classCounts(classes, 0);
  std::vector<std::vector<std::int64_t>> ones(classes, std::vector<std::int64_t>(matrix.cols(), 0));
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto c = labels[r];
    if (c >= classes) throw InvalidInput("nbTrain: label out of range");
    ++classCounts[c];
    const auto row = matrix.row(r);
    auto& counts = ones[c];
    for (std::size_t j = 0; j < row.size(); ++j) counts[j] += row[j];
  }
  return nbFromCounts(std::move(classCounts), std::move(ones));
}

NbPrediction nbPredict(const NaiveBayesModel& model, std::span<const std::uint8_t> row) {
  if (row.size() != model.numColumns()) throw InvalidInput("nbPredict: row length mismatch");
  NbPrediction out;
  out.logScores.resize(model.numClasses());
  for (std::size_t c = 0; c < model.numClasses(); ++c) {
    double score = std::log(model.priors[c]);
    const auto& on = model.logOn[c];
    const auto& off = model.logOff[c];
    for (std::size_t j = 0; j < row.size(); ++j) score += row[j] ? on[j] : off[j];
    out.logScores[c] = score;
    if (score > out.logScores[out.cls]) out.cls = static_cast<std::uint8_t>(c);
  }
  return out;
}

std::vector<ExplanationRow> explainTable(const NaiveBayesModel& model,
                                         const std::vector<IndicatorSpec>& catalog,
                                         bool smoothed) {
  if (catalog.size() != model.numColumns()) {
    throw InvalidInput("explainTable: catalog does not match model columns");
  }
  std::vector<ExplanationRow> rows;
  rows.reserve(catalog.size());
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    ExplanationRow row{catalog[j].name, shortName(catalog[j]), {}};
    for (std::size_t c = 0; c < model.numClasses(); ++c) {
      row.theta.push_back(smoothed ? model.theta[c][j] : model.rawTheta(c, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void writeNaiveBayes(std::ostream& out, const NaiveBayesModel& model,
                     const std::vector<IndicatorSpec>& catalog) {
  if (catalog.size() != model.numColumns()) {
    throw InvalidInput("writeNaiveBayes: catalog does not match model columns");
  }
  out << kMagic << ' ' << kVersion << ' ' << model.numClasses() << ' ' << model.numColumns()
      << '\n';
  out << "priors";
  for (double p : model.priors) out << '\t' << formatReal(p);
  out << "\nclass_counts";
  for (auto n : model.classCounts) out << '\t' << n;
  out << '\n';
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    out << catalog[j].name;
    for (std::size_t c = 0; c < model.numClasses(); ++c) out << '\t' << model.onesCounts[c][j];
    for (std::size_t c = 0; c < model.numClasses(); ++c) out << '\t' << formatReal(model.theta[c][j]);
    out << '\n';
  }
}

NaiveBayesModel readNaiveBayes(std::istream& in, std::vector<std::string>* columnNames) {
  std::string magic;
  int version = 0;
  std::size_t classes = 0, columns = 0;
  if (!(in >> magic >> version >> classes >> columns) || magic != kMagic || version != kVersion) {
    throw IoError("naive Bayes model: bad header");
  }
  std::string line;
  std::getline(in, line);
  std::getline(in, line);  // priors are recomputed from the counts
  if (line.rfind("priors", 0) != 0) throw IoError("naive Bayes model: missing priors");
  std::getline(in, line);
  std::istringstream countLine(line);
  std::string tag;
  countLine >> tag;
  if (tag != "class_counts") throw IoError("naive Bayes model: missing class counts");
  std::vector<std::int64_t> classCounts(classes);
  for (auto& n : classCounts)
    if (!(countLine >> n)) throw IoError("naive Bayes model: short class counts");
  std::vector<std::vector<std::int64_t>> ones(classes, std::vector<std::int64_t>(columns));
  if (columnNames) columnNames->clear();
  for (std::size_t j = 0; j < columns; ++j) {
    if (!std::getline(in, line)) throw IoError("naive Bayes model: truncated column list");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw IoError("naive Bayes model: malformed column line");
    if (columnNames) columnNames->push_back(line.substr(0, tab));
    std::istringstream fields(line.substr(tab + 1));
    for (std::size_t c = 0; c < classes; ++c)
      if (!(fields >> ones[c][j])) throw IoError("naive Bayes model: malformed counts");
  }
  return nbFromCounts(std::move(classCounts), std::move(ones));
}

}  // namespace bindiag
