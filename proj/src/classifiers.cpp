#include "bindiag/classifiers.hpp"

namespace bindiag {

std::string_view classifierName(ClassifierKind kind) {
  return kind == ClassifierKind::NaiveBayes ? "nb" : "rf";
}

std::uint8_t FittedClassifier::predict(std::span<const std::uint8_t> row) const {
  if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) return nbPredict(*nb, row).cls;
  return rfPredict(std::get<ForestModel>(model), row);
}

std::vector<std::uint8_t> FittedClassifier::predictAll(const BitMatrix& matrix) const {
  std::vector<std::uint8_t> out(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) out[r] = predict(matrix.row(r));
  return out;
}

std::optional<double> FittedClassifier::oobAccuracy() const {
  if (const auto* rf = std::get_if<ForestModel>(&model)) return rf->oobAccuracy;
  return std::nullopt;
}

FittedClassifier fitClassifier(ClassifierKind kind, const BitMatrix& matrix,
                               std::span<const std::uint8_t> labels, const ForestParams& forest) {
  if (kind == ClassifierKind::NaiveBayes) return {nbTrain(matrix, labels)};
  return {rfTrain(matrix, labels, forest)};
}

}  // namespace bindiag
