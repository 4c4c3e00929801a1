#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "bindiag/naive_bayes.hpp"
#include "bindiag/random_forest.hpp"

namespace bindiag {

enum class ClassifierKind { NaiveBayes, RandomForest };

std::string_view classifierName(ClassifierKind kind);  // "nb" / "rf"

/// Either trained model behind one predict interface.
struct FittedClassifier {
  std::variant<NaiveBayesModel, ForestModel> model;

  std::uint8_t predict(std::span<const std::uint8_t> row) const;
  std::vector<std::uint8_t> predictAll(const BitMatrix& matrix) const;
  /// Out-of-bag accuracy for forests, empty for Naive Bayes.
  std::optional<double> oobAccuracy() const;
};

FittedClassifier fitClassifier(ClassifierKind kind, const BitMatrix& matrix,
                               std::span<const std::uint8_t> labels,
                               const ForestParams& forest = {});

}  // namespace bindiag
