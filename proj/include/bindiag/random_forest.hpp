#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bindiag/bit_matrix.hpp"
#include "bindiag/signal_sim.hpp"

namespace bindiag {

struct ForestParams {
  int numTrees = 500;
  int mtry = 0;  // candidates per split; 0 selects floor(sqrt(columns))
  std::uint64_t seed = 7;
};

/// Flat node. Internal nodes route x = 0 to `left` and x = 1 to `right`.
struct TreeNode {
  std::int32_t column = -1;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint8_t leafClass = 0;

  bool isLeaf() const { return column < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::uint8_t predict(std::span<const std::uint8_t> row) const;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  double oobAccuracy = 0.0;
  ForestParams params;
  int mtryUsed = 0;
  int numClasses = kNumClasses;
  std::size_t numColumns = 0;
};

/// Bootstrap-aggregated Gini trees grown to purity. Tree t draws from its
/// own stream seeded by (seed, t), so the forest does not depend on the
/// thread count.
ForestModel rfTrain(const BitMatrix& matrix, std::span<const std::uint8_t> labels,
                    const ForestParams& params = {}, int numClasses = kNumClasses);

/// Plurality vote; ties go to the lowest class code.
std::uint8_t rfPredict(const ForestModel& model, std::span<const std::uint8_t> row);

/// Binary format "BDRF": header fields, then per tree a node count and the
/// flat node array.
void writeForest(std::ostream& out, const ForestModel& model);
ForestModel readForest(std::istream& in);

}  // namespace bindiag
