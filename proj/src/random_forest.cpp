#include "bindiag/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "bindiag/binary_io.hpp"
#include "bindiag/error.hpp"
#include "bindiag/parallel.hpp"

namespace bindiag {

namespace {

constexpr std::uint8_t kInBag = 0xff;
constexpr char kMagic[] = "BDRF";
constexpr std::uint32_t kVersion = 1;

std::uint8_t plurality(std::span<const std::int64_t> votes) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c)
    if (votes[c] > votes[best]) best = c;
  return static_cast<std::uint8_t>(best);
}

// Training data laid out column-major so split scans are contiguous.
struct ColumnStore {
  std::size_t rows = 0;
  std::vector<std::uint8_t> cells;

  explicit ColumnStore(const BitMatrix& m) : rows(m.rows()), cells(m.rows() * m.cols()) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < m.cols(); ++c) cells[c * rows + r] = row[c];
    }
  }
  const std::uint8_t* column(std::size_t c) const { return cells.data() + c * rows; }
};

class TreeBuilder {
 public:
  TreeBuilder(const ColumnStore& data, std::span<const std::uint8_t> labels, std::size_t cols,
              int mtry, int numClasses, std::mt19937_64& rng)
      : data_(data), labels_(labels), cols_(cols), mtry_(static_cast<std::size_t>(mtry)),
        classes_(static_cast<std::size_t>(numClasses)), rng_(rng), features_(cols) {
    for (std::size_t c = 0; c < cols; ++c) features_[c] = c;
  }

  DecisionTree build(std::vector<std::size_t> samples) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    // (node index, begin, end) over `samples`
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> work{{0, 0, samples.size()}};
    std::vector<std::int64_t> counts(classes_), onesCounts(classes_);
    while (!work.empty()) {
      const auto [node, begin, end] = work.back();
      work.pop_back();

      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = begin; i < end; ++i) ++counts[labels_[samples[i]]];
      const auto majority = plurality(counts);
      tree.nodes[node].leafClass = majority;
      const auto nodeSize = static_cast<std::int64_t>(end - begin);
      if (counts[majority] == nodeSize) continue;

      // Gini decrease is maximal where sum_c n_c^2 / n over both children is.
      double parentScore = 0.0;
      for (auto n : counts) parentScore += static_cast<double>(n * n);
      parentScore /= static_cast<double>(nodeSize);

      const std::size_t draws = std::min(mtry_, cols_);
      double bestScore = parentScore;
      std::int64_t bestColumn = -1;
      for (std::size_t t = 0; t < draws; ++t) {
        std::uniform_int_distribution<std::size_t> pick(t, cols_ - 1);
        std::swap(features_[t], features_[pick(rng_)]);
        const std::size_t c = features_[t];
        const std::uint8_t* x = data_.column(c);
        std::fill(onesCounts.begin(), onesCounts.end(), 0);
        std::int64_t ones = 0;
        for (std::size_t i = begin; i < end; ++i) {
          if (x[samples[i]]) {
            ++onesCounts[labels_[samples[i]]];
            ++ones;
          }
        }
        if (ones == 0 || ones == nodeSize) continue;
        double sq1 = 0.0, sq0 = 0.0;
        for (std::size_t k = 0; k < classes_; ++k) {
          const auto n1 = onesCounts[k];
          const auto n0 = counts[k] - n1;
          sq1 += static_cast<double>(n1 * n1);
          sq0 += static_cast<double>(n0 * n0);
        }
        const double score =
            sq1 / static_cast<double>(ones) + sq0 / static_cast<double>(nodeSize - ones);
        if (score > bestScore + 1e-12) {
          bestScore = score;
          bestColumn = static_cast<std::int64_t>(c);
        }
      }
      if (bestColumn < 0) continue;

      const std::uint8_t* x = data_.column(static_cast<std::size_t>(bestColumn));
      const auto mid = static_cast<std::size_t>(
          std::stable_partition(samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                samples.begin() + static_cast<std::ptrdiff_t>(end),
                                [x](std::size_t s) { return x[s] == 0; }) -
          samples.begin());
      const auto left = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      tree.nodes[node].column = static_cast<std::int32_t>(bestColumn);
      tree.nodes[node].left = left;
      tree.nodes[node].right = left + 1;
      work.emplace_back(static_cast<std::size_t>(left + 1), mid, end);
      work.emplace_back(static_cast<std::size_t>(left), begin, mid);
    }
    return tree;
  }

 private:
  const ColumnStore& data_;
  std::span<const std::uint8_t> labels_;
  std::size_t cols_;
  std::size_t mtry_;
  std::size_t classes_;
  std::mt19937_64& rng_;
  std::vector<std::size_t> features_;
};

}  // namespace

std::uint8_t DecisionTree::predict(std::span<const std::uint8_t> row) const {
  std::size_t i = 0;
  while (!nodes[i].isLeaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.column)] ? n.right : n.left);
  }
  return nodes[i].leafClass;
}

ForestModel rfTrain(const BitMatrix& matrix, std::span<const std::uint8_t> labels,
                    const ForestParams& params, int numClasses) {
  if (labels.size() != matrix.rows()) throw InvalidInput("rfTrain: label count mismatch");
  if (matrix.rows() == 0 || matrix.cols() == 0) throw InvalidInput("rfTrain: empty matrix");
  if (params.numTrees < 1) throw InvalidInput("rfTrain: need at least one tree");
  for (auto y : labels)
    if (y >= numClasses) throw InvalidInput("rfTrain: label out of range");

  ForestModel model;
  model.params = params;
  model.numClasses = numClasses;
  model.numColumns = matrix.cols();
  model.mtryUsed = params.mtry > 0
                       ? params.mtry
                       : std::max(1, static_cast<int>(std::floor(std::sqrt(
                                         static_cast<double>(matrix.cols())))));

  const ColumnStore data(matrix);
  const std::size_t n = matrix.rows();
  const auto treeCount = static_cast<std::size_t>(params.numTrees);
  model.trees.resize(treeCount);
  // oobVotes[t][i]: tree t's prediction for row i, or kInBag.
  std::vector<std::vector<std::uint8_t>> oobVotes(treeCount);

  parallelFor(treeCount, [&](std::size_t t) {
    std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                      static_cast<std::uint32_t>(params.seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    std::vector<std::size_t> samples(n);
    std::vector<std::uint8_t> votes(n, 0);
    for (auto& s : samples) {
      s = draw(rng);
      votes[s] = kInBag;
    }
    TreeBuilder builder(data, labels, matrix.cols(), model.mtryUsed, numClasses, rng);
    model.trees[t] = builder.build(std::move(samples));
    for (std::size_t i = 0; i < n; ++i) {
      if (votes[i] != kInBag) votes[i] = model.trees[t].predict(matrix.row(i));
    }
    oobVotes[t] = std::move(votes);
  });

  std::size_t evaluated = 0, correct = 0;
  std::vector<std::int64_t> tally(static_cast<std::size_t>(numClasses));
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(tally.begin(), tally.end(), 0);
    bool any = false;
    for (std::size_t t = 0; t < treeCount; ++t) {
      if (oobVotes[t][i] == kInBag) continue;
      ++tally[oobVotes[t][i]];
      any = true;
    }
    if (!any) continue;
    ++evaluated;
    correct += plurality(tally) == labels[i];
  }
  // A row that lands in every bootstrap sample has no out-of-bag vote and is skipped.
  model.oobAccuracy =
      evaluated == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(evaluated);
  return model;
}

std::uint8_t rfPredict(const ForestModel& model, std::span<const std::uint8_t> row) {
  if (row.size() != model.numColumns) throw InvalidInput("rfPredict: row length mismatch");
  std::vector<std::int64_t> tally(static_cast<std::size_t>(model.numClasses), 0);
  for (const auto& tree : model.trees) ++tally[tree.predict(row)];
  return plurality(tally);
}

void writeForest(std::ostream& out, const ForestModel& model) {
  using detail::writePod;
  out.write(kMagic, 4);
  writePod(out, kVersion);
  writePod(out, static_cast<std::int32_t>(model.numClasses));
  writePod(out, static_cast<std::uint64_t>(model.numColumns));
  writePod(out, static_cast<std::int32_t>(model.params.numTrees));
  writePod(out, static_cast<std::int32_t>(model.params.mtry));
  writePod(out, model.params.seed);
  writePod(out, static_cast<std::int32_t>(model.mtryUsed));
  writePod(out, model.oobAccuracy);
  writePod(out, static_cast<std::uint64_t>(model.trees.size()));
  for (const auto& tree : model.trees) {
    writePod(out, static_cast<std::uint64_t>(tree.nodes.size()));
    for (const auto& node : tree.nodes) {
      writePod(out, node.column);
      writePod(out, node.left);
      writePod(out, node.right);
      writePod(out, node.leafClass);
    }
  }
}

ForestModel readForest(std::istream& in) {
  using detail::readPod;
  detail::expectMagic(in, kMagic);
  if (readPod<std::uint32_t>(in) != kVersion) throw IoError("forest: unsupported version");
  ForestModel m;
  m.numClasses = readPod<std::int32_t>(in);
  m.numColumns = static_cast<std::size_t>(readPod<std::uint64_t>(in));
  m.params.numTrees = readPod<std::int32_t>(in);
  m.params.mtry = readPod<std::int32_t>(in);
  m.params.seed = readPod<std::uint64_t>(in);
  m.mtryUsed = readPod<std::int32_t>(in);
  m.oobAccuracy = readPod<double>(in);
  const auto trees = readPod<std::uint64_t>(in);
  m.trees.resize(static_cast<std::size_t>(trees));
  for (auto& tree : m.trees) {
    const auto count = readPod<std::uint64_t>(in);
    tree.nodes.resize(static_cast<std::size_t>(count));
    for (auto& node : tree.nodes) {
      node.column = readPod<std::int32_t>(in);
      node.left = readPod<std::int32_t>(in);
      node.right = readPod<std::int32_t>(in);
      node.leafClass = readPod<std::uint8_t>(in);
      if (!node.isLeaf() && (node.column >= static_cast<std::int32_t>(m.numColumns) ||
                             node.left <= 0 || node.right <= 0 ||
                             node.left >= static_cast<std::int32_t>(count) ||
                             node.right >= static_cast<std::int32_t>(count))) {
        throw IoError("forest: node references out of range");
      }
    }
    if (tree.nodes.empty()) throw IoError("forest: empty tree");
  }
  return m;
}

}  // namespace bindiag
