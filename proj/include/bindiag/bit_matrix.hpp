#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bindiag {

/// Dense row-major matrix of 0/1 cells.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint8_t at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint8_t v) { cells_[r * cols_ + c] = v; }

  std::span<const std::uint8_t> row(std::size_t r) const {
    return {cells_.data() + r * cols_, cols_};
  }
  std::span<std::uint8_t> row(std::size_t r) { return {cells_.data() + r * cols_, cols_}; }

  std::vector<std::uint8_t> column(std::size_t c) const {
    std::vector<std::uint8_t> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
  }

  /// Sub-matrix restricted to the given rows and columns, in the given order.
  BitMatrix select(std::span<const std::size_t> rowIdx, std::span<const std::size_t> colIdx) const {
    BitMatrix out(rowIdx.size(), colIdx.size());
    for (std::size_t i = 0; i < rowIdx.size(); ++i) {
      const auto src = row(rowIdx[i]);
      auto dst = out.row(i);
      for (std::size_t j = 0; j < colIdx.size(); ++j) dst[j] = src[colIdx[j]];
    }
    return out;
  }

  BitMatrix selectRows(std::span<const std::size_t> rowIdx) const {
    BitMatrix out(rowIdx.size(), cols_);
    for (std::size_t i = 0; i < rowIdx.size(); ++i) {
      const auto src = row(rowIdx[i]);
      std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
  }

  const std::vector<std::uint8_t>& data() const { return cells_; }
  std::vector<std::uint8_t>& data() { return cells_; }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace bindiag
