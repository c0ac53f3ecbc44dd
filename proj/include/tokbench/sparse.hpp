#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tokbench/error.hpp"
#include "tokbench/text_io.hpp"

namespace tokbench {

struct SparseEntry {
  std::uint32_t col = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Row-major (CSR) matrix. Within a row, columns are strictly increasing and
/// no stored value is zero.
class SparseMatrix {
 public:
  explicit SparseMatrix(std::size_t cols = 0) : cols_(cols), row_ptr_{0} {}

  /// Appends a row; entries must already be sorted by column.
  void push_row(std::span<const SparseEntry> entries) {
    std::int64_t prev = -1;
    for (const auto& e : entries) {
      if (e.col >= cols_) fail(ErrorKind::internal, "sparse column out of range");
      if (static_cast<std::int64_t>(e.col) <= prev) fail(ErrorKind::internal, "sparse columns not increasing");
      prev = e.col;
      if (e.value != 0.0) data_.push_back(e);
    }
    row_ptr_.push_back(data_.size());
  }

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return data_.size(); }

  std::span<const SparseEntry> row(std::size_t r) const {
    return std::span<const SparseEntry>(data_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }

  double dot_row(std::size_t r, std::span<const double> dense) const {
    double acc = 0.0;
    for (const auto& e : row(r)) acc += e.value * dense[e.col];
    return acc;
  }

  double row_norm(std::size_t r) const {
    double acc = 0.0;
    for (const auto& e : row(r)) acc += e.value * e.value;
    return std::sqrt(acc);
  }

  SparseMatrix select_rows(std::span<const std::size_t> which) const {
    SparseMatrix out(cols_);
    for (std::size_t r : which) out.push_row(row(r));
    return out;
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t cols_;
  std::vector<std::size_t> row_ptr_;
  std::vector<SparseEntry> data_;
};

/// Debug export: one line per row of space-separated `col:value` pairs, values
/// with 9 decimals.
inline std::string format_matrix(const SparseMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    bool first = true;
    for (const auto& e : m.row(r)) {
      if (!first) out.push_back(' ');
      first = false;
      out += std::to_string(e.col);
      out.push_back(':');
      out += text::format_fixed(e.value, 9);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace tokbench
