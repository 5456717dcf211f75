#pragma once

// Linear algebra over the two-element field.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "causalkh/errors.hpp"

namespace causalkh {

using BitEntry = std::pair<std::uint32_t, std::uint32_t>;  // (row, col)

/// A matrix over GF(2). Rows are stored either as packed 64-bit words or as
/// sorted column-index lists; from_entries picks the layout by density.
class SparseBitMatrix {
 public:
  static constexpr double kDenseDensity = 0.05;
  static constexpr std::size_t kDenseMaxCols = 512;

  SparseBitMatrix() = default;

  static SparseBitMatrix zero(std::size_t rows, std::size_t cols) {
    return from_entries(rows, cols, {});
  }

  static SparseBitMatrix identity(std::size_t n) {
    std::vector<BitEntry> entries;
    for (std::uint32_t k = 0; k < n; ++k) entries.emplace_back(k, k);
    return from_entries(n, n, std::move(entries));
  }

  /// Repeated (row, col) pairs cancel in pairs.
  static SparseBitMatrix from_entries(std::size_t rows, std::size_t cols,
                                      std::vector<BitEntry> entries) {
    std::sort(entries.begin(), entries.end());
    std::vector<BitEntry> reduced;
    reduced.reserve(entries.size());
    for (const BitEntry& e : entries) {
      if (e.first >= rows || e.second >= cols) {
        throw IntegrityError("matrix entry (" + std::to_string(e.first) + "," +
                             std::to_string(e.second) + ") outside " +
                             std::to_string(rows) + "x" + std::to_string(cols));
      }
      if (!reduced.empty() && reduced.back() == e) {
        reduced.pop_back();
      } else {
        reduced.push_back(e);
      }
    }
    SparseBitMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.nnz_ = reduced.size();
    m.sparse_rows_.assign(rows, {});
    for (const BitEntry& e : reduced) m.sparse_rows_[e.first].push_back(e.second);
    double cells = static_cast<double>(rows) * static_cast<double>(cols);
    bool dense = cols <= kDenseMaxCols ||
                 (cells > 0 && static_cast<double>(m.nnz_) / cells > kDenseDensity);
    return dense ? m.to_dense() : m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return nnz_; }
  bool is_dense() const { return dense_; }
  std::size_t words_per_row() const { return (cols_ + 63) / 64; }

  bool get(std::size_t r, std::size_t c) const {
    if (dense_) return (words_[r * words_per_row() + c / 64] >> (c % 64)) & 1u;
    const auto& row = sparse_rows_[r];
    return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(c));
  }

  /// Sorted column indices of the nonzero entries in row r.
  std::vector<std::uint32_t> row_indices(std::size_t r) const {
    if (!dense_) return sparse_rows_[r];
    std::vector<std::uint32_t> out;
    const std::size_t wpr = words_per_row();
    for (std::size_t w = 0; w < wpr; ++w) {
      std::uint64_t word = words_[r * wpr + w];
      while (word) {
        out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(word)));
        word &= word - 1;
      }
    }
    return out;
  }

  std::vector<BitEntry> entries() const {
    std::vector<BitEntry> out;
    out.reserve(nnz_);
    for (std::uint32_t r = 0; r < rows_; ++r)
      for (std::uint32_t c : row_indices(r)) out.emplace_back(r, c);
    return out;
  }

  SparseBitMatrix to_dense() const {
    if (dense_) return *this;
    SparseBitMatrix m;
    m.rows_ = rows_;
    m.cols_ = cols_;
    m.nnz_ = nnz_;
    m.dense_ = true;
    const std::size_t wpr = words_per_row();
    m.words_.assign(rows_ * wpr, 0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::uint32_t c : sparse_rows_[r]) m.words_[r * wpr + c / 64] |= std::uint64_t{1} << (c % 64);
    return m;
  }

  SparseBitMatrix to_sparse() const {
    if (!dense_) return *this;
    SparseBitMatrix m;
    m.rows_ = rows_;
    m.cols_ = cols_;
    m.nnz_ = nnz_;
    m.sparse_rows_.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) m.sparse_rows_[r] = row_indices(r);
    return m;
  }

  SparseBitMatrix transpose() const {
    std::vector<BitEntry> t;
    t.reserve(nnz_);
    for (const auto& [r, c] : entries()) t.emplace_back(c, r);
    return from_entries(cols_, rows_, std::move(t));
  }

  friend bool operator==(const SparseBitMatrix& a, const SparseBitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries() == b.entries();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t nnz_ = 0;
  bool dense_ = false;
  std::vector<std::uint64_t> words_;
  std::vector<std::vector<std::uint32_t>> sparse_rows_;
};

namespace detail {

inline std::size_t dense_rank(const SparseBitMatrix& m) {
  const std::size_t wpr = m.words_per_row();
  // pivot_rows[c] holds a reduced row whose lowest set bit is c.
  std::vector<std::vector<std::uint64_t>> pivot_rows(m.cols());
  std::vector<std::uint64_t> row(wpr);
  std::size_t rank = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (std::uint32_t c : m.row_indices(r)) row[c / 64] |= std::uint64_t{1} << (c % 64);
    std::size_t w = 0;
    while (true) {
      while (w < wpr && row[w] == 0) ++w;
      if (w == wpr) break;
      std::size_t lead = w * 64 + std::countr_zero(row[w]);
      auto& pivot = pivot_rows[lead];
      if (pivot.empty()) {
        pivot = row;
        ++rank;
        break;
      }
      for (std::size_t k = w; k < wpr; ++k) row[k] ^= pivot[k];
    }
  }
  return rank;
}

inline void xor_sorted(std::vector<std::uint32_t>& acc, const std::vector<std::uint32_t>& other,
                       std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(acc.begin(), acc.end(), other.begin(), other.end(),
                                std::back_inserter(scratch));
  acc.swap(scratch);
}

// Pivots on the column with fewest live entries, using its shortest row, so
// fill-in stays small on the very sparse cube differentials.
inline std::size_t sparse_rank(const SparseBitMatrix& m) {
  const std::size_t n_rows = m.rows(), n_cols = m.cols();
  std::vector<std::vector<std::uint32_t>> rows(n_rows);
  std::vector<std::vector<std::uint32_t>> col_rows(n_cols);  // superset of live occupants
  std::vector<std::uint32_t> count(n_cols, 0);
  for (std::uint32_t r = 0; r < n_rows; ++r) {
    rows[r] = m.row_indices(r);
    for (std::uint32_t c : rows[r]) {
      col_rows[c].push_back(r);
      ++count[c];
    }
  }
  std::vector<char> row_dead(n_rows, 0), col_dead(n_cols, 0);
  using Item = std::pair<std::uint32_t, std::uint32_t>;  // (count, col)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::uint32_t c = 0; c < n_cols; ++c)
    if (count[c] > 0) heap.emplace(count[c], c);

  std::vector<std::uint32_t> stamp(n_rows, 0), members, scratch, touched;
  std::uint32_t epoch = 0;
  std::size_t rank = 0;
  while (!heap.empty()) {
    auto [k, c] = heap.top();
    heap.pop();
    if (col_dead[c] || count[c] != k || k == 0) continue;

    ++epoch;
    members.clear();
    std::vector<std::uint32_t> live;
    for (std::uint32_t r : col_rows[c]) {
      if (row_dead[r] || stamp[r] == epoch) continue;
      stamp[r] = epoch;
      if (std::binary_search(rows[r].begin(), rows[r].end(), c)) live.push_back(r);
    }
    col_rows[c].clear();
    std::uint32_t pivot = live.front();
    for (std::uint32_t r : live)
      if (rows[r].size() < rows[pivot].size()) pivot = r;

    const std::vector<std::uint32_t>& prow = rows[pivot];
    touched.clear();
    for (std::uint32_t r : live) {
      if (r == pivot) continue;
      // Columns of prow absent from rows[r] gain an occupant; shared ones lose one.
      auto a = rows[r].begin();
      for (std::uint32_t x : prow) {
        while (a != rows[r].end() && *a < x) ++a;
        if (a != rows[r].end() && *a == x) {
          --count[x];
        } else {
          ++count[x];
          col_rows[x].push_back(r);
        }
        touched.push_back(x);
      }
      xor_sorted(rows[r], prow, scratch);
      if (rows[r].empty()) row_dead[r] = 1;
    }
    for (std::uint32_t x : prow) {
      --count[x];
      touched.push_back(x);
    }
    row_dead[pivot] = 1;
    rows[pivot].clear();
    col_dead[c] = 1;
    ++rank;
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::uint32_t x : touched)
      if (!col_dead[x] && count[x] > 0) heap.emplace(count[x], x);
  }
  return rank;
}

}  // namespace detail

/// Rank over GF(2). The input is never modified.
inline std::size_t rank(const SparseBitMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0 || m.nnz() == 0) return 0;
  return m.is_dense() ? detail::dense_rank(m) : detail::sparse_rank(m);
}

/// True when outer * inner == 0 over GF(2). Requires outer.cols() == inner.rows().
inline bool product_is_zero(const SparseBitMatrix& outer, const SparseBitMatrix& inner) {
  if (outer.cols() != inner.rows()) {
    throw IntegrityError("product dimension mismatch: " + std::to_string(outer.cols()) +
                         " vs " + std::to_string(inner.rows()));
  }
  if (outer.nnz() == 0 || inner.nnz() == 0) return true;
  std::vector<std::vector<std::uint32_t>> inner_rows(inner.rows());
  for (std::size_t r = 0; r < inner.rows(); ++r) inner_rows[r] = inner.row_indices(r);
  std::vector<std::uint32_t> acc, scratch;
  for (std::size_t r = 0; r < outer.rows(); ++r) {
    acc.clear();
    for (std::uint32_t k : outer.row_indices(r)) detail::xor_sorted(acc, inner_rows[k], scratch);
    if (!acc.empty()) return false;
  }
  return true;
}

/// dim H(C_i) for C_{i-1} --d_in--> C_i --d_out--> C_{i+1}.
inline std::size_t homology_dims(const SparseBitMatrix& d_in, const SparseBitMatrix& d_out) {
  if (d_in.rows() != d_out.cols()) {
    throw IntegrityError("dimension mismatch: d_in targets " + std::to_string(d_in.rows()) +
                         " but d_out acts on " + std::to_string(d_out.cols()));
  }
  if (!product_is_zero(d_out, d_in)) {
    throw IntegrityError("d_out * d_in != 0; chain complex is broken");
  }
  return d_out.cols() - rank(d_out) - rank(d_in);
}

}  // namespace causalkh
