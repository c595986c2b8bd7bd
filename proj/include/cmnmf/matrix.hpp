#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cmnmf {

/// Dense row-major matrix whose entries are all finite and >= 0.
///
/// Holds the factor matrices (genes x clusters, clusters x phenotypes). Values
/// are immutable once constructed; every kernel returns a fresh matrix.
class NonnegMatrix {
 public:
  /// Throws ShapeError if rows or cols is 0 or the buffer size is wrong, and
  /// DomainError if any entry is negative or not finite.
  NonnegMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static NonnegMatrix zeros(std::size_t rows, std::size_t cols);
  static NonnegMatrix filled(std::size_t rows, std::size_t cols, double value);
  static NonnegMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }

  NonnegMatrix transpose() const;
  double frobenius_sq() const;

  bool operator==(const NonnegMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Binary matrix stored as sorted (row, col) coordinates of its 1-entries,
/// compressed by row.
class SparseBinaryMatrix {
 public:
  using Entry = std::pair<std::size_t, std::size_t>;

  /// Entries may arrive in any order. Throws ShapeError on out-of-range
  /// indices and DomainError on duplicated coordinates.
  SparseBinaryMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

  static SparseBinaryMatrix identity(std::size_t n);
  /// Keeps entries with value != 0; every such value must be exactly 1.
  static SparseBinaryMatrix from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return cols_idx_.size(); }

  /// Column indices of the 1-entries in row r, ascending.
  std::span<const std::size_t> row(std::size_t r) const {
    return std::span<const std::size_t>(cols_idx_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }
  bool contains(std::size_t r, std::size_t c) const;
  std::vector<Entry> entries() const;

  SparseBinaryMatrix transpose() const;
  NonnegMatrix to_dense() const;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  bool operator==(const SparseBinaryMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_idx_;
};

/// Diagonal matrix of nonnegative degrees; stored as its diagonal.
class DegreeDiagonal {
 public:
  explicit DegreeDiagonal(std::vector<double> degrees);

  /// Row sums of m (the parent-side degrees).
  static DegreeDiagonal of_rows(const SparseBinaryMatrix& m);
  /// Column sums of m (the child-side degrees).
  static DegreeDiagonal of_cols(const SparseBinaryMatrix& m);

  std::size_t size() const noexcept { return degrees_.size(); }
  double operator[](std::size_t i) const { return degrees_[i]; }
  std::span<const double> degrees() const noexcept { return degrees_; }

 private:
  std::vector<double> degrees_;
};

NonnegMatrix matmul(const NonnegMatrix& a, const NonnegMatrix& b);

/// a * b with a binary and sparse; same result as matmul(a.to_dense(), b).
NonnegMatrix sparse_matmul(const SparseBinaryMatrix& a, const NonnegMatrix& b);

/// a * diag(d): scales column j of a by d[j].
NonnegMatrix scale_columns(const NonnegMatrix& a, const DegreeDiagonal& d);

/// a + s * b, s >= 0.
NonnegMatrix add_scaled(const NonnegMatrix& a, const NonnegMatrix& b, double s);

/// ||a - b||_F^2 without materializing a densely.
double frobenius_sq_diff(const SparseBinaryMatrix& a, const NonnegMatrix& b);

}  // namespace cmnmf
