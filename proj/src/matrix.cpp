#include "cmnmf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmnmf/errors.hpp"

namespace cmnmf {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

NonnegMatrix::NonnegMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) throw ShapeError("matrix must have at least one row and column");
  if (values_.size() != rows_ * cols_)
    throw ShapeError("buffer of " + std::to_string(values_.size()) + " values for a " +
                     dims(rows_, cols_) + " matrix");
  for (double v : values_) {
    // !(v >= 0) also rejects NaN.
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("matrix entry is negative or not finite");
  }
}

NonnegMatrix NonnegMatrix::zeros(std::size_t rows, std::size_t cols) {
  return filled(rows, cols, 0.0);
}

NonnegMatrix NonnegMatrix::filled(std::size_t rows, std::size_t cols, double value) {
  return NonnegMatrix(rows, cols, std::vector<double>(rows * cols, value));
}

NonnegMatrix NonnegMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ShapeError("matrix must have at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ShapeError("ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return NonnegMatrix(rows.size(), cols, std::move(values));
}

NonnegMatrix NonnegMatrix::transpose() const {
  std::vector<double> out(values_.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[c * rows_ + r] = values_[r * cols_ + c];
  return NonnegMatrix(cols_, rows_, std::move(out));
}

double NonnegMatrix::frobenius_sq() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {
  std::sort(entries.begin(), entries.end());
  if (std::adjacent_find(entries.begin(), entries.end()) != entries.end())
    throw DomainError("duplicate coordinate in sparse binary matrix");
  cols_idx_.reserve(entries.size());
  for (const auto& [r, c] : entries) {
    if (r >= rows_ || c >= cols_)
      throw ShapeError("entry (" + std::to_string(r) + ", " + std::to_string(c) + ") outside " +
                       dims(rows_, cols_));
    ++row_ptr_[r + 1];
    cols_idx_.push_back(c);
  }
  for (std::size_t r = 0; r < rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

SparseBinaryMatrix SparseBinaryMatrix::identity(std::size_t n) {
  std::vector<Entry> e;
  e.reserve(n);
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, i);
  return SparseBinaryMatrix(n, n, std::move(e));
}

SparseBinaryMatrix SparseBinaryMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<Entry> e;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ShapeError("ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c] == 0.0) continue;
      if (rows[r][c] != 1.0) throw DomainError("binary matrix entries must be 0 or 1");
      e.emplace_back(r, c);
    }
  }
  return SparseBinaryMatrix(rows.size(), cols, std::move(e));
}

bool SparseBinaryMatrix::contains(std::size_t r, std::size_t c) const {
  if (r >= rows_) return false;
  auto cs = row(r);
  return std::binary_search(cs.begin(), cs.end(), c);
}

std::vector<SparseBinaryMatrix::Entry> SparseBinaryMatrix::entries() const {
  std::vector<Entry> e;
  e.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c : row(r)) e.emplace_back(r, c);
  return e;
}

SparseBinaryMatrix SparseBinaryMatrix::transpose() const {
  std::vector<Entry> e;
  e.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c : row(r)) e.emplace_back(c, r);
  return SparseBinaryMatrix(cols_, rows_, std::move(e));
}

NonnegMatrix SparseBinaryMatrix::to_dense() const {
  std::vector<double> v(rows_ * cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c : row(r)) v[r * cols_ + c] = 1.0;
  return NonnegMatrix(rows_, cols_, std::move(v));
}

std::vector<double> SparseBinaryMatrix::row_sums() const {
  std::vector<double> s(rows_);
  for (std::size_t r = 0; r < rows_; ++r) s[r] = static_cast<double>(row_ptr_[r + 1] - row_ptr_[r]);
  return s;
}

std::vector<double> SparseBinaryMatrix::col_sums() const {
  std::vector<double> s(cols_, 0.0);
  for (std::size_t c : cols_idx_) s[c] += 1.0;
  return s;
}

DegreeDiagonal::DegreeDiagonal(std::vector<double> degrees) : degrees_(std::move(degrees)) {
  for (double d : degrees_)
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("degree must be finite and >= 0");
}

DegreeDiagonal DegreeDiagonal::of_rows(const SparseBinaryMatrix& m) {
  return DegreeDiagonal(m.row_sums());
}

DegreeDiagonal DegreeDiagonal::of_cols(const SparseBinaryMatrix& m) {
  return DegreeDiagonal(m.col_sums());
}

NonnegMatrix matmul(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul of " + dims(a.rows(), a.cols()) + " by " + dims(b.rows(), b.cols()));
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  std::vector<double> out(n * m, 0.0);
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out.data() + i * m;
    for (std::size_t p = 0; p < inner; ++p) {
      const double x = av[i * inner + p];
      if (x == 0.0) continue;
      const double* brow = bv.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += x * brow[j];
    }
  }
  return NonnegMatrix(n, m, std::move(out));
}

NonnegMatrix sparse_matmul(const SparseBinaryMatrix& a, const NonnegMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("sparse_matmul of " + dims(a.rows(), a.cols()) + " by " + dims(b.rows(), b.cols()));
  const std::size_t m = b.cols();
  std::vector<double> out(a.rows() * m, 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* orow = out.data() + i * m;
    for (std::size_t p : a.row(i)) {
      auto brow = b.row(p);
      for (std::size_t j = 0; j < m; ++j) orow[j] += brow[j];
    }
  }
  return NonnegMatrix(a.rows(), m, std::move(out));
}

NonnegMatrix scale_columns(const NonnegMatrix& a, const DegreeDiagonal& d) {
  if (a.cols() != d.size())
    throw ShapeError("scale_columns of " + dims(a.rows(), a.cols()) + " by diagonal of size " +
                     std::to_string(d.size()));
  std::vector<double> out(a.values().begin(), a.values().end());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[r * a.cols() + c] *= d[c];
  return NonnegMatrix(a.rows(), a.cols(), std::move(out));
}

NonnegMatrix add_scaled(const NonnegMatrix& a, const NonnegMatrix& b, double s) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("add_scaled of " + dims(a.rows(), a.cols()) + " and " + dims(b.rows(), b.cols()));
  std::vector<double> out(a.values().begin(), a.values().end());
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * bv[i];
  return NonnegMatrix(a.rows(), a.cols(), std::move(out));
}

double frobenius_sq_diff(const SparseBinaryMatrix& a, const NonnegMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("frobenius_sq_diff of " + dims(a.rows(), a.cols()) + " and " + dims(b.rows(), b.cols()));
  // Walk each dense row alongside the sorted sparse row so that no
  // cancellation-prone ||b||^2 - 2 sum + nnz expansion is needed.
  double s = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    auto brow = b.row(i);
    auto nz = a.row(i);
    std::size_t p = 0;
    for (std::size_t j = 0; j < brow.size(); ++j) {
      if (p < nz.size() && nz[p] == j) {
        const double d = 1.0 - brow[j];
        s += d * d;
        ++p;
      } else {
        s += brow[j] * brow[j];
      }
    }
  }
  return s;
}

}  // namespace cmnmf
