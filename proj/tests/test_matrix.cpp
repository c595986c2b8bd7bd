#include <cmath>
#include <limits>
#include <random>

#include "cmnmf/errors.hpp"
#include "cmnmf/format.hpp"
#include "cmnmf/matrix.hpp"
#include "doctest.h"

using namespace cmnmf;

namespace {

NonnegMatrix random_dense(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> v(r * c);
  for (auto& x : v) x = u(rng);
  return NonnegMatrix(r, c, std::move(v));
}

std::vector<std::vector<int>> random_bits(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::vector<std::vector<int>> out(r, std::vector<int>(c));
  for (auto& row : out)
    for (auto& b : row) b = static_cast<int>(rng() % 2);
  return out;
}

SparseBinaryMatrix sparse_of(const std::vector<std::vector<int>>& bits) {
  std::vector<SparseBinaryMatrix::Entry> e;
  for (std::size_t i = 0; i < bits.size(); ++i)
    for (std::size_t j = 0; j < bits[i].size(); ++j)
      if (bits[i][j]) e.emplace_back(i, j);
  return SparseBinaryMatrix(bits.size(), bits.empty() ? 0 : bits[0].size(), std::move(e));
}

}  // namespace

TEST_CASE("nonneg matrix rejects bad shapes and values") {
  CHECK_THROWS_AS(NonnegMatrix(0, 2, {}), ShapeError);
  CHECK_THROWS_AS(NonnegMatrix(2, 2, {1, 2, 3}), ShapeError);
  CHECK_THROWS_AS(NonnegMatrix(1, 2, {1, -0.5}), DomainError);
  CHECK_THROWS_AS(NonnegMatrix(1, 1, {std::numeric_limits<double>::infinity()}), DomainError);
  CHECK_THROWS_AS(NonnegMatrix(1, 1, {std::nan("")}), DomainError);
  CHECK_NOTHROW(NonnegMatrix(1, 2, {0.0, 4.0}));
}

TEST_CASE("matmul hand cases") {
  const auto id = NonnegMatrix::from_rows({{1, 0}, {0, 1}});
  const auto b = NonnegMatrix::from_rows({{2, 3}, {4, 5}});
  CHECK(matmul(id, b) == b);
  CHECK(matmul(NonnegMatrix::from_rows({{1, 2}}), NonnegMatrix::from_rows({{3}, {4}})) ==
        NonnegMatrix::from_rows({{11}}));
  CHECK(matmul(NonnegMatrix::zeros(2, 2), NonnegMatrix::from_rows({{1, 2, 3}, {4, 5, 6}})) ==
        NonnegMatrix::zeros(2, 3));
  CHECK_THROWS_AS(matmul(id, NonnegMatrix::zeros(3, 1)), ShapeError);
}

TEST_CASE("sparse binary matrix construction") {
  const SparseBinaryMatrix m(2, 3, {{1, 2}, {0, 1}, {1, 0}});
  CHECK(m.nnz() == 3);
  CHECK(m.contains(0, 1));
  CHECK_FALSE(m.contains(0, 0));
  CHECK(m.entries() == std::vector<SparseBinaryMatrix::Entry>{{0, 1}, {1, 0}, {1, 2}});
  CHECK(m.row_sums() == std::vector<double>{1, 2});
  CHECK(m.col_sums() == std::vector<double>{1, 1, 1});
  CHECK(m.transpose().entries() == std::vector<SparseBinaryMatrix::Entry>{{0, 1}, {1, 0}, {2, 1}});
  CHECK_THROWS_AS(SparseBinaryMatrix(2, 2, {{0, 0}, {0, 0}}), DomainError);
  CHECK_THROWS_AS(SparseBinaryMatrix(2, 2, {{2, 0}}), ShapeError);
  CHECK_THROWS_AS(SparseBinaryMatrix::from_dense({{0, 2}}), DomainError);
  CHECK(SparseBinaryMatrix::from_dense({{0, 1}, {1, 0}}).entries() ==
        std::vector<SparseBinaryMatrix::Entry>{{0, 1}, {1, 0}});
}

TEST_CASE("sparse matmul against densify-and-multiply") {
  std::mt19937_64 rng(11);
  const auto b = random_dense(3, 2, rng);
  CHECK(sparse_matmul(SparseBinaryMatrix::identity(3), b) == b);
  CHECK(sparse_matmul(SparseBinaryMatrix(4, 3, {}), b) == NonnegMatrix::zeros(4, 2));

  for (int t = 0; t < 20; ++t) {
    const auto bits = random_bits(5, 4, rng);
    const auto x = random_dense(4, 3, rng);
    const auto got = sparse_matmul(sparse_of(bits), x);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        double want = 0.0;
        for (std::size_t l = 0; l < 4; ++l) want += bits[i][l] * x(l, j);
        CHECK(got(i, j) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("frobenius_sq_diff") {
  const auto a = SparseBinaryMatrix::from_dense({{1, 0}, {0, 1}});
  CHECK(frobenius_sq_diff(a, NonnegMatrix::from_rows({{1, 0}, {0, 1}})) == 0.0);
  CHECK(frobenius_sq_diff(SparseBinaryMatrix::from_dense({{1, 0}}), NonnegMatrix::zeros(1, 2)) == 1.0);

  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto bits = random_bits(4, 4, rng);
    const auto b = random_dense(4, 4, rng);
    double want = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) want += (bits[i][j] - b(i, j)) * (bits[i][j] - b(i, j));
    CHECK(std::abs(frobenius_sq_diff(sparse_of(bits), b) - want) <= 1e-10);
  }
  CHECK_THROWS_AS(frobenius_sq_diff(a, NonnegMatrix::zeros(2, 3)), ShapeError);
}

TEST_CASE("degree diagonals and column scaling") {
  const SparseBinaryMatrix m(2, 3, {{0, 0}, {0, 2}, {1, 2}});
  const auto d1 = DegreeDiagonal::of_rows(m);
  const auto d2 = DegreeDiagonal::of_cols(m);
  CHECK(d1.size() == 2);
  CHECK(d1[0] == 2);
  CHECK(d2[2] == 2);
  CHECK(d2[1] == 0);
  const auto p = NonnegMatrix::from_rows({{1, 1, 1}, {2, 3, 4}});
  CHECK(scale_columns(p, d2) == NonnegMatrix::from_rows({{1, 0, 2}, {2, 0, 8}}));
  CHECK(add_scaled(p, p, 2.0) == NonnegMatrix::from_rows({{3, 3, 3}, {6, 9, 12}}));
}

TEST_CASE("transpose and frobenius norm") {
  const auto a = NonnegMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(a.transpose().transpose() == a);
  CHECK(a.transpose()(2, 1) == 6);
  CHECK(a.frobenius_sq() == 91);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 1.0, 0.1, 1e-300, 123456.789, 1.0 / 3.0}) CHECK(parse_double(format_double(v)) == v);
  CHECK(format_double(0.001) == "0.001");
  CHECK(parse_double("+2.5") == 2.5);
  CHECK_THROWS_AS(parse_double("2.5x"), ParseError);
  CHECK_THROWS_AS(parse_double(""), ParseError);
}
