#include <cmath>
#include <optional>
#include <random>

#include "cmnmf/errors.hpp"
#include "cmnmf/factorizer.hpp"
#include "doctest.h"

using namespace cmnmf;

namespace {

NonnegMatrix random_dense(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(r * c);
  for (auto& x : v) x = u(rng);
  return NonnegMatrix(r, c, std::move(v));
}

SparseBinaryMatrix random_binary(std::size_t r, std::size_t c, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution bit(density);
  std::vector<SparseBinaryMatrix::Entry> e;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (bit(rng)) e.emplace_back(i, j);
  return SparseBinaryMatrix(r, c, std::move(e));
}

void check_close(const NonnegMatrix& a, const NonnegMatrix& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.values()[i] - b.values()[i]) <= tol);
}

// Penalty through the expanded traces, written directly from the sums.
double trace_penalty(const SparseBinaryMatrix& m, const NonnegMatrix& p1, const NonnegMatrix& p2) {
  const auto d1 = m.row_sums(), d2 = m.col_sums();
  double t1 = 0.0, t2 = 0.0, cross = 0.0;
  for (std::size_t c = 0; c < p1.rows(); ++c) {
    for (std::size_t i = 0; i < p1.cols(); ++i) t1 += d1[i] * p1(c, i) * p1(c, i);
    for (std::size_t j = 0; j < p2.cols(); ++j) t2 += d2[j] * p2(c, j) * p2(c, j);
    for (const auto& [i, j] : m.entries()) cross += p1(c, i) * p2(c, j);
  }
  return t1 + t2 - 2 * cross;
}

double dense_residual(const SparseBinaryMatrix& a, const NonnegMatrix& g, const NonnegMatrix& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double gp = 0.0;
      for (std::size_t c = 0; c < g.cols(); ++c) gp += g(i, c) * p(c, j);
      const double d = (a.contains(i, j) ? 1.0 : 0.0) - gp;
      s += d * d;
    }
  return s;
}

HyperParams params(int k, double alpha = 1.0, double beta = 1.0, std::uint64_t seed = 0) {
  HyperParams hp;
  hp.k = k;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.seed = seed;
  return hp;
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  CHECK_THROWS_AS(params(0).validate(), DomainError);
  CHECK_THROWS_AS(params(2, -1).validate(), DomainError);
  CHECK_THROWS_AS(params(2, 1, std::nan("")).validate(), DomainError);
  auto hp = params(2);
  hp.max_iters = 0;
  CHECK_THROWS_AS(hp.validate(), DomainError);
  hp = params(2);
  hp.rel_tol = 0;
  CHECK_THROWS_AS(hp.validate(), DomainError);
  CHECK_NOTHROW(params(2, 0, 0).validate());
}

TEST_CASE("hierarchy mapping degrees") {
  const HierarchyMapping map(SparseBinaryMatrix(2, 3, {{0, 0}, {0, 1}, {1, 1}}));
  CHECK(map.d1[0] == 2);
  CHECK(map.d1[1] == 1);
  CHECK(map.d2[1] == 2);
  CHECK(map.d2[2] == 0);
}

TEST_CASE("objective special values") {
  const auto a = SparseBinaryMatrix::from_dense({{1, 0}, {1, 0}});
  const HierarchyMapping map(SparseBinaryMatrix::from_dense({{1, 0}, {0, 1}}));
  const auto g = NonnegMatrix::from_rows({{1}, {1}});
  const auto exact = FactorizationState::from_factors(g, NonnegMatrix::from_rows({{1, 0}}),
                                                      NonnegMatrix::from_rows({{1, 0}}));
  CHECK(objective(a, a, map, exact, params(1, 1, 0)) == 0.0);

  const SparseBinaryMatrix zero(2, 2, {});
  const auto zeros =
      FactorizationState::from_factors(NonnegMatrix::zeros(2, 1), NonnegMatrix::zeros(1, 2), NonnegMatrix::zeros(1, 2));
  CHECK(objective(zero, zero, map, zeros, params(1, 3, 7)) == 0.0);

  // All-ones P1 against all-zero P2 costs k per mapped pair.
  const auto spread = FactorizationState::from_factors(NonnegMatrix::zeros(2, 3), NonnegMatrix::filled(3, 2, 1.0),
                                                       NonnegMatrix::zeros(3, 2));
  CHECK(objective(zero, zero, map, spread, params(3, 1, 1)) == doctest::Approx(6.0));

  const auto bad = FactorizationState::from_factors(g, NonnegMatrix::from_rows({{1, 0, 0}}), NonnegMatrix::from_rows({{1, 0}}));
  CHECK_THROWS_AS(objective(a, a, map, bad, params(1)), ShapeError);
}

TEST_CASE("direct and trace forms agree with independent sums") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 25; ++t) {
    const auto a1 = random_binary(6, 4, 0.4, rng);
    const auto a2 = random_binary(6, 5, 0.4, rng);
    const HierarchyMapping map(random_binary(4, 5, 0.4, rng));
    const auto s = FactorizationState::from_factors(random_dense(6, 3, rng), random_dense(3, 4, rng),
                                                    random_dense(3, 5, rng));
    const auto hp = params(3, 0.7, 2.5);
    const double want = dense_residual(a1, s.g, s.p1) + hp.alpha * dense_residual(a2, s.g, s.p2) +
                        hp.beta * trace_penalty(map.m, s.p1, s.p2);
    CHECK(objective(a1, a2, map, s, hp) == doctest::Approx(want).epsilon(1e-9));
    CHECK(objective_trace_form(a1, a2, map, s, hp) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("G update by hand") {
  const auto a1 = SparseBinaryMatrix::from_dense({{1}, {0}});
  const auto a2 = SparseBinaryMatrix::from_dense({{1}, {1}});
  const HierarchyMapping map(SparseBinaryMatrix::identity(1));
  const auto s = FactorizationState::from_factors(NonnegMatrix::from_rows({{1}, {2}}), NonnegMatrix::from_rows({{2}}),
                                                  NonnegMatrix::from_rows({{1}}));
  // num = [2 + 1, 0 + 1], den = G * (4 + 1)
  check_close(update_g(a1, a2, map, s, params(1)), NonnegMatrix::from_rows({{0.6}, {0.2}}), 1e-12);
}

TEST_CASE("G update fixed point and zero locking") {
  const auto a = SparseBinaryMatrix::from_dense({{1, 0}, {1, 0}});
  const HierarchyMapping map(SparseBinaryMatrix::identity(2));
  const auto g = NonnegMatrix::from_rows({{1}, {1}});
  const auto s = FactorizationState::from_factors(g, NonnegMatrix::from_rows({{1, 0}}), NonnegMatrix::from_rows({{1, 0}}));
  check_close(update_g(a, a, map, s, params(1, 1, 5)), g, 1e-12);

  std::mt19937_64 rng(22);
  const auto a1 = random_binary(5, 4, 0.5, rng);
  const auto a2 = random_binary(5, 3, 0.5, rng);
  const HierarchyMapping m2(random_binary(4, 3, 0.5, rng));
  const auto g0 = NonnegMatrix::from_rows({{0, 1}, {1, 0}, {0.5, 0.5}, {1, 1}, {0, 0.2}});
  const auto z = FactorizationState::from_factors(g0, random_dense(2, 4, rng), random_dense(2, 3, rng));
  const auto g1 = update_g(a1, a2, m2, z, params(2));
  for (std::size_t i = 0; i < g0.size(); ++i)
    if (g0.values()[i] == 0.0) CHECK(g1.values()[i] == 0.0);
}

TEST_CASE("P1 update by hand and fixed point") {
  const auto a1 = SparseBinaryMatrix::from_dense({{1}, {0}});
  const HierarchyMapping map(SparseBinaryMatrix::from_dense({{1, 1}}));
  const auto s = FactorizationState::from_factors(NonnegMatrix::from_rows({{1}, {1}}), NonnegMatrix::from_rows({{2}}),
                                                  NonnegMatrix::from_rows({{1, 3}}));
  // num = 1 + 0.5 * (1 + 3), den = 2 * 2 + 0.5 * 2 * 2
  check_close(update_p1(a1, map, s, params(1, 2, 0.5)), NonnegMatrix::from_rows({{1.0}}), 1e-12);

  const auto exact = SparseBinaryMatrix::from_dense({{1, 0}, {1, 0}});
  const auto fixed = FactorizationState::from_factors(NonnegMatrix::from_rows({{0.5}, {0.5}}),
                                                      NonnegMatrix::from_rows({{2, 0}}), NonnegMatrix::from_rows({{1}}));
  const HierarchyMapping m2(SparseBinaryMatrix(2, 1, {{1, 0}}));
  const auto p1 = update_p1(exact, m2, fixed, params(1, 1, 0));
  check_close(p1, fixed.p1, 1e-12);
  CHECK(p1(0, 1) == 0.0);
}

TEST_CASE("P2 update by hand") {
  const auto a2 = SparseBinaryMatrix::from_dense({{1, 0}, {1, 1}});
  const HierarchyMapping map(SparseBinaryMatrix::from_dense({{1, 1}}));
  const auto s = FactorizationState::from_factors(NonnegMatrix::from_rows({{1}, {1}}), NonnegMatrix::from_rows({{2}}),
                                                  NonnegMatrix::from_rows({{1, 3}}));
  // num = 2 * [2, 1] + 0.5 * [2, 2], den = 2 * 2 * [1, 3] + 0.5 * [1, 3]
  check_close(update_p2(a2, map, s, params(1, 2, 0.5)), NonnegMatrix::from_rows({{10.0 / 9.0, 2.0 / 3.0}}), 1e-12);
}

TEST_CASE("normalize rescales columns and rows") {
  const auto s = FactorizationState::from_factors(NonnegMatrix::from_rows({{3}, {4}}), NonnegMatrix::from_rows({{1}}),
                                                  NonnegMatrix::from_rows({{2}}));
  const auto n = normalize(s);
  check_close(n.g, NonnegMatrix::from_rows({{0.6}, {0.8}}), 1e-12);
  check_close(n.p1, NonnegMatrix::from_rows({{5}}), 1e-12);
  check_close(n.p2, NonnegMatrix::from_rows({{10}}), 1e-12);
  CHECK(n.dead_clusters.empty());

  const auto again = normalize(n);
  check_close(again.g, n.g, 1e-12);
  check_close(again.p1, n.p1, 1e-12);

  std::mt19937_64 rng(23);
  const auto r = FactorizationState::from_factors(random_dense(7, 3, rng), random_dense(3, 4, rng),
                                                  random_dense(3, 5, rng));
  const auto rn = normalize(r);
  check_close(matmul(rn.g, rn.p1), matmul(r.g, r.p1), 1e-12);
  check_close(matmul(rn.g, rn.p2), matmul(r.g, r.p2), 1e-12);
}

TEST_CASE("normalize flags dead clusters") {
  const auto s = FactorizationState::from_factors(NonnegMatrix::from_rows({{0, 1}, {0, 1}}),
                                                  NonnegMatrix::from_rows({{4, 4}, {1, 2}}),
                                                  NonnegMatrix::from_rows({{3}, {1}}));
  const auto n = normalize(s);
  CHECK(n.dead_clusters == std::vector<std::size_t>{0});
  CHECK(n.p1(0, 0) == 0.0);
  CHECK(n.p2(0, 0) == 0.0);
  CHECK(n.g(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("initial state is seeded and positive") {
  const auto a = initial_state(4, 3, 2, params(2, 1, 1, 9));
  const auto b = initial_state(4, 3, 2, params(2, 1, 1, 9));
  const auto c = initial_state(4, 3, 2, params(2, 1, 1, 10));
  CHECK(a.g == b.g);
  CHECK(a.p2 == b.p2);
  CHECK_FALSE(a.g == c.g);
  for (double v : a.p1.values()) CHECK((v > 0.0 && v <= 1.0));
}

TEST_CASE("fit is deterministic and descends") {
  std::mt19937_64 rng(24);
  const auto a1 = random_binary(15, 8, 0.3, rng);
  const auto a2 = random_binary(15, 10, 0.3, rng);
  const HierarchyMapping map(random_binary(8, 10, 0.2, rng));
  const auto hp = params(3, 2.0, 5.0, 4);
  int calls = 0;
  std::optional<FactorizationState> last;
  const auto x = fit_cmnmf(a1, a2, map, hp, [&](int it, const FactorizationState& s) {
    CHECK(it == ++calls);
    last = s;
  });
  const auto y = fit_cmnmf(a1, a2, map, hp);
  CHECK(x.g == y.g);
  CHECK(x.p1 == y.p1);
  CHECK(x.p2 == y.p2);
  CHECK(calls == x.iterations_run);
  CHECK(x.objective_trace.size() == static_cast<std::size_t>(x.iterations_run));
  double prev = x.initial_objective;
  for (double l : x.objective_trace) {
    CHECK(l <= prev * (1 + 1e-9));
    prev = l;
  }
  CHECK(objective(a1, a2, map, *last, hp) == x.objective_trace.back());
  // Normalization keeps both reconstructions; the penalty rescales with the column norms.
  auto no_penalty = hp;
  no_penalty.beta = 0.0;
  CHECK(objective(a1, a2, map, x, no_penalty) == doctest::Approx(objective(a1, a2, map, *last, no_penalty)).epsilon(1e-12));
}

TEST_CASE("duplicated views with beta = 0 behave like collective NMF") {
  std::mt19937_64 rng(25);
  const auto a = random_binary(12, 6, 0.4, rng);
  const HierarchyMapping map(random_binary(6, 6, 0.3, rng));
  const auto st = fit_cmnmf(a, a, map, params(2, 1, 0, 1));
  double prev = st.initial_objective;
  for (double l : st.objective_trace) {
    CHECK(l <= prev * (1 + 1e-12));
    prev = l;
  }
}

TEST_CASE("planted exact factorization is recovered") {
  // Three disjoint blocks: A = G* P* with G*, P* binary.
  std::vector<SparseBinaryMatrix::Entry> e;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 9; ++j)
      if (i / 4 == j / 3) e.emplace_back(i, j);
  const SparseBinaryMatrix a(12, 9, e);
  const HierarchyMapping map(SparseBinaryMatrix::identity(9));
  auto hp = params(3, 1, 0, 2);
  hp.max_iters = 20000;
  hp.rel_tol = 1e-14;
  const auto st = fit_cmnmf(a, a, map, hp);
  CHECK(st.objective_trace.back() < 1e-6 * st.initial_objective);
}

TEST_CASE("fit argument checks") {
  const auto a1 = SparseBinaryMatrix::from_dense({{1, 0}, {0, 1}});
  const auto a2 = SparseBinaryMatrix::from_dense({{1}, {0}});
  const HierarchyMapping map(SparseBinaryMatrix::from_dense({{1}, {0}}));
  CHECK_THROWS_AS(fit_cmnmf(a1, a2, map, params(4)), DomainError);
  CHECK_THROWS_AS(fit_cmnmf(a1, a2, map, params(0)), DomainError);
  const HierarchyMapping wrong(SparseBinaryMatrix::identity(3));
  CHECK_THROWS_AS(fit_cmnmf(a1, a2, wrong, params(1)), ShapeError);
  CHECK_THROWS_AS(fit_nmf(a1, params(3)), DomainError);
}

TEST_CASE("overflow surfaces as a numerical error") {
  const auto a = SparseBinaryMatrix::from_dense({{1, 1}, {1, 1}});
  const HierarchyMapping map(SparseBinaryMatrix::identity(2));
  try {
    fit_cmnmf(a, a, map, params(1, 1e308, 1e308));
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.iteration() >= 0);
  }
}

TEST_CASE("plain NMF") {
  const auto ones = SparseBinaryMatrix::from_dense({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  auto hp = params(1);
  hp.rel_tol = 1e-12;
  const auto st = fit_nmf(ones, hp);
  CHECK(nmf_objective(ones, st.g, st.p) < 1e-6);

  const SparseBinaryMatrix zero(3, 2, {});
  const auto z = fit_nmf(zero, params(1));
  REQUIRE_FALSE(z.objective_trace.empty());
  CHECK(z.objective_trace.front() == 0.0);
  CHECK(z.dead_clusters == std::vector<std::size_t>{0});

  std::mt19937_64 rng(26);
  const auto a = random_binary(10, 8, 0.4, rng);
  const auto r = fit_nmf(a, params(3, 1, 1, 5));
  double prev = r.initial_objective;
  for (double l : r.objective_trace) {
    CHECK(l <= prev * (1 + 1e-12));
    prev = l;
  }
  const auto again = fit_nmf(a, params(3, 1, 1, 5));
  CHECK(again.g == r.g);
  CHECK(again.p == r.p);
}

TEST_CASE("diagonal rescaling leaves the beta = 0 objective unchanged") {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int t = 0; t < 20; ++t) {
    const auto a1 = random_binary(7, 4, 0.4, rng);
    const auto a2 = random_binary(7, 5, 0.4, rng);
    const HierarchyMapping map(random_binary(4, 5, 0.4, rng));
    const auto s = FactorizationState::from_factors(random_dense(7, 3, rng), random_dense(3, 4, rng),
                                                    random_dense(3, 5, rng));
    std::vector<double> d(3);
    for (auto& x : d) x = scale(rng);
    std::vector<double> g(s.g.values().begin(), s.g.values().end());
    std::vector<double> p1(s.p1.values().begin(), s.p1.values().end());
    std::vector<double> p2(s.p2.values().begin(), s.p2.values().end());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= d[i % 3];
    for (std::size_t i = 0; i < p1.size(); ++i) p1[i] /= d[i / 4];
    for (std::size_t i = 0; i < p2.size(); ++i) p2[i] /= d[i / 5];
    const auto r = FactorizationState::from_factors(NonnegMatrix(7, 3, g), NonnegMatrix(3, 4, p1), NonnegMatrix(3, 5, p2));
    const auto hp = params(3, 1.5, 0.0);
    CHECK(objective(a1, a2, map, r, hp) == doctest::Approx(objective(a1, a2, map, s, hp)).epsilon(1e-9));
  }
}

TEST_CASE("factors stay nonnegative through a fit") {
  std::mt19937_64 rng(28);
  const auto a1 = random_binary(20, 10, 0.2, rng);
  const auto a2 = random_binary(20, 12, 0.2, rng);
  const HierarchyMapping map(random_binary(10, 12, 0.1, rng));
  bool ok = true;
  fit_cmnmf(a1, a2, map, params(4, 10, 100, 3), [&](int, const FactorizationState& s) {
    for (const auto* m : {&s.g, &s.p1, &s.p2})
      for (double v : m->values()) ok = ok && v >= 0.0;
  });
  CHECK(ok);
}
