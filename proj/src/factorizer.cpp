#include "cmnmf/factorizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cmnmf/errors.hpp"

namespace cmnmf {

void HyperParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
  if (k < 1) throw DomainError("k must be >= 1");
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
}

HierarchyMapping::HierarchyMapping(SparseBinaryMatrix mapping)
    : m(std::move(mapping)), d1(DegreeDiagonal::of_rows(m)), d2(DegreeDiagonal::of_cols(m)) {}

namespace {

// The two views and the mapping with their transposes cached for a fit.
struct Problem {
  const SparseBinaryMatrix& a1;
  const SparseBinaryMatrix& a2;
  const HierarchyMapping& map;
  SparseBinaryMatrix a1t;
  SparseBinaryMatrix a2t;
  SparseBinaryMatrix mt;

  Problem(const SparseBinaryMatrix& a1_, const SparseBinaryMatrix& a2_, const HierarchyMapping& map_)
      : a1(a1_), a2(a2_), map(map_), a1t(a1_.transpose()), a2t(a2_.transpose()), mt(map_.m.transpose()) {}
};

void check_shapes(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                  const FactorizationState& s) {
  const auto n = s.g.rows(), k = s.g.cols();
  auto fail = [](const std::string& what) { throw ShapeError("inconsistent shapes: " + what); };
  if (a1.rows() != n || a2.rows() != n) fail("views and G disagree on the gene count");
  if (s.p1.rows() != k || s.p2.rows() != k) fail("P1/P2 rows differ from G columns");
  if (s.p1.cols() != a1.cols()) fail("P1 columns differ from A1 columns");
  if (s.p2.cols() != a2.cols()) fail("P2 columns differ from A2 columns");
  if (map.m.rows() != a1.cols() || map.m.cols() != a2.cols()) fail("mapping is not m1 x m2");
}

// x * num / max(den, floor), elementwise.
NonnegMatrix multiplicative_step(const NonnegMatrix& x, const NonnegMatrix& num, const NonnegMatrix& den,
                                 int iteration, const char* factor) {
  std::vector<double> out(x.size());
  auto xv = x.values(), nv = num.values(), dv = den.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = xv[i] * (nv[i] / std::max(dv[i], kDenominatorFloor));
    if (!std::isfinite(out[i])) throw NumericalError(std::string("non-finite value in ") + factor + " update", iteration);
  }
  return NonnegMatrix(x.rows(), x.cols(), std::move(out));
}

// Matrix products can overflow to Inf, which NonnegMatrix rejects as a
// DomainError; inside an update that is a numerical failure.
template <typename F>
NonnegMatrix guarded(F&& f, int iteration, const char* factor) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw NumericalError(std::string(factor) + " update: " + e.what(), iteration);
  }
}

// G^T A computed as (A^T G)^T with a_t = A^T.
NonnegMatrix gt_times(const NonnegMatrix& g, const SparseBinaryMatrix& a_t) {
  return sparse_matmul(a_t, g).transpose();
}

// wa * a + wb * b
NonnegMatrix weighted_sum(const NonnegMatrix& a, double wa, const NonnegMatrix& b, double wb) {
  std::vector<double> out(a.size());
  auto av = a.values(), bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = wa * av[i] + wb * bv[i];
  return NonnegMatrix(a.rows(), a.cols(), std::move(out));
}

NonnegMatrix step_g(const Problem& pb, const FactorizationState& s, const HyperParams& hp, int iteration) {
  return guarded(
      [&] {
        const auto p1t = s.p1.transpose();
        const auto p2t = s.p2.transpose();
        const auto num = weighted_sum(sparse_matmul(pb.a1, p1t), 1.0, sparse_matmul(pb.a2, p2t), hp.alpha);
        const auto den = weighted_sum(matmul(s.g, matmul(s.p1, p1t)), 1.0, matmul(s.g, matmul(s.p2, p2t)), hp.alpha);
        return multiplicative_step(s.g, num, den, iteration, "G");
      },
      iteration, "G");
}

NonnegMatrix step_p1(const Problem& pb, const FactorizationState& s, const HyperParams& hp, int iteration) {
  return guarded(
      [&] {
        const auto gtg = matmul(s.g.transpose(), s.g);
        // P2 M^T = (M P2^T)^T
        const auto p2mt = sparse_matmul(pb.map.m, s.p2.transpose()).transpose();
        const auto num = weighted_sum(gt_times(s.g, pb.a1t), 1.0, p2mt, hp.beta);
        const auto den = weighted_sum(matmul(gtg, s.p1), 1.0, scale_columns(s.p1, pb.map.d1), hp.beta);
        return multiplicative_step(s.p1, num, den, iteration, "P1");
      },
      iteration, "P1");
}

NonnegMatrix step_p2(const Problem& pb, const FactorizationState& s, const HyperParams& hp, int iteration) {
  return guarded(
      [&] {
        const auto gtg = matmul(s.g.transpose(), s.g);
        // P1 M = (M^T P1^T)^T
        const auto p1m = sparse_matmul(pb.mt, s.p1.transpose()).transpose();
        const auto num = weighted_sum(gt_times(s.g, pb.a2t), hp.alpha, p1m, hp.beta);
        const auto den = weighted_sum(matmul(gtg, s.p2), hp.alpha, scale_columns(s.p2, pb.map.d2), hp.beta);
        return multiplicative_step(s.p2, num, den, iteration, "P2");
      },
      iteration, "P2");
}

double hierarchy_penalty(const HierarchyMapping& map, const NonnegMatrix& p1, const NonnegMatrix& p2) {
  const auto k = p1.rows();
  double s = 0.0;
  for (std::size_t i = 0; i < map.m.rows(); ++i) {
    for (std::size_t j : map.m.row(i)) {
      for (std::size_t c = 0; c < k; ++c) {
        const double d = p1(c, i) - p2(c, j);
        s += d * d;
      }
    }
  }
  return s;
}

double objective_impl(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                      const FactorizationState& s, const HyperParams& hp) {
  double loss = frobenius_sq_diff(a1, matmul(s.g, s.p1));
  if (hp.alpha != 0.0) loss += hp.alpha * frobenius_sq_diff(a2, matmul(s.g, s.p2));
  if (hp.beta != 0.0) loss += hp.beta * hierarchy_penalty(map, s.p1, s.p2);
  return loss;
}

// Draws from (0, 1]: 53 random bits shifted off zero.
class UnitSampler {
 public:
  explicit UnitSampler(std::uint64_t seed) : engine_(seed) {}
  NonnegMatrix matrix(std::size_t rows, std::size_t cols) {
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    return NonnegMatrix(rows, cols, std::move(v));
  }

 private:
  std::mt19937_64 engine_;
};

bool has_converged(double previous, double current, double rel_tol) {
  return std::abs(current - previous) / std::max(previous, 1e-12) < rel_tol;
}

// Column norms of g; returns the normalized G and the per-column scale.
std::pair<NonnegMatrix, std::vector<double>> unit_columns(const NonnegMatrix& g) {
  std::vector<double> norms(g.cols(), 0.0);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t c = 0; c < g.cols(); ++c) norms[c] += g(i, c) * g(i, c);
  for (auto& v : norms) v = std::sqrt(v);
  std::vector<double> out(g.values().begin(), g.values().end());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t c = 0; c < g.cols(); ++c)
      if (norms[c] > 0.0) out[i * g.cols() + c] /= norms[c];
  return {NonnegMatrix(g.rows(), g.cols(), std::move(out)), std::move(norms)};
}

NonnegMatrix scale_rows(const NonnegMatrix& p, const std::vector<double>& scale) {
  std::vector<double> out(p.values().begin(), p.values().end());
  for (std::size_t r = 0; r < p.rows(); ++r)
    for (std::size_t c = 0; c < p.cols(); ++c) out[r * p.cols() + c] *= scale[r];
  return NonnegMatrix(p.rows(), p.cols(), std::move(out));
}

std::vector<std::size_t> zero_indices(const std::vector<double>& norms) {
  std::vector<std::size_t> dead;
  for (std::size_t c = 0; c < norms.size(); ++c)
    if (norms[c] == 0.0) dead.push_back(c);
  return dead;
}

}  // namespace

double objective(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                 const FactorizationState& state, const HyperParams& hp) {
  check_shapes(a1, a2, map, state);
  return objective_impl(a1, a2, map, state, hp);
}

double objective_trace_form(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2,
                            const HierarchyMapping& map, const FactorizationState& state,
                            const HyperParams& hp) {
  check_shapes(a1, a2, map, state);
  const auto& p1 = state.p1;
  const auto& p2 = state.p2;
  const auto k = p1.rows();
  double t1 = 0.0, t2 = 0.0, cross = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < p1.cols(); ++i) t1 += p1(c, i) * map.d1[i] * p1(c, i);
    for (std::size_t j = 0; j < p2.cols(); ++j) t2 += p2(c, j) * map.d2[j] * p2(c, j);
  }
  // tr(P1 M P2^T) = sum_c sum_{M_ij = 1} P1[c, i] P2[c, j]
  const auto p1m = sparse_matmul(map.m.transpose(), p1.transpose());  // (P1 M)^T, m2 x k
  for (std::size_t j = 0; j < p2.cols(); ++j)
    for (std::size_t c = 0; c < k; ++c) cross += p1m(j, c) * p2(c, j);
  double loss = frobenius_sq_diff(a1, matmul(state.g, p1)) + hp.alpha * frobenius_sq_diff(a2, matmul(state.g, p2));
  return loss + hp.beta * (t1 + t2 - 2.0 * cross);
}

NonnegMatrix update_g(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                      const FactorizationState& state, const HyperParams& hp, int iteration) {
  check_shapes(a1, a2, map, state);
  return step_g(Problem(a1, a2, map), state, hp, iteration);
}

NonnegMatrix update_p1(const SparseBinaryMatrix& a1, const HierarchyMapping& map,
                       const FactorizationState& state, const HyperParams& hp, int iteration) {
  if (a1.rows() != state.g.rows() || a1.cols() != state.p1.cols() || map.m.rows() != a1.cols() ||
      map.m.cols() != state.p2.cols() || state.p1.rows() != state.g.cols() || state.p2.rows() != state.g.cols())
    throw ShapeError("inconsistent shapes for the P1 update");
  // The A2 slot is unused by the P1 step.
  const SparseBinaryMatrix no_a2(a1.rows(), state.p2.cols(), {});
  return step_p1(Problem(a1, no_a2, map), state, hp, iteration);
}

NonnegMatrix update_p2(const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                       const FactorizationState& state, const HyperParams& hp, int iteration) {
  if (a2.rows() != state.g.rows() || a2.cols() != state.p2.cols() || map.m.cols() != a2.cols() ||
      map.m.rows() != state.p1.cols() || state.p1.rows() != state.g.cols() || state.p2.rows() != state.g.cols())
    throw ShapeError("inconsistent shapes for the P2 update");
  const SparseBinaryMatrix no_a1(a2.rows(), state.p1.cols(), {});
  return step_p2(Problem(no_a1, a2, map), state, hp, iteration);
}

FactorizationState normalize(FactorizationState state) {
  auto [g, norms] = unit_columns(state.g);
  state.g = std::move(g);
  state.p1 = scale_rows(state.p1, norms);
  state.p2 = scale_rows(state.p2, norms);
  state.dead_clusters = zero_indices(norms);
  return state;
}

NmfState normalize(NmfState state) {
  auto [g, norms] = unit_columns(state.g);
  state.g = std::move(g);
  state.p = scale_rows(state.p, norms);
  state.dead_clusters = zero_indices(norms);
  return state;
}

FactorizationState initial_state(std::size_t n, std::size_t m1, std::size_t m2, const HyperParams& hp) {
  hp.validate();
  const auto k = static_cast<std::size_t>(hp.k);
  UnitSampler rng(hp.seed);
  auto g = rng.matrix(n, k);
  auto p1 = rng.matrix(k, m1);
  auto p2 = rng.matrix(k, m2);
  return FactorizationState::from_factors(std::move(g), std::move(p1), std::move(p2));
}

FactorizationState fit_cmnmf(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2,
                             const HierarchyMapping& map, const HyperParams& hp, const CmnmfObserver& observer) {
  hp.validate();
  const auto k = static_cast<std::size_t>(hp.k);
  if (k > std::min(a1.rows(), a1.cols() + a2.cols()))
    throw DomainError("k = " + std::to_string(k) + " exceeds min(n, m1 + m2)");
  auto state = initial_state(a1.rows(), a1.cols(), a2.cols(), hp);
  check_shapes(a1, a2, map, state);
  const Problem pb(a1, a2, map);

  state.initial_objective = objective_impl(a1, a2, map, state, hp);
  double previous = state.initial_objective;
  for (int it = 1; it <= hp.max_iters; ++it) {
    state.g = step_g(pb, state, hp, it);
    state.p1 = step_p1(pb, state, hp, it);
    state.p2 = step_p2(pb, state, hp, it);
    const double current = objective_impl(a1, a2, map, state, hp);
    if (!std::isfinite(current)) throw NumericalError("non-finite objective", it);
    state.objective_trace.push_back(current);
    state.iterations_run = it;
    if (observer) observer(it, state);
    if (has_converged(previous, current, hp.rel_tol)) {
      state.converged = true;
      break;
    }
    previous = current;
  }
  return normalize(std::move(state));
}

double nmf_objective(const SparseBinaryMatrix& a, const NonnegMatrix& g, const NonnegMatrix& p) {
  return frobenius_sq_diff(a, matmul(g, p));
}

NmfState fit_nmf(const SparseBinaryMatrix& a, const HyperParams& hp, const NmfObserver& observer) {
  hp.validate();
  const auto k = static_cast<std::size_t>(hp.k);
  if (k > std::min(a.rows(), a.cols())) throw DomainError("k = " + std::to_string(k) + " exceeds min(n, m)");
  UnitSampler rng(hp.seed);
  auto g = rng.matrix(a.rows(), k);
  auto p = rng.matrix(k, a.cols());
  NmfState state{std::move(g), std::move(p), 0.0, {}, 0, false, {}};
  const auto at = a.transpose();

  state.initial_objective = nmf_objective(a, state.g, state.p);
  double previous = state.initial_objective;
  for (int it = 1; it <= hp.max_iters; ++it) {
    state.g = guarded(
        [&] {
          const auto pt = state.p.transpose();
          return multiplicative_step(state.g, sparse_matmul(a, pt), matmul(state.g, matmul(state.p, pt)), it, "G");
        },
        it, "G");
    state.p = guarded(
        [&] {
          const auto gtg = matmul(state.g.transpose(), state.g);
          return multiplicative_step(state.p, gt_times(state.g, at), matmul(gtg, state.p), it, "P");
        },
        it, "P");
    const double current = nmf_objective(a, state.g, state.p);
    if (!std::isfinite(current)) throw NumericalError("non-finite objective", it);
    state.objective_trace.push_back(current);
    state.iterations_run = it;
    if (observer) observer(it, state);
    if (has_converged(previous, current, hp.rel_tol)) {
      state.converged = true;
      break;
    }
    previous = current;
  }
  return normalize(std::move(state));
}

}  // namespace cmnmf
