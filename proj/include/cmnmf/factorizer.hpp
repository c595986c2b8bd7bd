#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cmnmf/matrix.hpp"

namespace cmnmf {

/// Denominator floor applied in every multiplicative update.
inline constexpr double kDenominatorFloor = 1e-12;

struct HyperParams {
  double alpha = 1.0;  // weight of the child-level reconstruction
  double beta = 1.0;   // weight of the parent/child consistency penalty
  int k = 0;           // number of latent clusters; must be set
  int max_iters = 500;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

/// Parent/child is-a mapping with its row-degree (d1) and column-degree (d2)
/// diagonals.
struct HierarchyMapping {
  SparseBinaryMatrix m;
  DegreeDiagonal d1;
  DegreeDiagonal d2;

  explicit HierarchyMapping(SparseBinaryMatrix mapping);
};

/// G (n x k), P1 (k x m1), P2 (k x m2) plus run bookkeeping.
struct FactorizationState {
  NonnegMatrix g;
  NonnegMatrix p1;
  NonnegMatrix p2;
  double initial_objective = 0.0;
  std::vector<double> objective_trace;  // one entry per completed iteration
  int iterations_run = 0;
  bool converged = false;
  std::vector<std::size_t> dead_clusters;  // zero G columns found by normalize

  static FactorizationState from_factors(NonnegMatrix g, NonnegMatrix p1, NonnegMatrix p2) {
    FactorizationState s{std::move(g), std::move(p1), std::move(p2), 0.0, {}, 0, false, {}};
    return s;
  }
};

/// Single-view factorization A ~ G P.
struct NmfState {
  NonnegMatrix g;
  NonnegMatrix p;
  double initial_objective = 0.0;
  std::vector<double> objective_trace;
  int iterations_run = 0;
  bool converged = false;
  std::vector<std::size_t> dead_clusters;
};

/// ||A1 - G P1||^2 + alpha ||A2 - G P2||^2
///   + beta * sum_{M_ij = 1} ||P1[:, i] - P2[:, j]||^2
double objective(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                 const FactorizationState& state, const HyperParams& hp);

/// Same loss with the penalty expanded through the degree diagonals:
/// beta * (tr(P1 D1 P1^T) + tr(P2 D2 P2^T) - 2 tr(P1 M P2^T)).
double objective_trace_form(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2,
                            const HierarchyMapping& map, const FactorizationState& state,
                            const HyperParams& hp);

// One multiplicative step for one factor with the other two held fixed.
// `iteration` only labels a NumericalError should one occur.
NonnegMatrix update_g(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                      const FactorizationState& state, const HyperParams& hp, int iteration = 0);
NonnegMatrix update_p1(const SparseBinaryMatrix& a1, const HierarchyMapping& map,
                       const FactorizationState& state, const HyperParams& hp, int iteration = 0);
NonnegMatrix update_p2(const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                       const FactorizationState& state, const HyperParams& hp, int iteration = 0);

/// Rescales every G column to unit Euclidean norm and the matching P rows by
/// the old norm, leaving G P1 and G P2 unchanged. Zero columns stay zero, their
/// P rows are zeroed and the index is listed in dead_clusters.
FactorizationState normalize(FactorizationState state);
NmfState normalize(NmfState state);

/// Called after every completed iteration with the unnormalized state.
using CmnmfObserver = std::function<void(int iteration, const FactorizationState&)>;
using NmfObserver = std::function<void(int iteration, const NmfState&)>;

/// Seeded random start: G, then P1, then P2, entries uniform on (0, 1].
FactorizationState initial_state(std::size_t n, std::size_t m1, std::size_t m2, const HyperParams& hp);

/// Alternating G, P1, P2 updates until the relative objective change drops
/// below hp.rel_tol or hp.max_iters is reached, then normalize. beta = 0 gives
/// collective NMF over the two views.
FactorizationState fit_cmnmf(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2,
                             const HierarchyMapping& map, const HyperParams& hp,
                             const CmnmfObserver& observer = {});

/// Lee-Seung multiplicative updates for ||A - G P||^2. Uses the same random
/// stream as fit_cmnmf, so G and P start equal to its G and P1.
NmfState fit_nmf(const SparseBinaryMatrix& a, const HyperParams& hp, const NmfObserver& observer = {});

double nmf_objective(const SparseBinaryMatrix& a, const NonnegMatrix& g, const NonnegMatrix& p);

}  // namespace cmnmf
