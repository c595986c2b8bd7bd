#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmnmf/clusters.hpp"
#include "cmnmf/factorizer.hpp"
#include "cmnmf/metrics.hpp"

namespace cmnmf {

/// Default axis: 10^-3 .. 10^3 by decades.
std::vector<double> default_grid_axis();

struct GridSpec {
  std::vector<double> alphas = default_grid_axis();
  std::vector<double> betas = default_grid_axis();
  int repeats = 10;
  HyperParams base;  // k, iteration budget, tolerance, seed base
  Metric metric = Metric::kF1;
  double z_threshold = kDefaultZThreshold;

  void validate() const;
};

struct RepeatRecord {
  std::uint64_t seed = 0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;  // nonempty when this repeat failed numerically
};

struct CellResult {
  double alpha = 0.0;
  double beta = 0.0;
  bool failed = false;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over repeats
  std::vector<RepeatRecord> repeats;
};

struct GridResult {
  std::vector<CellResult> cells;  // ascending (alpha, beta)
  std::optional<std::size_t> best;  // index into cells; empty if every cell failed

  const CellResult& best_cell() const;
};

/// Fits every (alpha, beta) cell `repeats` times with seeds base.seed + r,
/// extracts clusters from G and scores them against `truth`, whose universe
/// must list the genes in A1/A2 row order. A numerical failure marks its cell
/// failed; other errors propagate. Results do not depend on `jobs`.
GridResult run_grid(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                    const GroundTruthPairs& truth, const GridSpec& spec, unsigned jobs = 1);

/// Scores one fit: extract clusters from G and evaluate against truth.
PairIndices evaluate_factors(const NonnegMatrix& g, const GroundTruthPairs& truth, double z_threshold);

/// Index of the maximal mean among non-failed cells, earliest on ties.
std::optional<std::size_t> select_best(const std::vector<CellResult>& cells);

/// CSV `alpha,beta,mean,std,failed`, one row per cell in (alpha, beta)
/// order; failed cells have empty mean and std. Throws std::runtime_error on
/// I/O failure.
void emit_heatmap(const GridResult& result, const std::filesystem::path& path);

struct HeatmapRow {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> mean;
  std::optional<double> std;
  bool failed = false;
};

std::vector<HeatmapRow> read_heatmap(const std::filesystem::path& path);

}  // namespace cmnmf
