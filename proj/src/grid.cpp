#include "cmnmf/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cmnmf/errors.hpp"
#include "cmnmf/format.hpp"

namespace cmnmf {

std::vector<double> default_grid_axis() { return {0.001, 0.01, 0.1, 1, 10, 100, 1000}; }

void GridSpec::validate() const {
  if (alphas.empty() || betas.empty()) throw DomainError("grid axes must be nonempty");
  for (double v : alphas)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("grid alpha must be finite and >= 0");
  for (double v : betas)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("grid beta must be finite and >= 0");
  if (repeats < 1) throw DomainError("repeats must be >= 1");
  base.validate();
}

const CellResult& GridResult::best_cell() const {
  if (!best) throw DomainError("every grid cell failed");
  return cells[*best];
}

PairIndices evaluate_factors(const NonnegMatrix& g, const GroundTruthPairs& truth, double z_threshold) {
  const auto assign = extract_clusters(g, truth.universe(), z_threshold);
  return indices(confusion(assign, truth));
}

std::optional<std::size_t> select_best(const std::vector<CellResult>& cells) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].failed) continue;
    if (!best || cells[i].mean > cells[*best].mean) best = i;
  }
  return best;
}

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

GridResult run_grid(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                    const GroundTruthPairs& truth, const GridSpec& spec, unsigned jobs) {
  spec.validate();
  if (truth.universe().size() != a1.rows())
    throw ShapeError("truth universe has " + std::to_string(truth.universe().size()) + " genes, views have " +
                     std::to_string(a1.rows()));

  GridResult result;
  for (double a : sorted_unique(spec.alphas))
    for (double b : sorted_unique(spec.betas)) result.cells.push_back(CellResult{a, b, false, 0.0, 0.0, {}});

  const auto repeats = static_cast<std::size_t>(spec.repeats);
  for (auto& cell : result.cells) cell.repeats.resize(repeats);

  // Tasks are (cell, repeat) pairs; every task writes only its own slot, so
  // the reduction below sees the same data whatever the schedule.
  const std::size_t tasks = result.cells.size() * repeats;
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      auto& cell = result.cells[t / repeats];
      auto& rec = cell.repeats[t % repeats];
      HyperParams hp = spec.base;
      hp.alpha = cell.alpha;
      hp.beta = cell.beta;
      hp.seed = spec.base.seed + t % repeats;
      rec.seed = hp.seed;
      try {
        const auto state = fit_cmnmf(a1, a2, map, hp);
        rec.iterations = state.iterations_run;
        rec.converged = state.converged;
        rec.value = metric_value(evaluate_factors(state.g, truth, spec.z_threshold), spec.metric);
      } catch (const NumericalError& e) {
        rec.error = e.what();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = tasks;
      }
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  for (auto& cell : result.cells) {
    double sum = 0.0;
    for (const auto& r : cell.repeats) {
      if (!r.error.empty()) cell.failed = true;
      sum += r.value;
    }
    if (cell.failed) continue;
    cell.mean = sum / static_cast<double>(repeats);
    double var = 0.0;
    for (const auto& r : cell.repeats) var += (r.value - cell.mean) * (r.value - cell.mean);
    cell.std = std::sqrt(var / static_cast<double>(repeats));
  }
  result.best = select_best(result.cells);
  return result;
}

void emit_heatmap(const GridResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "alpha,beta,mean,std,failed\n";
  for (const auto& c : result.cells) {
    out << format_double(c.alpha) << ',' << format_double(c.beta) << ',';
    if (c.failed)
      out << ",,1\n";
    else
      out << format_double(c.mean) << ',' << format_double(c.std) << ",0\n";
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::vector<HeatmapRow> read_heatmap(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "alpha,beta,mean,std,failed")
    throw ParseError(path.string() + ": unexpected heat-map header");
  std::vector<HeatmapRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 5) throw ParseError(path.string() + ": malformed heat-map row '" + line + "'");
    HeatmapRow r;
    r.alpha = parse_double(f[0]);
    r.beta = parse_double(f[1]);
    if (!f[2].empty()) r.mean = parse_double(f[2]);
    if (!f[3].empty()) r.std = parse_double(f[3]);
    r.failed = f[4] == "1";
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cmnmf
