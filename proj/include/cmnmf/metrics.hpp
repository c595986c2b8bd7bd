#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmnmf/clusters.hpp"

namespace cmnmf {

/// Known related gene pairs over a fixed universe. Positive pairs are kept as
/// (i, j) universe indices with i < j.
class GroundTruthPairs {
 public:
  /// Pairs naming genes outside the universe, and self pairs, are dropped.
  GroundTruthPairs(std::vector<std::string> universe, const std::vector<std::pair<std::string, std::string>>& pairs);

  const std::vector<std::string>& universe() const noexcept { return universe_; }
  const std::set<std::pair<std::size_t, std::size_t>>& positives() const noexcept { return positives_; }
  std::optional<std::size_t> index_of(const std::string& gene) const;
  bool is_positive(const std::string& a, const std::string& b) const;

  std::uint64_t total_pairs() const noexcept {
    const std::uint64_t n = universe_.size();
    return n < 2 ? 0 : n * (n - 1) / 2;
  }

 private:
  std::vector<std::string> universe_;
  std::unordered_map<std::string, std::size_t> index_;
  std::set<std::pair<std::size_t, std::size_t>> positives_;
};

/// Positive pair iff both genes share a pathway and lie in the universe.
GroundTruthPairs pathways_to_pairs(const std::map<std::string, std::vector<std::string>>& membership,
                                   std::vector<std::string> universe);

struct PairConfusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  bool operator==(const PairConfusion&) const = default;
};

struct PairIndices {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double jaccard = 0.0;
  double rand = 0.0;
};

/// Throws DomainError when a predicted pair leaves the universe or is a self pair.
PairConfusion confusion(const std::set<GenePair>& predicted, const GroundTruthPairs& truth);

/// Same counts straight from an assignment, without materializing the
/// predicted pair set. Every assigned gene must be in the universe.
PairConfusion confusion(const ClusterAssignment& assign, const GroundTruthPairs& truth);

/// Pair-counting indices; a 0/0 ratio evaluates to 0.
PairIndices indices(const PairConfusion& c);

enum class Metric { kF1, kPrecision, kRecall, kJaccard, kRand };

Metric parse_metric(const std::string& name);
std::string metric_name(Metric m);
double metric_value(const PairIndices& idx, Metric m);

}  // namespace cmnmf
