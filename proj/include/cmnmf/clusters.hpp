#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cmnmf/matrix.hpp"

namespace cmnmf {

/// Unordered gene pair, stored with first < second.
using GenePair = std::pair<std::string, std::string>;

GenePair make_gene_pair(std::string a, std::string b);

/// Overlapping hard clustering: each gene maps to a possibly empty, ascending
/// list of cluster indices in [0, k).
struct ClusterAssignment {
  std::vector<std::string> gene_labels;
  std::vector<std::vector<std::size_t>> memberships;
  std::size_t k = 0;
};

inline constexpr double kDefaultZThreshold = 3.0;

/// Row-wise z-scores of G (population standard deviation); a gene joins every
/// cluster whose z-score is >= z_threshold. Constant rows join nothing.
ClusterAssignment extract_clusters(const NonnegMatrix& g, std::vector<std::string> gene_labels,
                                   double z_threshold = kDefaultZThreshold);

/// All unordered pairs of distinct genes sharing at least one cluster.
std::set<GenePair> co_membership_pairs(const ClusterAssignment& assign);

}  // namespace cmnmf
