#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cmnmf/clusters.hpp"
#include "cmnmf/factorizer.hpp"
#include "cmnmf/metrics.hpp"

namespace cmnmf {

/// Block-structured two-level instance with a known gene partition.
///
/// Cluster c owns `phenos_parent` parent-level and `phenos_child` child-level
/// phenotypes. With no noise every gene of c is annotated to exactly those, and
/// M links each parent phenotype of c to every child phenotype of c. Noise
/// flips each A1/A2 bit independently; M is left intact.
struct PlantedInstance {
  std::size_t n = 0, m1 = 0, m2 = 0, k = 0;
  std::vector<std::size_t> true_assignment;  // gene -> cluster
  SparseBinaryMatrix a1{0, 0, {}};
  SparseBinaryMatrix a2{0, 0, {}};
  SparseBinaryMatrix m{0, 0, {}};
  double noise_rate = 0.0;
  std::vector<std::string> gene_labels;
  std::vector<std::string> parent_labels;
  std::vector<std::string> child_labels;
};

/// Requires k >= 1, n divisible by k, both phenotype counts >= 1 and
/// 0 <= noise_rate < 0.5; throws DomainError otherwise.
PlantedInstance plant(std::size_t n, std::size_t k, std::size_t phenos_parent, std::size_t phenos_child,
                      double noise_rate, std::uint64_t seed);

/// One pathway per planted cluster.
std::map<std::string, std::vector<std::string>> planted_pathways(const PlantedInstance& inst);

/// Unordered pairs of genes planted in the same cluster.
std::vector<std::pair<std::string, std::string>> planted_pairs(const PlantedInstance& inst);

/// Concatenated [A1 | A2], the single matrix plain NMF sees.
SparseBinaryMatrix concatenated_views(const PlantedInstance& inst);

/// Writes associations.tsv, hierarchy.tsv, pathways.tsv and truth_pairs.tsv
/// into `dir` in the ingest formats. Parent phenotypes are hierarchy roots
/// (level 1) and child phenotypes sit at level 2. Returns the written paths.
std::vector<std::filesystem::path> write_instance_files(const PlantedInstance& inst,
                                                        const std::filesystem::path& dir);

// Independent oracles for the test suite.

/// Classifies every unordered pair of the universe with a double loop.
PairConfusion brute_force_pair_metrics(const ClusterAssignment& assign, const GroundTruthPairs& truth);

/// Literal evaluation of the loss on dense copies of every matrix.
double naive_objective(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                       const FactorizationState& state, const HyperParams& hp);

}  // namespace cmnmf
