#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cmnmf/clusters.hpp"
#include "cmnmf/errors.hpp"
#include "cmnmf/ontology.hpp"
#include "cmnmf/synth.hpp"
#include "doctest.h"

using namespace cmnmf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("noise-free nine-gene instance has exact blocks") {
  const auto inst = plant(9, 3, 2, 3, 0.0, 1);
  CHECK(inst.m1 == 6);
  CHECK(inst.m2 == 9);
  CHECK(inst.true_assignment == std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 2, 2, 2});
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(inst.a1.contains(i, j) == (j / 2 == i / 3));
    for (std::size_t j = 0; j < 9; ++j) CHECK(inst.a2.contains(i, j) == (j / 3 == i / 3));
  }
  for (std::size_t p = 0; p < 6; ++p)
    for (std::size_t c = 0; c < 9; ++c) CHECK(inst.m.contains(p, c) == (p / 2 == c / 3));
  CHECK(inst.gene_labels.front() == "gene0");
  CHECK(concatenated_views(inst).nnz() == inst.a1.nnz() + inst.a2.nnz());
}

TEST_CASE("planted pairs equal co-membership of the truth") {
  const auto inst = plant(12, 4, 1, 2, 0.0, 2);
  ClusterAssignment truth{inst.gene_labels, {}, inst.k};
  for (auto c : inst.true_assignment) truth.memberships.push_back({c});
  const auto pairs = planted_pairs(inst);
  CHECK(std::set<GenePair>(pairs.begin(), pairs.end()) == co_membership_pairs(truth));
  CHECK(planted_pathways(inst).size() == 4);
}

TEST_CASE("plant determinism and preconditions") {
  const auto a = plant(30, 3, 2, 2, 0.2, 9);
  const auto b = plant(30, 3, 2, 2, 0.2, 9);
  const auto c = plant(30, 3, 2, 2, 0.2, 10);
  CHECK(a.a1 == b.a1);
  CHECK(a.a2 == b.a2);
  CHECK_FALSE(a.a1 == c.a1);
  CHECK(plant(9, 3, 1, 1, 0.0, 1).a1 == plant(9, 3, 1, 1, 0.0, 2).a1);

  CHECK_THROWS_AS(plant(10, 3, 1, 1, 0.0, 0), DomainError);
  CHECK_THROWS_AS(plant(9, 0, 1, 1, 0.0, 0), DomainError);
  CHECK_THROWS_AS(plant(9, 3, 0, 1, 0.0, 0), DomainError);
  CHECK_THROWS_AS(plant(9, 3, 1, 1, 0.5, 0), DomainError);
  CHECK_NOTHROW(plant(9, 3, 1, 1, 0.4, 0));
}

TEST_CASE("noise flips roughly the requested share of bits") {
  const auto inst = plant(300, 3, 10, 10, 0.1, 3);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inst.m1; ++j) flips += inst.a1.contains(i, j) != (j / 10 == i / 100);
  const double share = static_cast<double>(flips) / static_cast<double>(inst.n * inst.m1);
  CHECK(share > 0.08);
  CHECK(share < 0.12);
}

TEST_CASE("brute-force metric oracle hand cases") {
  const GroundTruthPairs none({"a", "b"}, {});
  const ClusterAssignment together{{"a", "b"}, {{0}, {0}}, 1};
  const auto c = brute_force_pair_metrics(together, none);
  CHECK(c.fp == 1);
  CHECK(c.tn == 0);
  CHECK(c.tp == 0);

  const GroundTruthPairs single({"a"}, {});
  const auto z = brute_force_pair_metrics(ClusterAssignment{{"a"}, {{0}}, 1}, single);
  CHECK(z.tp + z.fp + z.fn + z.tn == 0);

  std::mt19937_64 rng(51);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng() % 10;
    std::vector<std::string> genes;
    std::vector<std::vector<std::size_t>> mem(n);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < n; ++i) genes.push_back("g" + std::to_string(i));
    for (auto& m : mem)
      if (rng() % 3) m.push_back(rng() % 3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) pairs.emplace_back(genes[i], genes[j]);
    const GroundTruthPairs truth(genes, pairs);
    const ClusterAssignment assign{genes, mem, 3};
    CHECK(brute_force_pair_metrics(assign, truth) == confusion(assign, truth));
  }
}

TEST_CASE("naive objective hand values") {
  const SparseBinaryMatrix a(2, 2, {});
  const auto s = FactorizationState::from_factors(NonnegMatrix::zeros(2, 4), NonnegMatrix::filled(4, 2, 1.0),
                                                  NonnegMatrix::zeros(4, 2));
  HyperParams hp;
  hp.k = 4;
  CHECK(naive_objective(a, a, HierarchyMapping(SparseBinaryMatrix(2, 2, {})), s, hp) == 0.0);
  // k per mapped pair.
  CHECK(naive_objective(a, a, HierarchyMapping(SparseBinaryMatrix(2, 2, {{0, 0}, {0, 1}, {1, 1}})), s, hp) == 12.0);
}

TEST_CASE("instance files round-trip through the parsers") {
  const auto inst = plant(9, 3, 2, 3, 0.0, 4);
  const auto dir = fs::temp_directory_path() / "cmnmf_test_synth";
  fs::remove_all(dir);
  const auto written = write_instance_files(inst, dir);
  CHECK(written.size() == 4);

  const auto assoc = parse_associations(dir / "associations.tsv");
  const auto hier = parse_hierarchy(dir / "hierarchy.tsv");
  const auto v = split_by_levels(assoc, hier, 1, 2);
  CHECK(v.gene_labels == inst.gene_labels);
  CHECK(v.parent_labels == inst.parent_labels);
  CHECK(v.child_labels == inst.child_labels);
  CHECK(v.a1 == inst.a1);
  CHECK(v.a2 == inst.a2);
  CHECK(v.m == inst.m);
  CHECK(parse_truth_pairs(dir / "truth_pairs.tsv") == planted_pairs(inst));
  CHECK(parse_pathways(dir / "pathways.tsv") == planted_pathways(inst));

  const auto first = slurp(dir / "associations.tsv");
  write_instance_files(plant(9, 3, 2, 3, 0.0, 4), dir);
  CHECK(slurp(dir / "associations.tsv") == first);
}
