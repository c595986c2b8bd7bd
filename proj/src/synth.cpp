#include "cmnmf/synth.hpp"

#include <fstream>
#include <random>

#include "cmnmf/errors.hpp"

namespace cmnmf {

namespace {

std::string padded(const char* prefix, std::size_t i, std::size_t count) {
  const auto width = std::to_string(count > 0 ? count - 1 : 0).size();
  auto digits = std::to_string(i);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

// Each bit of the block pattern, XOR-ed with a Bernoulli(noise) flip.
SparseBinaryMatrix noisy_blocks(std::size_t k, std::size_t per_cluster, const std::vector<std::size_t>& cluster_of,
                                double noise, std::mt19937_64& rng) {
  const std::size_t n = cluster_of.size();
  const std::size_t cols = k * per_cluster;
  std::vector<SparseBinaryMatrix::Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      bool bit = j / per_cluster == cluster_of[i];
      if (noise > 0.0) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
        if (u < noise) bit = !bit;
      }
      if (bit) entries.emplace_back(i, j);
    }
  }
  return SparseBinaryMatrix(n, cols, std::move(entries));
}

void write_lines(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& rows,
                 const std::string& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  for (const auto& [a, b] : rows) out << a << '\t' << b << '\n';
  if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace

PlantedInstance plant(std::size_t n, std::size_t k, std::size_t phenos_parent, std::size_t phenos_child,
                      double noise_rate, std::uint64_t seed) {
  if (k == 0) throw DomainError("k must be >= 1");
  if (n == 0 || n % k != 0) throw DomainError("n must be a positive multiple of k");
  if (phenos_parent == 0 || phenos_child == 0) throw DomainError("phenotypes per cluster must be >= 1");
  if (!(noise_rate >= 0.0 && noise_rate < 0.5)) throw DomainError("noise rate must lie in [0, 0.5)");

  PlantedInstance inst;
  inst.n = n;
  inst.k = k;
  inst.m1 = k * phenos_parent;
  inst.m2 = k * phenos_child;
  inst.noise_rate = noise_rate;
  const std::size_t block = n / k;
  for (std::size_t i = 0; i < n; ++i) inst.true_assignment.push_back(i / block);

  std::mt19937_64 rng(seed);
  inst.a1 = noisy_blocks(k, phenos_parent, inst.true_assignment, noise_rate, rng);
  inst.a2 = noisy_blocks(k, phenos_child, inst.true_assignment, noise_rate, rng);

  std::vector<SparseBinaryMatrix::Entry> links;
  for (std::size_t i = 0; i < inst.m1; ++i)
    for (std::size_t j = 0; j < inst.m2; ++j)
      if (i / phenos_parent == j / phenos_child) links.emplace_back(i, j);
  inst.m = SparseBinaryMatrix(inst.m1, inst.m2, std::move(links));

  for (std::size_t i = 0; i < n; ++i) inst.gene_labels.push_back(padded("gene", i, n));
  for (std::size_t j = 0; j < inst.m1; ++j) inst.parent_labels.push_back(padded("PARENT:", j, inst.m1));
  for (std::size_t j = 0; j < inst.m2; ++j) inst.child_labels.push_back(padded("CHILD:", j, inst.m2));
  return inst;
}

std::map<std::string, std::vector<std::string>> planted_pathways(const PlantedInstance& inst) {
  std::map<std::string, std::vector<std::string>> out;
  for (std::size_t i = 0; i < inst.n; ++i)
    out[padded("pathway", inst.true_assignment[i], inst.k)].push_back(inst.gene_labels[i]);
  return out;
}

std::vector<std::pair<std::string, std::string>> planted_pairs(const PlantedInstance& inst) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = i + 1; j < inst.n; ++j)
      if (inst.true_assignment[i] == inst.true_assignment[j]) out.emplace_back(inst.gene_labels[i], inst.gene_labels[j]);
  return out;
}

SparseBinaryMatrix concatenated_views(const PlantedInstance& inst) {
  auto entries = inst.a1.entries();
  for (const auto& [r, c] : inst.a2.entries()) entries.emplace_back(r, inst.m1 + c);
  return SparseBinaryMatrix(inst.n, inst.m1 + inst.m2, std::move(entries));
}

std::vector<std::filesystem::path> write_instance_files(const PlantedInstance& inst,
                                                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  std::vector<std::pair<std::string, std::string>> assoc;
  for (const auto& [r, c] : inst.a1.entries()) assoc.emplace_back(inst.gene_labels[r], inst.parent_labels[c]);
  for (const auto& [r, c] : inst.a2.entries()) assoc.emplace_back(inst.gene_labels[r], inst.child_labels[c]);
  written.push_back(dir / "associations.tsv");
  write_lines(written.back(), assoc, "# planted gene<TAB>phenotype associations");

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [p, c] : inst.m.entries()) edges.emplace_back(inst.parent_labels[p], inst.child_labels[c]);
  written.push_back(dir / "hierarchy.tsv");
  write_lines(written.back(), edges, "# planted parent<TAB>child is-a edges");

  std::vector<std::pair<std::string, std::string>> members;
  for (const auto& [pathway, genes] : planted_pathways(inst))
    for (const auto& g : genes) members.emplace_back(pathway, g);
  written.push_back(dir / "pathways.tsv");
  write_lines(written.back(), members, "# planted pathway_id<TAB>gene");

  written.push_back(dir / "truth_pairs.tsv");
  write_lines(written.back(), planted_pairs(inst), "# planted geneA<TAB>geneB");
  return written;
}

PairConfusion brute_force_pair_metrics(const ClusterAssignment& assign, const GroundTruthPairs& truth) {
  const auto& universe = truth.universe();
  // Cluster lists keyed by universe position; genes without an entry in the
  // assignment have none.
  std::vector<std::vector<std::size_t>> clusters(universe.size());
  for (std::size_t g = 0; g < assign.gene_labels.size(); ++g)
    for (std::size_t u = 0; u < universe.size(); ++u)
      if (universe[u] == assign.gene_labels[g]) clusters[u] = assign.memberships[g];

  PairConfusion c;
  for (std::size_t a = 0; a < universe.size(); ++a) {
    for (std::size_t b = a + 1; b < universe.size(); ++b) {
      bool together = false;
      for (auto x : clusters[a])
        for (auto y : clusters[b]) together = together || x == y;
      const bool positive = truth.is_positive(universe[a], universe[b]);
      if (together && positive) ++c.tp;
      else if (together) ++c.fp;
      else if (positive) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

double naive_objective(const SparseBinaryMatrix& a1, const SparseBinaryMatrix& a2, const HierarchyMapping& map,
                       const FactorizationState& state, const HyperParams& hp) {
  const auto& g = state.g;
  const auto& p1 = state.p1;
  const auto& p2 = state.p2;
  const std::size_t n = g.rows(), k = g.cols();

  auto residual = [&](const SparseBinaryMatrix& a, const NonnegMatrix& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p.cols(); ++j) {
        double gp = 0.0;
        for (std::size_t c = 0; c < k; ++c) gp += g(i, c) * p(c, j);
        const double aij = a.contains(i, j) ? 1.0 : 0.0;
        s += (aij - gp) * (aij - gp);
      }
    }
    return s;
  };

  double penalty = 0.0;
  for (std::size_t i = 0; i < p1.cols(); ++i) {
    for (std::size_t j = 0; j < p2.cols(); ++j) {
      if (!map.m.contains(i, j)) continue;
      for (std::size_t c = 0; c < k; ++c) penalty += (p1(c, i) - p2(c, j)) * (p1(c, i) - p2(c, j));
    }
  }
  return residual(a1, p1) + hp.alpha * residual(a2, p2) + hp.beta * penalty;
}

}  // namespace cmnmf
