#include "cmnmf/clusters.hpp"

#include <algorithm>
#include <cmath>

#include "cmnmf/errors.hpp"

namespace cmnmf {

GenePair make_gene_pair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

ClusterAssignment extract_clusters(const NonnegMatrix& g, std::vector<std::string> gene_labels,
                                   double z_threshold) {
  if (gene_labels.size() != g.rows())
    throw ShapeError(std::to_string(gene_labels.size()) + " gene labels for " + std::to_string(g.rows()) +
                     " rows of G");
  ClusterAssignment out{std::move(gene_labels), std::vector<std::vector<std::size_t>>(g.rows()), g.cols()};
  const auto k = static_cast<double>(g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const auto row = g.row(i);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= k;
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / k);
    if (!(sd > 0.0)) continue;
    for (std::size_t c = 0; c < row.size(); ++c)
      if ((row[c] - mean) / sd >= z_threshold) out.memberships[i].push_back(c);
  }
  return out;
}

std::set<GenePair> co_membership_pairs(const ClusterAssignment& assign) {
  std::vector<std::vector<std::size_t>> members(assign.k);
  for (std::size_t i = 0; i < assign.memberships.size(); ++i)
    for (auto c : assign.memberships[i]) members.at(c).push_back(i);
  std::set<GenePair> out;
  for (const auto& genes : members)
    for (std::size_t a = 0; a < genes.size(); ++a)
      for (std::size_t b = a + 1; b < genes.size(); ++b)
        out.insert(make_gene_pair(assign.gene_labels[genes[a]], assign.gene_labels[genes[b]]));
  return out;
}

}  // namespace cmnmf
