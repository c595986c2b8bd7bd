#include "cmnmf/metrics.hpp"

#include <algorithm>

#include "cmnmf/errors.hpp"

namespace cmnmf {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

std::pair<std::size_t, std::size_t> ordered(std::size_t a, std::size_t b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

PairConfusion finish(std::uint64_t predicted, std::uint64_t tp, const GroundTruthPairs& truth) {
  PairConfusion c;
  c.tp = tp;
  c.fp = predicted - tp;
  c.fn = truth.positives().size() - tp;
  c.tn = truth.total_pairs() - c.tp - c.fp - c.fn;
  return c;
}

}  // namespace

GroundTruthPairs::GroundTruthPairs(std::vector<std::string> universe,
                                   const std::vector<std::pair<std::string, std::string>>& pairs)
    : universe_(std::move(universe)) {
  for (std::size_t i = 0; i < universe_.size(); ++i)
    if (!index_.emplace(universe_[i], i).second) throw DomainError("duplicate gene '" + universe_[i] + "' in universe");
  for (const auto& [a, b] : pairs) {
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib || *ia == *ib) continue;
    positives_.insert(ordered(*ia, *ib));
  }
}

std::optional<std::size_t> GroundTruthPairs::index_of(const std::string& gene) const {
  auto it = index_.find(gene);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool GroundTruthPairs::is_positive(const std::string& a, const std::string& b) const {
  auto ia = index_of(a);
  auto ib = index_of(b);
  return ia && ib && *ia != *ib && positives_.count(ordered(*ia, *ib)) > 0;
}

GroundTruthPairs pathways_to_pairs(const std::map<std::string, std::vector<std::string>>& membership,
                                   std::vector<std::string> universe) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [pathway, genes] : membership)
    for (std::size_t a = 0; a < genes.size(); ++a)
      for (std::size_t b = a + 1; b < genes.size(); ++b) pairs.emplace_back(genes[a], genes[b]);
  return GroundTruthPairs(std::move(universe), pairs);
}

PairConfusion confusion(const std::set<GenePair>& predicted, const GroundTruthPairs& truth) {
  std::uint64_t tp = 0;
  for (const auto& [a, b] : predicted) {
    auto ia = truth.index_of(a);
    auto ib = truth.index_of(b);
    if (!ia || !ib) throw DomainError("predicted pair (" + a + ", " + b + ") lies outside the universe");
    if (*ia == *ib) throw DomainError("predicted pair (" + a + ", " + b + ") is not a pair of distinct genes");
    tp += truth.positives().count(ordered(*ia, *ib));
  }
  return finish(predicted.size(), tp, truth);
}

PairConfusion confusion(const ClusterAssignment& assign, const GroundTruthPairs& truth) {
  // Universe index -> ascending cluster list.
  std::vector<const std::vector<std::size_t>*> clusters_of(truth.universe().size(), nullptr);
  std::vector<std::vector<std::size_t>> members(assign.k);
  for (std::size_t i = 0; i < assign.gene_labels.size(); ++i) {
    if (assign.memberships[i].empty()) continue;
    auto u = truth.index_of(assign.gene_labels[i]);
    if (!u) throw DomainError("assigned gene '" + assign.gene_labels[i] + "' lies outside the universe");
    clusters_of[*u] = &assign.memberships[i];
    for (auto c : assign.memberships[i]) members.at(c).push_back(*u);
  }

  // Distinct co-clustered pairs: for each gene, the union of its clusters'
  // members with a larger universe index.
  std::uint64_t predicted = 0;
  std::vector<std::size_t> stamp(truth.universe().size(), SIZE_MAX);
  for (std::size_t u = 0; u < clusters_of.size(); ++u) {
    if (!clusters_of[u]) continue;
    for (auto c : *clusters_of[u])
      for (auto v : members[c])
        if (v > u && stamp[v] != u) {
          stamp[v] = u;
          ++predicted;
        }
  }

  std::uint64_t tp = 0;
  for (const auto& [a, b] : truth.positives()) {
    if (!clusters_of[a] || !clusters_of[b]) continue;
    const auto& ca = *clusters_of[a];
    const auto& cb = *clusters_of[b];
    // Both lists are ascending; any common element means co-membership.
    std::size_t i = 0, j = 0;
    while (i < ca.size() && j < cb.size()) {
      if (ca[i] == cb[j]) {
        ++tp;
        break;
      }
      ca[i] < cb[j] ? ++i : ++j;
    }
  }
  return finish(predicted, tp, truth);
}

PairIndices indices(const PairConfusion& c) {
  const auto tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
  PairIndices r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  // 2PR/(P+R) in count form; rounds monotonically between P and R.
  r.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn);
  r.jaccard = ratio(tp, tp + fp + fn);
  r.rand = ratio(tp + tn, tp + fp + fn + tn);
  return r;
}

Metric parse_metric(const std::string& name) {
  if (name == "f1") return Metric::kF1;
  if (name == "precision") return Metric::kPrecision;
  if (name == "recall") return Metric::kRecall;
  if (name == "jaccard") return Metric::kJaccard;
  if (name == "rand") return Metric::kRand;
  throw DomainError("unknown metric '" + name + "'");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kF1: return "f1";
    case Metric::kPrecision: return "precision";
    case Metric::kRecall: return "recall";
    case Metric::kJaccard: return "jaccard";
    case Metric::kRand: return "rand";
  }
  return "f1";
}

double metric_value(const PairIndices& idx, Metric m) {
  switch (m) {
    case Metric::kF1: return idx.f1;
    case Metric::kPrecision: return idx.precision;
    case Metric::kRecall: return idx.recall;
    case Metric::kJaccard: return idx.jaccard;
    case Metric::kRand: return idx.rand;
  }
  return idx.f1;
}

}  // namespace cmnmf
