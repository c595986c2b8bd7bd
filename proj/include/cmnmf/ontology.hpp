#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmnmf/matrix.hpp"

namespace cmnmf {

/// Gene-phenotype annotations with identifier registries kept in first-seen
/// order. Pairs are stored as (gene index, phenotype index).
class LabeledAssociations {
 public:
  /// Registers both identifiers if new; a repeated pair is ignored.
  void add(const std::string& gene, const std::string& phenotype);

  const std::vector<std::string>& genes() const noexcept { return genes_; }
  const std::vector<std::string>& phenotypes() const noexcept { return phenotypes_; }
  const std::set<std::pair<std::size_t, std::size_t>>& pairs() const noexcept { return pairs_; }

  std::optional<std::size_t> gene_index(const std::string& gene) const;
  std::optional<std::size_t> phenotype_index(const std::string& phenotype) const;
  bool contains(const std::string& gene, const std::string& phenotype) const;

  std::set<std::pair<std::string, std::string>> identifier_pairs() const;

  bool operator==(const LabeledAssociations& o) const {
    return genes_ == o.genes_ && phenotypes_ == o.phenotypes_ && pairs_ == o.pairs_;
  }

 private:
  static std::size_t intern(std::vector<std::string>& names,
                            std::unordered_map<std::string, std::size_t>& index, const std::string& name);

  std::vector<std::string> genes_;
  std::vector<std::string> phenotypes_;
  std::unordered_map<std::string, std::size_t> gene_index_;
  std::unordered_map<std::string, std::size_t> phenotype_index_;
  std::set<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Is-a DAG over phenotype terms. Level of a term is the length of the
/// longest path reaching it from a root; roots sit at level 1.
class OntologyHierarchy {
 public:
  using Edge = std::pair<std::string, std::string>;  // (parent, child)

  /// Throws ReferenceError when an edge names a term missing from `terms`,
  /// CycleError when the edges are not acyclic. Duplicate edges collapse.
  static OntologyHierarchy build(std::vector<std::string> terms, const std::vector<Edge>& edges);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::optional<std::size_t> index_of(const std::string& term) const;

  const std::vector<std::size_t>& parents(std::size_t t) const { return parents_[t]; }
  const std::vector<std::size_t>& children(std::size_t t) const { return children_[t]; }
  int level(std::size_t t) const { return levels_[t]; }
  /// Throws ReferenceError for an unknown term.
  int level(const std::string& term) const;

  /// Indices of all strict ancestors of t, ascending.
  std::vector<std::size_t> ancestors(std::size_t t) const;
  /// Term indices parents-before-children.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

  std::vector<Edge> edges() const;

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<int> levels_;
  std::vector<std::size_t> topo_;
};

/// Two adjacent ontology levels as aligned binary views sharing gene rows.
struct SplitViews {
  SparseBinaryMatrix a1;  // genes x parent-level phenotypes
  SparseBinaryMatrix a2;  // genes x child-level phenotypes
  SparseBinaryMatrix m;   // parent x child is-a mapping
  std::vector<std::string> gene_labels;
  std::vector<std::string> parent_labels;
  std::vector<std::string> child_labels;

  // Genes without any annotation at the two levels; removed from the views.
  std::vector<std::string> dropped_genes;
  // Genes kept with an all-zero row in one of the views.
  std::vector<std::string> single_level_genes;
  // Annotated phenotypes that the hierarchy does not define; ignored.
  std::vector<std::string> unplaced_phenotypes;
};

enum class HierarchyFormat { kTsvEdges, kOboSubset };

/// `gene<TAB>phenotype` per line; `#` comments and blank lines skipped.
/// Throws ParseError naming the line for malformed input and
/// EmptyInputError when the file holds no associations.
LabeledAssociations parse_associations(const std::filesystem::path& path);

/// `.obo` extension selects the OBO subset reader, anything else TSV edges.
HierarchyFormat detect_hierarchy_format(const std::filesystem::path& path);

/// TSV: `parent<TAB>child` per line, or a lone term to declare an isolated
/// node. OBO subset: `[Term]` stanzas, only `id:` and `is_a:` are read.
OntologyHierarchy parse_hierarchy(const std::filesystem::path& path, HierarchyFormat format);
OntologyHierarchy parse_hierarchy(const std::filesystem::path& path);

/// Builds the parent-level view A1, the child-level view A2 and the mapping M.
/// Requires child_level == parent_level + 1 (LevelError otherwise, or when a
/// level holds no terms); throws EmptyViewError when a view ends up empty.
SplitViews split_by_levels(const LabeledAssociations& assoc, const OntologyHierarchy& hier,
                           int parent_level, int child_level);

/// Upward closure under the true path rule: every annotation is propagated to
/// all ancestors of its phenotype. New phenotypes are appended in hierarchy
/// order. Throws ReferenceError for a phenotype missing from the hierarchy.
LabeledAssociations true_path_enrich(const LabeledAssociations& assoc, const OntologyHierarchy& hier);

/// Reads any two-column TSV (`#` comments and blank lines skipped).
std::vector<std::pair<std::string, std::string>> read_two_column_tsv(const std::filesystem::path& path);

/// Ground-truth pairs file: `geneA<TAB>geneB`, unordered.
std::vector<std::pair<std::string, std::string>> parse_truth_pairs(const std::filesystem::path& path);

/// Pathway membership file: `pathway_id<TAB>gene`.
std::map<std::string, std::vector<std::string>> parse_pathways(const std::filesystem::path& path);

}  // namespace cmnmf
