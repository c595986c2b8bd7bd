#include "cmnmf/ontology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "cmnmf/errors.hpp"

namespace cmnmf {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool skippable(const std::string& line) {
  return line.empty() || line.front() == '#' ||
         line.find_first_not_of(" \t") == std::string::npos;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string where(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

}  // namespace

// ---------------------------------------------------------------------------
// LabeledAssociations

std::size_t LabeledAssociations::intern(std::vector<std::string>& names,
                                        std::unordered_map<std::string, std::size_t>& index,
                                        const std::string& name) {
  auto [it, inserted] = index.try_emplace(name, names.size());
  if (inserted) names.push_back(name);
  return it->second;
}

void LabeledAssociations::add(const std::string& gene, const std::string& phenotype) {
  const auto g = intern(genes_, gene_index_, gene);
  const auto p = intern(phenotypes_, phenotype_index_, phenotype);
  pairs_.emplace(g, p);
}

std::optional<std::size_t> LabeledAssociations::gene_index(const std::string& gene) const {
  auto it = gene_index_.find(gene);
  if (it == gene_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> LabeledAssociations::phenotype_index(const std::string& phenotype) const {
  auto it = phenotype_index_.find(phenotype);
  if (it == phenotype_index_.end()) return std::nullopt;
  return it->second;
}

bool LabeledAssociations::contains(const std::string& gene, const std::string& phenotype) const {
  auto g = gene_index(gene);
  auto p = phenotype_index(phenotype);
  return g && p && pairs_.count({*g, *p}) > 0;
}

std::set<std::pair<std::string, std::string>> LabeledAssociations::identifier_pairs() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [g, p] : pairs_) out.emplace(genes_[g], phenotypes_[p]);
  return out;
}

// ---------------------------------------------------------------------------
// OntologyHierarchy

OntologyHierarchy OntologyHierarchy::build(std::vector<std::string> terms, const std::vector<Edge>& edges) {
  OntologyHierarchy h;
  for (auto& t : terms) {
    if (h.index_.try_emplace(t, h.terms_.size()).second) h.terms_.push_back(std::move(t));
  }
  const std::size_t n = h.terms_.size();
  h.parents_.resize(n);
  h.children_.resize(n);

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [parent, child] : edges) {
    auto p = h.index_of(parent);
    auto c = h.index_of(child);
    if (!p) throw ReferenceError("edge references undefined parent term '" + parent + "'");
    if (!c) throw ReferenceError("edge references undefined child term '" + child + "'");
    if (*p == *c) throw CycleError(parent);
    if (!seen.emplace(*p, *c).second) continue;
    h.parents_[*c].push_back(*p);
    h.children_[*p].push_back(*c);
  }
  for (auto& v : h.parents_) std::sort(v.begin(), v.end());
  for (auto& v : h.children_) std::sort(v.begin(), v.end());

  // Kahn's algorithm; levels relax along the topological order so each term
  // ends up one deeper than its deepest parent.
  std::vector<std::size_t> pending(n);
  std::deque<std::size_t> ready;
  h.levels_.assign(n, 1);
  for (std::size_t t = 0; t < n; ++t) {
    pending[t] = h.parents_[t].size();
    if (pending[t] == 0) ready.push_back(t);
  }
  while (!ready.empty()) {
    const auto t = ready.front();
    ready.pop_front();
    h.topo_.push_back(t);
    for (auto c : h.children_[t]) {
      h.levels_[c] = std::max(h.levels_[c], h.levels_[t] + 1);
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  if (h.topo_.size() != n) {
    // Every unprocessed term still has an unprocessed parent, so walking
    // parent links among them must revisit a term; that term is on a cycle.
    std::size_t t = 0;
    while (pending[t] == 0) ++t;
    std::vector<bool> visited(n, false);
    while (!visited[t]) {
      visited[t] = true;
      for (auto p : h.parents_[t]) {
        if (pending[p] != 0) {
          t = p;
          break;
        }
      }
    }
    throw CycleError(h.terms_[t]);
  }
  return h;
}

std::optional<std::size_t> OntologyHierarchy::index_of(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int OntologyHierarchy::level(const std::string& term) const {
  auto t = index_of(term);
  if (!t) throw ReferenceError("unknown term '" + term + "'");
  return levels_[*t];
}

std::vector<std::size_t> OntologyHierarchy::ancestors(std::size_t t) const {
  std::vector<bool> mark(terms_.size(), false);
  std::vector<std::size_t> stack(parents_[t].begin(), parents_[t].end());
  while (!stack.empty()) {
    const auto p = stack.back();
    stack.pop_back();
    if (mark[p]) continue;
    mark[p] = true;
    stack.insert(stack.end(), parents_[p].begin(), parents_[p].end());
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(i);
  return out;
}

std::vector<OntologyHierarchy::Edge> OntologyHierarchy::edges() const {
  std::vector<Edge> out;
  for (std::size_t p = 0; p < children_.size(); ++p)
    for (auto c : children_[p]) out.emplace_back(terms_[p], terms_[c]);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

LabeledAssociations parse_associations(const std::filesystem::path& path) {
  auto in = open_input(path);
  LabeledAssociations assoc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty())
      throw ParseError(where(path, line_no) + ": expected 'gene<TAB>phenotype'");
    assoc.add(trim(fields[0]), trim(fields[1]));
  }
  if (assoc.pairs().empty()) throw EmptyInputError(path.string() + ": no associations");
  return assoc;
}

HierarchyFormat detect_hierarchy_format(const std::filesystem::path& path) {
  return path.extension() == ".obo" ? HierarchyFormat::kOboSubset : HierarchyFormat::kTsvEdges;
}

namespace {

OntologyHierarchy parse_tsv_edges(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::string> terms;
  std::vector<OntologyHierarchy::Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    auto fields = split_tabs(line);
    for (auto& f : fields) f = trim(f);
    if (fields.size() == 1 && !fields[0].empty()) {
      terms.push_back(fields[0]);
    } else if (fields.size() == 2 && !fields[0].empty() && !fields[1].empty()) {
      terms.push_back(fields[0]);
      terms.push_back(fields[1]);
      edges.emplace_back(fields[0], fields[1]);
    } else {
      throw ParseError(where(path, line_no) + ": expected 'parent<TAB>child'");
    }
  }
  if (terms.empty()) throw EmptyInputError(path.string() + ": no hierarchy terms");
  return OntologyHierarchy::build(std::move(terms), edges);
}

OntologyHierarchy parse_obo_subset(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::string> terms;
  std::vector<OntologyHierarchy::Edge> edges;
  std::vector<std::string> pending_parents;
  std::optional<std::string> current;
  bool in_term = false;

  auto flush = [&](std::size_t line_no) {
    if (in_term) {
      if (!current) throw ParseError(where(path, line_no) + ": [Term] stanza without id");
      terms.push_back(*current);
      for (auto& p : pending_parents) edges.emplace_back(p, *current);
    }
    current.reset();
    pending_parents.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto t = trim(line);
    if (t.empty() || t.front() == '!') continue;
    if (t.front() == '[') {
      flush(line_no);
      in_term = (t == "[Term]");
      continue;
    }
    if (!in_term) continue;
    // Values end at the first whitespace; "! label" trailers are dropped.
    auto value_of = [&](std::size_t tag_len) {
      std::istringstream ss(t.substr(tag_len));
      std::string v;
      ss >> v;
      if (v.empty()) throw ParseError(where(path, line_no) + ": empty value");
      return v;
    };
    if (t.rfind("id:", 0) == 0) {
      if (current) throw ParseError(where(path, line_no) + ": duplicate id in stanza");
      current = value_of(3);
    } else if (t.rfind("is_a:", 0) == 0) {
      pending_parents.push_back(value_of(5));
    }
  }
  flush(line_no);
  if (terms.empty()) throw EmptyInputError(path.string() + ": no [Term] stanzas");
  return OntologyHierarchy::build(std::move(terms), edges);
}

}  // namespace

OntologyHierarchy parse_hierarchy(const std::filesystem::path& path, HierarchyFormat format) {
  return format == HierarchyFormat::kOboSubset ? parse_obo_subset(path) : parse_tsv_edges(path);
}

OntologyHierarchy parse_hierarchy(const std::filesystem::path& path) {
  return parse_hierarchy(path, detect_hierarchy_format(path));
}

std::vector<std::pair<std::string, std::string>> read_two_column_tsv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty())
      throw ParseError(where(path, line_no) + ": expected two tab-separated fields");
    rows.emplace_back(trim(fields[0]), trim(fields[1]));
  }
  return rows;
}

std::vector<std::pair<std::string, std::string>> parse_truth_pairs(const std::filesystem::path& path) {
  auto rows = read_two_column_tsv(path);
  if (rows.empty()) throw EmptyInputError(path.string() + ": no gene pairs");
  return rows;
}

std::map<std::string, std::vector<std::string>> parse_pathways(const std::filesystem::path& path) {
  auto rows = read_two_column_tsv(path);
  if (rows.empty()) throw EmptyInputError(path.string() + ": no pathway memberships");
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [pathway, gene] : rows) {
    auto& genes = out[pathway];
    if (std::find(genes.begin(), genes.end(), gene) == genes.end()) genes.push_back(gene);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Level split and enrichment

SplitViews split_by_levels(const LabeledAssociations& assoc, const OntologyHierarchy& hier,
                           int parent_level, int child_level) {
  if (child_level != parent_level + 1)
    throw LevelError("child level must be parent level + 1 (got " + std::to_string(parent_level) + " and " +
                     std::to_string(child_level) + ")");
  bool parent_terms = false, child_terms = false;
  for (std::size_t t = 0; t < hier.size(); ++t) {
    parent_terms |= hier.level(t) == parent_level;
    child_terms |= hier.level(t) == child_level;
  }
  if (!parent_terms) throw LevelError("no phenotype terms at level " + std::to_string(parent_level));
  if (!child_terms) throw LevelError("no phenotype terms at level " + std::to_string(child_level));

  const auto& phenos = assoc.phenotypes();
  const auto& genes = assoc.genes();

  // Which view (if any) each annotated phenotype belongs to.
  enum class Side { kNone, kParent, kChild };
  std::vector<Side> side(phenos.size(), Side::kNone);
  SplitViews out{SparseBinaryMatrix(0, 0, {}), SparseBinaryMatrix(0, 0, {}), SparseBinaryMatrix(0, 0, {}),
                 {}, {}, {}, {}, {}, {}};
  for (std::size_t p = 0; p < phenos.size(); ++p) {
    auto t = hier.index_of(phenos[p]);
    if (!t) {
      out.unplaced_phenotypes.push_back(phenos[p]);
      continue;
    }
    if (hier.level(*t) == parent_level) side[p] = Side::kParent;
    if (hier.level(*t) == child_level) side[p] = Side::kChild;
  }

  std::vector<bool> pheno_used(phenos.size(), false);
  std::vector<int> gene_mask(genes.size(), 0);  // bit 0: parent level, bit 1: child level
  for (const auto& [g, p] : assoc.pairs()) {
    if (side[p] == Side::kNone) continue;
    pheno_used[p] = true;
    gene_mask[g] |= side[p] == Side::kParent ? 1 : 2;
  }

  std::vector<std::size_t> gene_row(genes.size(), SIZE_MAX);
  for (std::size_t g = 0; g < genes.size(); ++g) {
    if (gene_mask[g] == 0) {
      out.dropped_genes.push_back(genes[g]);
      continue;
    }
    if (gene_mask[g] != 3) out.single_level_genes.push_back(genes[g]);
    gene_row[g] = out.gene_labels.size();
    out.gene_labels.push_back(genes[g]);
  }

  std::vector<std::size_t> pheno_col(phenos.size(), SIZE_MAX);
  for (std::size_t p = 0; p < phenos.size(); ++p) {
    if (!pheno_used[p]) continue;
    auto& labels = side[p] == Side::kParent ? out.parent_labels : out.child_labels;
    pheno_col[p] = labels.size();
    labels.push_back(phenos[p]);
  }
  if (out.gene_labels.empty()) throw EmptyViewError("no gene is annotated at either level");
  if (out.parent_labels.empty())
    throw EmptyViewError("no annotations at parent level " + std::to_string(parent_level));
  if (out.child_labels.empty())
    throw EmptyViewError("no annotations at child level " + std::to_string(child_level));

  std::vector<SparseBinaryMatrix::Entry> e1, e2;
  for (const auto& [g, p] : assoc.pairs()) {
    if (side[p] == Side::kParent) e1.emplace_back(gene_row[g], pheno_col[p]);
    if (side[p] == Side::kChild) e2.emplace_back(gene_row[g], pheno_col[p]);
  }
  const auto n = out.gene_labels.size();
  out.a1 = SparseBinaryMatrix(n, out.parent_labels.size(), std::move(e1));
  out.a2 = SparseBinaryMatrix(n, out.child_labels.size(), std::move(e2));

  std::unordered_map<std::string, std::size_t> child_col;
  for (std::size_t j = 0; j < out.child_labels.size(); ++j) child_col.emplace(out.child_labels[j], j);
  std::vector<SparseBinaryMatrix::Entry> em;
  for (std::size_t i = 0; i < out.parent_labels.size(); ++i) {
    const auto t = *hier.index_of(out.parent_labels[i]);
    for (auto c : hier.children(t)) {
      auto it = child_col.find(hier.terms()[c]);
      if (it != child_col.end()) em.emplace_back(i, it->second);
    }
  }
  out.m = SparseBinaryMatrix(out.parent_labels.size(), out.child_labels.size(), std::move(em));
  return out;
}

LabeledAssociations true_path_enrich(const LabeledAssociations& assoc, const OntologyHierarchy& hier) {
  std::vector<std::size_t> term_of(assoc.phenotypes().size());
  for (std::size_t p = 0; p < assoc.phenotypes().size(); ++p) {
    auto t = hier.index_of(assoc.phenotypes()[p]);
    if (!t) throw ReferenceError("annotated phenotype '" + assoc.phenotypes()[p] + "' is not in the hierarchy");
    term_of[p] = *t;
  }

  std::unordered_map<std::size_t, std::vector<std::size_t>> closure;
  for (auto t : term_of)
    if (!closure.count(t)) closure.emplace(t, hier.ancestors(t));

  // Adding in ascending term order registers new phenotypes in hierarchy
  // order after the existing ones.
  std::vector<std::pair<std::size_t, std::size_t>> added;  // (term, gene)
  for (const auto& [g, p] : assoc.pairs())
    for (auto a : closure.at(term_of[p])) added.emplace_back(a, g);
  std::sort(added.begin(), added.end());

  LabeledAssociations out = assoc;
  for (const auto& [a, g] : added) out.add(assoc.genes()[g], hier.terms()[a]);
  return out;
}

}  // namespace cmnmf
