#include "cmnmf/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cmnmf/clusters.hpp"
#include "cmnmf/errors.hpp"
#include "cmnmf/format.hpp"
#include "cmnmf/ontology.hpp"
#include "cmnmf/synth.hpp"

namespace cmnmf {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const std::set<std::string>& path_keys() {
  static const std::set<std::string> keys{"associations", "hierarchy", "validation_truth", "test_truth", "out"};
  return keys;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "associations", "hierarchy",  "validation_truth", "test_truth",  "truth_format", "out",
      "parent_level", "child_level", "method",          "alpha",       "beta",         "k",
      "max_iters",    "rel_tol",    "seed",             "z_threshold", "true_path",    "grid_alphas",
      "grid_betas",   "grid_repeats", "grid_metric",    "jobs",        "finalize"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("setting '" + key + "': not an integer: '" + text + "'");
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const ParseError&) {
    throw ParseError("setting '" + key + "': not a number: '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ParseError("setting '" + key + "': not a boolean: '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
  if (out.empty()) throw ParseError("setting '" + key + "': empty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

TruthFormat parse_truth_format(const std::string& text) {
  if (text == "pairs") return TruthFormat::kPairs;
  if (text == "pathways") return TruthFormat::kPathways;
  throw ParseError("truth format must be 'pairs' or 'pathways', got '" + text + "'");
}

std::string truth_format_name(TruthFormat f) { return f == TruthFormat::kPairs ? "pairs" : "pathways"; }

void require_file(const std::optional<fs::path>& p, const char* what) {
  if (!p) throw ParseError(std::string("missing required setting '") + what + "'");
  if (!fs::is_regular_file(*p)) throw ParseError(std::string(what) + " file not found: " + p->string());
}

// Files written by one command; removed again unless the command commits.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : files_) fs::remove(p, ec);
  }

  fs::path add(const fs::path& relative) {
    auto p = dir_ / relative;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    files_.push_back(p);
    return p;
  }
  void track(const std::vector<fs::path>& written) { files_.insert(files_.end(), written.begin(), written.end()); }
  const std::vector<fs::path>& files() const { return files_; }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
  bool committed_ = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error writing " + path.string());
}

struct LoadedData {
  SplitViews views;
  std::optional<HierarchyMapping> map;
};

LoadedData load_views(const RunConfig& config, std::ostream& log) {
  require_file(config.associations, "associations");
  require_file(config.hierarchy, "hierarchy");
  if (!config.parent_level || !config.child_level)
    throw ParseError("settings 'parent_level' and 'child_level' are required");

  auto assoc = parse_associations(*config.associations);
  const auto hier = parse_hierarchy(*config.hierarchy);
  if (config.true_path) assoc = true_path_enrich(assoc, hier);
  LoadedData data{split_by_levels(assoc, hier, *config.parent_level, *config.child_level), std::nullopt};
  const auto& v = data.views;
  if (!v.dropped_genes.empty())
    log << "warning: " << v.dropped_genes.size() << " gene(s) without annotations at levels " << *config.parent_level
        << "/" << *config.child_level << " dropped\n";
  if (!v.single_level_genes.empty())
    log << "warning: " << v.single_level_genes.size()
        << " gene(s) annotated at only one level kept with an all-zero row in the other view\n";
  if (!v.unplaced_phenotypes.empty())
    log << "warning: " << v.unplaced_phenotypes.size() << " annotated phenotype(s) missing from the hierarchy ignored\n";
  log << "views: n=" << v.gene_labels.size() << " m1=" << v.parent_labels.size() << " m2=" << v.child_labels.size()
      << " mapping links=" << v.m.nnz() << "\n";
  data.map.emplace(v.m);
  return data;
}

std::vector<std::string> cluster_labels(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < k; ++c) out.push_back(std::to_string(c));
  return out;
}

std::string trace_csv(double initial, const std::vector<double>& trace) {
  std::string s = "iteration,objective\n0," + format_double(initial) + "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) s += std::to_string(i + 1) + "," + format_double(trace[i]) + "\n";
  return s;
}

ordered_json settings_json(const KeyValues& kv) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

void log_dead(const std::vector<std::size_t>& dead, std::ostream& log) {
  if (dead.empty()) return;
  log << "warning: " << dead.size() << " dead cluster(s) with an all-zero G column:";
  for (auto c : dead) log << ' ' << c;
  log << "\n";
}

struct FitOutcome {
  NonnegMatrix g;
  double initial_objective;
  std::vector<double> trace;
  int iterations;
  bool converged;
  std::vector<std::size_t> dead;
};

// Fits per config.method and writes factor, cluster and trace files.
FitOutcome fit_and_write(const RunConfig& config, const HyperParams& hp, const LoadedData& data, OutputSet& outputs,
                         std::ostream& log) {
  const auto& v = data.views;
  const auto k_labels = cluster_labels(static_cast<std::size_t>(hp.k));
  std::optional<FitOutcome> outcome;
  if (config.method == Method::kNmf) {
    auto entries = v.a1.entries();
    for (const auto& [r, c] : v.a2.entries()) entries.emplace_back(r, v.a1.cols() + c);
    const SparseBinaryMatrix a(v.gene_labels.size(), v.a1.cols() + v.a2.cols(), std::move(entries));
    auto phenos = v.parent_labels;
    phenos.insert(phenos.end(), v.child_labels.begin(), v.child_labels.end());
    auto st = fit_nmf(a, hp);
    write_labeled_matrix(st.g, "gene", v.gene_labels, k_labels, outputs.add("G.tsv"));
    write_labeled_matrix(st.p, "cluster", k_labels, phenos, outputs.add("P.tsv"));
    outcome.emplace(FitOutcome{st.g, st.initial_objective, st.objective_trace, st.iterations_run, st.converged,
                               st.dead_clusters});
  } else {
    HyperParams h = hp;
    if (config.method == Method::kColNmf) h.beta = 0.0;
    auto st = fit_cmnmf(v.a1, v.a2, *data.map, h);
    write_labeled_matrix(st.g, "gene", v.gene_labels, k_labels, outputs.add("G.tsv"));
    write_labeled_matrix(st.p1, "cluster", k_labels, v.parent_labels, outputs.add("P1.tsv"));
    write_labeled_matrix(st.p2, "cluster", k_labels, v.child_labels, outputs.add("P2.tsv"));
    outcome.emplace(FitOutcome{st.g, st.initial_objective, st.objective_trace, st.iterations_run, st.converged,
                               st.dead_clusters});
  }
  log << method_name(config.method) << ": " << outcome->iterations << " iteration(s), "
      << (outcome->converged ? "converged" : "iteration budget exhausted") << ", objective "
      << format_double(outcome->trace.empty() ? outcome->initial_objective : outcome->trace.back()) << "\n";
  log_dead(outcome->dead, log);
  write_text(outputs.add("objective_trace.csv"), trace_csv(outcome->initial_objective, outcome->trace));
  return std::move(*outcome);
}

ordered_json report_json(const PairConfusion& c) {
  const auto idx = indices(c);
  ordered_json j;
  j["precision"] = idx.precision;
  j["recall"] = idx.recall;
  j["f1"] = idx.f1;
  j["jaccard"] = idx.jaccard;
  j["rand"] = idx.rand;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["tn"] = c.tn;
  return j;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "nmf") return Method::kNmf;
  if (name == "colnmf") return Method::kColNmf;
  if (name == "cmnmf") return Method::kCmnmf;
  throw ParseError("method must be nmf, colnmf or cmnmf, got '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kNmf: return "nmf";
    case Method::kColNmf: return "colnmf";
    case Method::kCmnmf: return "cmnmf";
  }
  return "cmnmf";
}

std::string canonical_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  return key;
}

KeyValues read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = canonical_key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown setting '" + key + "'");
    kv[key] = path_keys().count(key) && fs::path(value).is_relative() ? (base / value).lexically_normal().string()
                                                                       : value;
  }
  return kv;
}

RunConfig RunConfig::from_settings(const KeyValues& settings) {
  RunConfig c;
  for (const auto& [raw_key, value] : settings) {
    const auto key = canonical_key(raw_key);
    if (key == "associations") c.associations = value;
    else if (key == "hierarchy") c.hierarchy = value;
    else if (key == "validation_truth") c.validation_truth = value;
    else if (key == "test_truth") c.test_truth = value;
    else if (key == "truth_format") c.truth_format = parse_truth_format(value);
    else if (key == "out") c.out = value;
    else if (key == "parent_level") c.parent_level = static_cast<int>(parse_integer(key, value));
    else if (key == "child_level") c.child_level = static_cast<int>(parse_integer(key, value));
    else if (key == "method") c.method = parse_method(value);
    else if (key == "alpha") c.hyperparams.alpha = parse_real(key, value);
    else if (key == "beta") c.hyperparams.beta = parse_real(key, value);
    else if (key == "k") c.hyperparams.k = static_cast<int>(parse_integer(key, value));
    else if (key == "max_iters") c.hyperparams.max_iters = static_cast<int>(parse_integer(key, value));
    else if (key == "rel_tol") c.hyperparams.rel_tol = parse_real(key, value);
    else if (key == "seed") {
      const auto s = parse_integer(key, value);
      if (s < 0) throw ParseError("setting 'seed' must be >= 0");
      c.hyperparams.seed = static_cast<std::uint64_t>(s);
    }
    else if (key == "z_threshold") c.z_threshold = parse_real(key, value);
    else if (key == "true_path") c.true_path = parse_bool(key, value);
    else if (key == "grid_alphas") c.grid_alphas = parse_list(key, value);
    else if (key == "grid_betas") c.grid_betas = parse_list(key, value);
    else if (key == "grid_repeats") c.grid_repeats = static_cast<int>(parse_integer(key, value));
    else if (key == "grid_metric") {
      try {
        c.grid_metric = parse_metric(value);
      } catch (const DomainError& e) {
        throw ParseError(e.what());
      }
    }
    else if (key == "jobs") {
      const auto j = parse_integer(key, value);
      if (j < 1) throw ParseError("setting 'jobs' must be >= 1");
      c.jobs = static_cast<unsigned>(j);
    }
    else if (key == "finalize") c.finalize = parse_bool(key, value);
    else throw ParseError("unknown setting '" + key + "'");
  }
  try {
    c.hyperparams.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid hyperparameters: ") + e.what());
  }
  return c;
}

KeyValues RunConfig::to_settings() const {
  KeyValues kv;
  auto put_path = [&](const char* key, const std::optional<fs::path>& p) {
    if (p) kv[key] = p->string();
  };
  put_path("associations", associations);
  put_path("hierarchy", hierarchy);
  put_path("validation_truth", validation_truth);
  put_path("test_truth", test_truth);
  kv["truth_format"] = truth_format_name(truth_format);
  kv["out"] = out.string();
  if (parent_level) kv["parent_level"] = std::to_string(*parent_level);
  if (child_level) kv["child_level"] = std::to_string(*child_level);
  kv["method"] = method_name(method);
  kv["alpha"] = format_double(hyperparams.alpha);
  kv["beta"] = format_double(hyperparams.beta);
  kv["k"] = std::to_string(hyperparams.k);
  kv["max_iters"] = std::to_string(hyperparams.max_iters);
  kv["rel_tol"] = format_double(hyperparams.rel_tol);
  kv["seed"] = std::to_string(hyperparams.seed);
  kv["z_threshold"] = format_double(z_threshold);
  kv["true_path"] = true_path ? "true" : "false";
  kv["grid_alphas"] = join(grid_alphas);
  kv["grid_betas"] = join(grid_betas);
  kv["grid_repeats"] = std::to_string(grid_repeats);
  kv["grid_metric"] = metric_name(grid_metric);
  kv["jobs"] = std::to_string(jobs);
  kv["finalize"] = finalize ? "true" : "false";
  return kv;
}

void write_labeled_matrix(const NonnegMatrix& m, const std::string& corner, const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& col_labels, const fs::path& path) {
  if (row_labels.size() != m.rows() || col_labels.size() != m.cols())
    throw ShapeError("label counts do not match the matrix shape");
  std::string s = corner;
  for (const auto& c : col_labels) s += "\t" + c;
  s += "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    s += row_labels[r];
    for (double v : m.row(r)) s += "\t" + format_double(v);
    s += "\n";
  }
  write_text(path, s);
}

void write_clusters(const ClusterAssignment& assign, const fs::path& path) {
  std::string s = "# gene\tcluster_index\n";
  for (std::size_t i = 0; i < assign.gene_labels.size(); ++i)
    for (auto c : assign.memberships[i]) s += assign.gene_labels[i] + "\t" + std::to_string(c) + "\n";
  write_text(path, s);
}

ClusterAssignment read_clusters(const fs::path& path) {
  ClusterAssignment assign;
  std::map<std::string, std::size_t> row;
  for (const auto& [gene, cluster] : read_two_column_tsv(path)) {
    const auto c = static_cast<std::size_t>(parse_integer("cluster_index", cluster));
    auto [it, inserted] = row.try_emplace(gene, assign.gene_labels.size());
    if (inserted) {
      assign.gene_labels.push_back(gene);
      assign.memberships.emplace_back();
    }
    auto& m = assign.memberships[it->second];
    if (std::find(m.begin(), m.end(), c) == m.end()) m.insert(std::upper_bound(m.begin(), m.end(), c), c);
    assign.k = std::max(assign.k, c + 1);
  }
  return assign;
}

GroundTruthPairs load_truth(const fs::path& path, TruthFormat format, std::vector<std::string> universe) {
  if (format == TruthFormat::kPathways) return pathways_to_pairs(parse_pathways(path), std::move(universe));
  return GroundTruthPairs(std::move(universe), parse_truth_pairs(path));
}

std::string metrics_json(const PairConfusion& c) { return report_json(c).dump(2) + "\n"; }

std::string metrics_csv(const std::string& method, const PairConfusion& c) {
  const auto idx = indices(c);
  return "method,f1,precision,recall,jaccard,rand\n" + method + "," + format_double(idx.f1) + "," +
         format_double(idx.precision) + "," + format_double(idx.recall) + "," + format_double(idx.jaccard) + "," +
         format_double(idx.rand) + "\n";
}

void cmd_run(const RunConfig& config, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const auto data = load_views(config, log);
  std::optional<fs::path> truth_path = config.test_truth ? config.test_truth : config.validation_truth;
  if (truth_path && !fs::is_regular_file(*truth_path)) throw ParseError("truth file not found: " + truth_path->string());

  OutputSet outputs(config.out);
  const auto fit = fit_and_write(config, config.hyperparams, data, outputs, log);
  const auto assign = extract_clusters(fit.g, data.views.gene_labels, config.z_threshold);
  write_clusters(assign, outputs.add("clusters.tsv"));

  ordered_json manifest;
  if (truth_path) {
    const auto truth = load_truth(*truth_path, config.truth_format, data.views.gene_labels);
    const auto c = confusion(assign, truth);
    write_text(outputs.add("metrics.json"), metrics_json(c));
    write_text(outputs.add("metrics.csv"), metrics_csv(method_name(config.method), c));
  } else {
    log << "note: no truth file configured; metric report skipped\n";
  }

  const auto manifest_path = outputs.add("manifest.json");
  manifest["version"] = kVersion;
  manifest["command"] = "run";
  manifest["config"] = settings_json(config.to_settings());
  manifest["seed"] = config.hyperparams.seed;
  if (truth_path) manifest["metrics_truth"] = truth_path->string();
  manifest["iterations"] = fit.iterations;
  manifest["converged"] = fit.converged;
  manifest["dead_clusters"] = fit.dead;
  manifest["genes"] = data.views.gene_labels.size();
  manifest["dropped_genes"] = data.views.dropped_genes;
  manifest["single_level_genes"] = data.views.single_level_genes.size();
  std::vector<std::string> files;
  for (const auto& f : outputs.files()) files.push_back(f.filename().string());
  manifest["outputs"] = files;
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(manifest_path, manifest.dump(2) + "\n");
  outputs.commit();
}

void cmd_grid(const RunConfig& config, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  if (config.method != Method::kCmnmf) throw ParseError("grid search tunes alpha and beta of method cmnmf only");
  require_file(config.validation_truth, "validation_truth");
  if (config.finalize) require_file(config.test_truth, "test_truth");
  const auto data = load_views(config, log);
  const auto& v = data.views;
  const auto validation = load_truth(*config.validation_truth, config.truth_format, v.gene_labels);

  GridSpec spec;
  spec.alphas = config.grid_alphas;
  spec.betas = config.grid_betas;
  spec.repeats = config.grid_repeats;
  spec.base = config.hyperparams;
  spec.metric = config.grid_metric;
  spec.z_threshold = config.z_threshold;
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid grid: ") + e.what());
  }

  OutputSet outputs(config.out);
  const auto result = run_grid(v.a1, v.a2, *data.map, validation, spec, config.jobs);

  emit_heatmap(result, outputs.add("heatmap.csv"));
  std::string cells = "alpha,beta,repeat,seed,value,iterations,converged,error\n";
  for (const auto& c : result.cells) {
    for (std::size_t r = 0; r < c.repeats.size(); ++r) {
      const auto& rec = c.repeats[r];
      std::string err = rec.error;
      std::replace(err.begin(), err.end(), ',', ';');
      cells += format_double(c.alpha) + "," + format_double(c.beta) + "," + std::to_string(r) + "," +
               std::to_string(rec.seed) + "," + (err.empty() ? format_double(rec.value) : "") + "," +
               std::to_string(rec.iterations) + "," + (rec.converged ? "1" : "0") + "," + err + "\n";
    }
    if (c.failed) log << "cell alpha=" << format_double(c.alpha) << " beta=" << format_double(c.beta) << " failed\n";
  }
  write_text(outputs.add("grid_cells.csv"), cells);

  const auto& best = result.best_cell();
  ordered_json best_json;
  best_json["alpha"] = best.alpha;
  best_json["beta"] = best.beta;
  best_json["metric"] = metric_name(spec.metric);
  best_json["mean"] = best.mean;
  best_json["std"] = best.std;
  write_text(outputs.add("best_params.json"), best_json.dump(2) + "\n");
  log << "best cell: alpha=" << format_double(best.alpha) << " beta=" << format_double(best.beta) << " mean "
      << metric_name(spec.metric) << "=" << format_double(best.mean) << "\n";

  ordered_json manifest;
  if (config.finalize) {
    RunConfig final_config = config;
    final_config.hyperparams.alpha = best.alpha;
    final_config.hyperparams.beta = best.beta;
    const auto fit = fit_and_write(final_config, final_config.hyperparams, data, outputs, log);
    const auto assign = extract_clusters(fit.g, v.gene_labels, config.z_threshold);
    write_clusters(assign, outputs.add("clusters.tsv"));
    const auto test = load_truth(*config.test_truth, config.truth_format, v.gene_labels);
    const auto cv = confusion(assign, validation);
    const auto ct = confusion(assign, test);
    write_text(outputs.add("validation_metrics.json"), metrics_json(cv));
    write_text(outputs.add("test_metrics.json"), metrics_json(ct));
    write_text(outputs.add("test_metrics.csv"), metrics_csv("cmnmf", ct));
  }

  const auto manifest_path = outputs.add("manifest.json");
  manifest["version"] = kVersion;
  manifest["command"] = "grid";
  manifest["config"] = settings_json(config.to_settings());
  manifest["seed"] = config.hyperparams.seed;
  manifest["finalized"] = config.finalize;
  std::vector<std::string> files;
  for (const auto& f : outputs.files()) files.push_back(fs::relative(f, config.out).string());
  manifest["outputs"] = files;
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(manifest_path, manifest.dump(2) + "\n");
  outputs.commit();
}

void cmd_synth(const SynthParams& params, std::ostream& log) {
  const auto inst = plant(params.n, params.k, params.phenos_parent, params.phenos_child, params.noise, params.seed);
  OutputSet outputs(params.out);
  outputs.track(write_instance_files(inst, params.out));
  std::string cfg;
  cfg += "# planted instance: n=" + std::to_string(params.n) + " k=" + std::to_string(params.k) +
         " noise=" + format_double(params.noise) + " seed=" + std::to_string(params.seed) + "\n";
  cfg += "associations = associations.tsv\n";
  cfg += "hierarchy = hierarchy.tsv\n";
  cfg += "validation_truth = pathways.tsv\n";
  cfg += "test_truth = pathways.tsv\n";
  cfg += "truth_format = pathways\n";
  cfg += "parent_level = 1\n";
  cfg += "child_level = 2\n";
  cfg += "k = " + std::to_string(params.k) + "\n";
  write_text(outputs.add("config.txt"), cfg);
  log << "wrote planted instance (" << inst.n << " genes, " << inst.m1 << " parent and " << inst.m2
      << " child phenotypes) to " << params.out.string() << "\n";
  outputs.commit();
}

void cmd_eval(const EvalParams& params, std::ostream& report, std::ostream& log) {
  const auto assign = read_clusters(params.clusters);
  std::vector<std::string> universe;
  if (params.universe) {
    for (const auto& line : [&] {
           std::ifstream in(*params.universe);
           if (!in) throw ParseError("cannot open " + params.universe->string());
           std::vector<std::string> lines;
           std::string l;
           while (std::getline(in, l)) {
             l = trim(l);
             if (!l.empty() && l.front() != '#') lines.push_back(l.substr(0, l.find('\t')));
           }
           return lines;
         }()) {
      if (std::find(universe.begin(), universe.end(), line) == universe.end()) universe.push_back(line);
    }
  } else {
    universe = assign.gene_labels;
    log << "note: universe taken from the " << universe.size() << " clustered gene(s)\n";
  }
  const auto truth = load_truth(params.truth, params.truth_format, universe);
  const auto c = confusion(assign, truth);
  report << metrics_json(c);
  if (params.out) {
    OutputSet outputs(*params.out);
    write_text(outputs.add("metrics.json"), metrics_json(c));
    write_text(outputs.add("metrics.csv"), metrics_csv(params.method, c));
    outputs.commit();
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  return kExitInput;
}

}  // namespace cmnmf
