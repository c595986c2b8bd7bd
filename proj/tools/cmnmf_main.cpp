#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "cmnmf/cli.hpp"
#include "cmnmf/errors.hpp"

namespace {

using cmnmf::KeyValues;

// Flags that map one-to-one onto config keys. Values given on the command
// line override the config file.
struct ConfigFlags {
  std::string config;
  KeyValues overrides;
  bool finalize = false;
  bool true_path = false;

  void attach(CLI::App& app, bool grid) {
    app.add_option("--config", config, "key = value config file");
    auto opt = [&](const std::string& flag, const std::string& help) {
      app.add_option_function<std::string>(
          flag, [this, flag](const std::string& v) { overrides[cmnmf::canonical_key(flag.substr(2))] = v; }, help);
    };
    opt("--associations", "gene<TAB>phenotype association file");
    opt("--hierarchy", "ontology hierarchy (.obo subset or parent<TAB>child TSV)");
    opt("--validation-truth", "truth file used for scoring grid cells");
    opt("--test-truth", "truth file used for the final report");
    opt("--truth-format", "pairs or pathways");
    opt("--out", "output directory");
    opt("--parent-level", "hierarchy level of the first view");
    opt("--child-level", "hierarchy level of the second view (parent + 1)");
    opt("--method", "nmf, colnmf or cmnmf");
    opt("--alpha", "weight of the second view");
    opt("--beta", "weight of the hierarchy consistency penalty");
    opt("--k", "number of clusters");
    opt("--max-iters", "iteration budget");
    opt("--rel-tol", "relative objective change for convergence");
    opt("--seed", "random seed");
    opt("--z-threshold", "row z-score needed for cluster membership");
    opt("--jobs", "worker threads");
    app.add_flag("--true-path", true_path, "propagate annotations to ancestors before splitting");
    if (grid) {
      opt("--grid-alphas", "comma-separated alpha values");
      opt("--grid-betas", "comma-separated beta values");
      opt("--repeats", "random restarts per cell");
      opt("--metric", "selection metric: f1, precision, recall, jaccard or rand");
      app.add_flag("--finalize", finalize, "refit at the best cell and report on the test truth");
    }
  }

  cmnmf::RunConfig build() const {
    KeyValues kv;
    kv["jobs"] = std::to_string(std::max(1u, std::thread::hardware_concurrency()));
    if (!config.empty())
      for (const auto& [k, v] : cmnmf::read_config_file(config)) kv[k] = v;
    for (const auto& [k, v] : overrides) {
      if (k == "repeats") kv["grid_repeats"] = v;
      else if (k == "metric") kv["grid_metric"] = v;
      else kv[k] = v;
    }
    if (true_path) kv["true_path"] = "true";
    if (finalize) kv["finalize"] = "true";
    return cmnmf::RunConfig::from_settings(kv);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistent multiple NMF for gene module mining"};
  app.set_version_flag("--version", cmnmf::kVersion);
  app.require_subcommand(1);

  ConfigFlags run_flags;
  auto* run = app.add_subcommand("run", "fit one model and write factors, clusters and metrics");
  run_flags.attach(*run, false);

  ConfigFlags grid_flags;
  auto* grid = app.add_subcommand("grid", "alpha/beta grid search scored on validation truth");
  grid_flags.attach(*grid, true);

  cmnmf::SynthParams synth_params;
  auto* synth = app.add_subcommand("synth", "write a planted-partition instance");
  synth->add_option("--n", synth_params.n, "genes (multiple of k)");
  synth->add_option("--k", synth_params.k, "planted clusters");
  synth->add_option("--phenos-parent", synth_params.phenos_parent, "parent phenotypes per cluster");
  synth->add_option("--phenos-child", synth_params.phenos_child, "child phenotypes per cluster");
  synth->add_option("--noise", synth_params.noise, "bit flip probability");
  synth->add_option("--seed", synth_params.seed, "random seed");
  synth->add_option("--out", synth_params.out, "output directory");

  cmnmf::EvalParams eval_params;
  std::string eval_format = "pairs";
  std::string eval_universe, eval_out;
  auto* eval = app.add_subcommand("eval", "score a cluster file against truth pairs or pathways");
  eval->add_option("--clusters", eval_params.clusters, "gene<TAB>cluster_index file")->required();
  eval->add_option("--truth", eval_params.truth, "truth file")->required();
  eval->add_option("--truth-format", eval_format, "pairs or pathways");
  eval->add_option("--universe", eval_universe, "gene list, one per line");
  eval->add_option("--out", eval_out, "directory for metrics.json and metrics.csv");
  eval->add_option("--method", eval_params.method, "method label for metrics.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cmnmf::kExitOk : cmnmf::kExitInput;
  }

  try {
    if (run->parsed()) {
      cmnmf::cmd_run(run_flags.build(), std::cerr);
    } else if (grid->parsed()) {
      cmnmf::cmd_grid(grid_flags.build(), std::cerr);
    } else if (synth->parsed()) {
      cmnmf::cmd_synth(synth_params, std::cerr);
    } else if (eval->parsed()) {
      if (eval_format == "pathways") eval_params.truth_format = cmnmf::TruthFormat::kPathways;
      else if (eval_format != "pairs") throw cmnmf::ParseError("truth format must be 'pairs' or 'pathways'");
      if (!eval_universe.empty()) eval_params.universe = eval_universe;
      if (!eval_out.empty()) eval_params.out = eval_out;
      cmnmf::cmd_eval(eval_params, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmnmf::exit_code_for(e);
  }
  return cmnmf::kExitOk;
}
