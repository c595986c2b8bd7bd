#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmnmf/factorizer.hpp"
#include "cmnmf/grid.hpp"
#include "cmnmf/metrics.hpp"

namespace cmnmf {

inline constexpr const char* kVersion = "0.1.0";

enum class Method { kNmf, kColNmf, kCmnmf };
enum class TruthFormat { kPairs, kPathways };

Method parse_method(const std::string& name);
std::string method_name(Method m);

/// Flat `key = value` settings. Keys match the long flag names with dashes
/// or underscores; `#` starts a comment.
using KeyValues = std::map<std::string, std::string>;

/// Reads a config file. Throws ParseError on malformed lines or unknown keys.
/// Relative paths inside the file are resolved against its directory.
KeyValues read_config_file(const std::filesystem::path& path);

/// Canonical key spelling: lower case with underscores.
std::string canonical_key(std::string key);

struct RunConfig {
  std::optional<std::filesystem::path> associations;
  std::optional<std::filesystem::path> hierarchy;
  std::optional<std::filesystem::path> validation_truth;
  std::optional<std::filesystem::path> test_truth;
  TruthFormat truth_format = TruthFormat::kPairs;
  std::filesystem::path out = "cmnmf_out";
  std::optional<int> parent_level;
  std::optional<int> child_level;
  HyperParams hyperparams;
  Method method = Method::kCmnmf;
  double z_threshold = kDefaultZThreshold;
  bool true_path = false;
  std::vector<double> grid_alphas = default_grid_axis();
  std::vector<double> grid_betas = default_grid_axis();
  int grid_repeats = 10;
  Metric grid_metric = Metric::kF1;
  unsigned jobs = 1;
  bool finalize = false;

  /// Builds from settings; unknown keys and bad values throw ParseError.
  static RunConfig from_settings(const KeyValues& settings);
  /// Settings that regenerate this config, used for the run manifest.
  KeyValues to_settings() const;
};

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

// Each command writes only under its output directory and removes the files
// it wrote if it fails. Errors propagate as exceptions; exit_code_for maps
// them to process exit codes.
void cmd_run(const RunConfig& config, std::ostream& log);
void cmd_grid(const RunConfig& config, std::ostream& log);

struct SynthParams {
  std::size_t n = 9;
  std::size_t k = 3;
  std::size_t phenos_parent = 2;
  std::size_t phenos_child = 3;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path out = "synth";
};

/// Writes the planted instance in ingest formats plus a ready-to-run
/// config.txt pointing at them.
void cmd_synth(const SynthParams& params, std::ostream& log);

struct EvalParams {
  std::filesystem::path clusters;
  std::filesystem::path truth;
  TruthFormat truth_format = TruthFormat::kPairs;
  std::optional<std::filesystem::path> universe;  // one gene per line
  std::optional<std::filesystem::path> out;
  std::string method = "clusters";
};

/// Scores a cluster TSV against a truth file; prints the JSON report and
/// optionally writes metrics.json / metrics.csv under `out`.
void cmd_eval(const EvalParams& params, std::ostream& report, std::ostream& log);

int exit_code_for(const std::exception& e);

// File formats shared by the commands.

/// `gene<TAB>cluster_index` per membership.
void write_clusters(const ClusterAssignment& assign, const std::filesystem::path& path);
ClusterAssignment read_clusters(const std::filesystem::path& path);

/// Matrix with a corner label, column labels in the header row and one
/// labelled row per matrix row.
void write_labeled_matrix(const NonnegMatrix& m, const std::string& corner,
                          const std::vector<std::string>& row_labels, const std::vector<std::string>& col_labels,
                          const std::filesystem::path& path);

GroundTruthPairs load_truth(const std::filesystem::path& path, TruthFormat format,
                            std::vector<std::string> universe);

std::string metrics_json(const PairConfusion& c);
std::string metrics_csv(const std::string& method, const PairConfusion& c);

}  // namespace cmnmf
