#pragma once

// Experiment harness: JSON-configured runs that land in
// results/<name>/{config.json, trials.csv, summary.json}. Per-trial seeds are
// split(split(master_seed, cell_hash), trial_index), so the CSV bytes do not
// depend on the worker count and any single trial can be replayed alone.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "l1synth/ensembles.hpp"
#include "l1synth/nsp.hpp"
#include "l1synth/solver.hpp"

namespace l1synth {

// Configuration mistakes (bad JSON, unknown keys, invalid values). The CLI
// maps these to exit code 2; numerical aborts to 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DictSpec {
  enum class Kind { identity, random, file } kind = Kind::identity;
  EntryLaw law;  // random only
  long d = 0;    // random only; identity takes d = n
  std::string path;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string kind;
  std::string name;

  long n = 0, d = 0;
  int s = 0;
  long m = 0;
  std::vector<long> m_grid;
  std::vector<EntryLaw> ensembles;
  DictSpec dict;
  std::vector<double> eps_grid{0.0};
  std::vector<double> tail_weight_grid{0.0};
  long trials_per_cell = 100;
  std::uint64_t master_seed = 1;
  SolverConfig solver;
  double success_tol = 1e-4;

  // nsp_corpus
  double cert_tol = 1e-7;
  long oracle_instances = 2000;
  double oracle_tol = 1e-6;
  std::vector<double> gamma_grid;
  long tau_samples = 200;
  int tau_refine = 50;

  // lemma51
  std::vector<long> n_grid;
  std::vector<int> s_grid;
  std::vector<std::string> laws;  // entry-law names or "student_t_auto"
  double bound_constant = 3.0;
  long n_trials = 1000;

  // khintchine
  double p_max = 6.0;
  std::string direction = "random";  // or "e1"

  // width / lowerbound
  double gamma = 0.5;
  bool cone_factor = true;
  double A = 0.25;
  double t = 0.0;
  int n_reps = 100;
  long n_cone_samples = 200;
  int q_dirs = 100;
  long q_samples = 1000;
  long width_trials = 1000;
};

// Strict parse: unknown keys (top level and nested) raise ConfigError; every
// value is range checked. `kind` decides which keys are legal.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

struct RunResult {
  std::string out_dir;
  nlohmann::json summary;
};

// Dispatches on cfg.kind. threads >= 1; output bytes are identical for any
// thread count. out_root defaults to "results".
RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::string& out_root = "results",
                         int threads = 1);

nlohmann::json nsp_report_to_json(const NspReport& rep);

// Digest of a result directory (summary.json) for the `report` subcommand.
std::string format_report(const std::string& result_dir);

}  // namespace l1synth
