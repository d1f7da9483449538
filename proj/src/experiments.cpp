#include "l1synth/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "l1synth/dictionary.hpp"
#include "l1synth/smallball.hpp"

namespace l1synth {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string g17(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  size_t h = v.size() / 2;
  return (v.size() % 2) ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

void parallel_for(long n_tasks, int threads,
                  const std::function<void(long)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n_tasks <= 1) {
    for (long i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    while (!failed.load()) {
      long i = next.fetch_add(1);
      if (i >= n_tasks) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// ---- config parsing ----

void check_keys(const json& j, const std::string& ctx,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(ctx + ": unknown key \"" + it.key() + "\"");
}

double get_num(const json& j, const std::string& key, double dflt,
               double lo, double hi) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number())
    throw ConfigError(key + ": expected a number");
  double v = j[key].get<double>();
  if (!(v >= lo && v <= hi))
    throw ConfigError(key + ": value " + g17(v) + " out of range");
  return v;
}

long get_int(const json& j, const std::string& key, long dflt, long lo,
             long hi) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer())
    throw ConfigError(key + ": expected an integer");
  long v = j[key].get<long>();
  if (v < lo || v > hi)
    throw ConfigError(key + ": value " + std::to_string(v) + " out of range");
  return v;
}

EntryLaw parse_law(const json& j, const std::string& ctx) {
  EntryLaw law;
  std::string name;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object()) {
    check_keys(j, ctx, {"law", "dof"});
    if (!j.contains("law"))
      throw ConfigError(ctx + ": missing \"law\"");
    name = j["law"].get<std::string>();
    law.dof = static_cast<int>(get_int(j, "dof", 0, 1, 1000000));
  } else {
    throw ConfigError(ctx + ": expected a law name or object");
  }
  if (name == "gaussian") law.kind = Law::gaussian;
  else if (name == "rademacher") law.kind = Law::rademacher;
  else if (name == "laplace") law.kind = Law::laplace;
  else if (name == "cauchy") law.kind = Law::cauchy;
  else if (name == "student_t") {
    law.kind = Law::student_t;
    if (law.dof < 1) throw ConfigError(ctx + ": student_t needs dof >= 1");
  } else {
    throw ConfigError(ctx + ": unknown law \"" + name + "\"");
  }
  if (law.kind != Law::student_t && law.dof != 0)
    throw ConfigError(ctx + ": dof only applies to student_t");
  return law;
}

DictSpec parse_dict(const json& j) {
  DictSpec d;
  check_keys(j, "dict", {"type", "law", "dof", "d", "path"});
  std::string type = j.contains("type") ? j["type"].get<std::string>()
                                        : std::string("identity");
  if (type == "identity") {
    d.kind = DictSpec::Kind::identity;
    if (j.contains("law") || j.contains("d") || j.contains("path"))
      throw ConfigError("dict: identity takes no further keys");
  } else if (type == "random") {
    d.kind = DictSpec::Kind::random;
    if (!j.contains("law") || !j.contains("d"))
      throw ConfigError("dict: random needs \"law\" and \"d\"");
    json lawj = j.contains("dof")
                    ? json{{"law", j["law"]}, {"dof", j["dof"]}}
                    : json{{"law", j["law"]}};
    d.law = parse_law(lawj, "dict.law");
    d.d = get_int(j, "d", 0, 1, 1000000);
  } else if (type == "file") {
    d.kind = DictSpec::Kind::file;
    if (!j.contains("path")) throw ConfigError("dict: file needs \"path\"");
    d.path = j["path"].get<std::string>();
  } else {
    throw ConfigError("dict: unknown type \"" + type + "\"");
  }
  return d;
}

SolverConfig parse_solver(const json& j) {
  SolverConfig s;
  check_keys(j, "solver",
             {"tol_feas", "tol_change", "max_iters", "step_ratio",
              "norm_estimate_iters"});
  s.tol_feas = get_num(j, "tol_feas", s.tol_feas, 0.0, 1.0);
  s.tol_change = get_num(j, "tol_change", s.tol_change, 0.0, 1.0);
  s.max_iters = get_int(j, "max_iters", s.max_iters, 1, 100000000);
  s.step_ratio = get_num(j, "step_ratio", s.step_ratio, 1e-6, 0.999999);
  s.norm_estimate_iters = static_cast<int>(
      get_int(j, "norm_estimate_iters", s.norm_estimate_iters, 1, 10000000));
  return s;
}

std::vector<double> get_num_list(const json& j, const std::string& key,
                                 double lo, double hi) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw ConfigError(key + ": expected a non-empty array");
  std::vector<double> out;
  for (const auto& e : j[key]) {
    if (!e.is_number()) throw ConfigError(key + ": expected numbers");
    double v = e.get<double>();
    if (!(v >= lo && v <= hi))
      throw ConfigError(key + ": value " + g17(v) + " out of range");
    out.push_back(v);
  }
  return out;
}

std::vector<long> get_int_list(const json& j, const std::string& key, long lo,
                               long hi) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw ConfigError(key + ": expected a non-empty array");
  std::vector<long> out;
  for (const auto& e : j[key]) {
    if (!e.is_number_integer()) throw ConfigError(key + ": expected integers");
    long v = e.get<long>();
    if (v < lo || v > hi)
      throw ConfigError(key + ": value " + std::to_string(v) +
                        " out of range");
    out.push_back(v);
  }
  return out;
}

std::vector<EntryLaw> parse_ensembles(const json& j) {
  std::vector<EntryLaw> out;
  if (j.contains("ensemble") && j.contains("ensembles"))
    throw ConfigError("give either \"ensemble\" or \"ensembles\", not both");
  if (j.contains("ensemble")) {
    out.push_back(parse_law(j["ensemble"], "ensemble"));
  } else if (j.contains("ensembles")) {
    if (!j["ensembles"].is_array() || j["ensembles"].empty())
      throw ConfigError("ensembles: expected a non-empty array");
    for (const auto& e : j["ensembles"])
      out.push_back(parse_law(e, "ensembles[]"));
  } else {
    throw ConfigError("missing \"ensemble\"");
  }
  return out;
}

std::uint64_t parse_seed(const json& j) {
  if (!j.contains("master_seed")) return 1;
  if (!j["master_seed"].is_number_integer() &&
      !j["master_seed"].is_number_unsigned())
    throw ConfigError("master_seed: expected an integer");
  return j["master_seed"].get<std::uint64_t>();
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("config: missing \"kind\"");
  ExperimentConfig cfg;
  cfg.kind = j["kind"].get<std::string>();
  static const std::set<std::string> kinds{
      "phase", "noise", "nsp_corpus", "lemma51",
      "khintchine", "width", "lowerbound"};
  if (!kinds.count(cfg.kind))
    throw ConfigError("config: unknown kind \"" + cfg.kind + "\"");

  cfg.schema_version =
      static_cast<int>(get_int(j, "schema_version", 1, 1, 1));
  cfg.name = j.contains("name") ? j.at("name").get<std::string>() : cfg.kind;
  if (cfg.name.empty() ||
      cfg.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("name: must be a non-empty path-free string");
  cfg.master_seed = parse_seed(j);

  const std::set<std::string> common{"schema_version", "kind", "name",
                                     "master_seed"};
  auto with = [&common](std::initializer_list<const char*> extra) {
    std::set<std::string> s = common;
    for (const char* e : extra) s.insert(e);
    return s;
  };

  if (cfg.kind == "phase" || cfg.kind == "noise") {
    if (cfg.kind == "phase") {
      check_keys(j, "config",
                 with({"n", "s", "m_grid", "ensemble", "ensembles", "dict",
                       "eps_grid", "trials_per_cell", "solver",
                       "success_tol"}));
      cfg.m_grid = get_int_list(j, "m_grid", 1, 1000000);
    } else {
      check_keys(j, "config",
                 with({"n", "s", "m", "ensemble", "ensembles", "dict",
                       "eps_grid", "tail_weight_grid", "trials_per_cell",
                       "solver", "success_tol"}));
      cfg.m = get_int(j, "m", 0, 1, 1000000);
      if (cfg.m == 0) throw ConfigError("missing \"m\"");
      if (j.contains("tail_weight_grid"))
        cfg.tail_weight_grid = get_num_list(j, "tail_weight_grid", 0.0, 1e6);
    }
    cfg.n = get_int(j, "n", 0, 1, 1000000);
    if (cfg.n == 0) throw ConfigError("missing \"n\"");
    cfg.s = static_cast<int>(get_int(j, "s", 0, 1, cfg.n));
    if (cfg.s == 0) throw ConfigError("missing \"s\"");
    cfg.ensembles = parse_ensembles(j);
    cfg.dict = j.contains("dict") ? parse_dict(j["dict"]) : DictSpec{};
    if (j.contains("eps_grid"))
      cfg.eps_grid = get_num_list(j, "eps_grid", 0.0, 1e12);
    cfg.trials_per_cell = get_int(j, "trials_per_cell", 100, 1, 100000000);
    if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
    cfg.success_tol = get_num(j, "success_tol", 1e-4, 0.0, 1.0);
  } else if (cfg.kind == "nsp_corpus") {
    check_keys(j, "config",
               with({"n", "s", "m", "ensemble", "dict", "trials_per_cell",
                     "cert_tol", "oracle_instances", "oracle_tol",
                     "gamma_grid", "tau_samples", "tau_refine", "solver"}));
    cfg.n = get_int(j, "n", 0, 1, 100000);
    if (cfg.n == 0) throw ConfigError("missing \"n\"");
    cfg.s = static_cast<int>(get_int(j, "s", 0, 1, cfg.n));
    if (cfg.s == 0) throw ConfigError("missing \"s\"");
    cfg.m = get_int(j, "m", 0, 1, 100000);
    if (cfg.m == 0) throw ConfigError("missing \"m\"");
    cfg.ensembles = parse_ensembles(j);
    cfg.dict = j.contains("dict") ? parse_dict(j["dict"]) : DictSpec{};
    cfg.trials_per_cell = get_int(j, "trials_per_cell", 100, 1, 1000000);
    cfg.cert_tol = get_num(j, "cert_tol", 1e-7, 0.0, 0.5);
    cfg.oracle_instances = get_int(j, "oracle_instances", 2000, 1, 100000000);
    cfg.oracle_tol = get_num(j, "oracle_tol", 1e-6, 0.0, 1.0);
    if (j.contains("gamma_grid"))
      cfg.gamma_grid = get_num_list(j, "gamma_grid", 1e-9, 1.0);
    cfg.tau_samples = get_int(j, "tau_samples", 200, 1, 100000000);
    cfg.tau_refine =
        static_cast<int>(get_int(j, "tau_refine", 50, 0, 1000000));
    if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
  } else if (cfg.kind == "lemma51") {
    check_keys(j, "config",
               with({"n_grid", "s_grid", "laws", "n_trials",
                     "bound_constant"}));
    cfg.n_grid = get_int_list(j, "n_grid", 2, 10000000);
    for (long v : get_int_list(j, "s_grid", 1, 10000000))
      cfg.s_grid.push_back(static_cast<int>(v));
    if (!j.contains("laws") || !j["laws"].is_array() || j["laws"].empty())
      throw ConfigError("laws: expected a non-empty array");
    for (const auto& e : j["laws"]) {
      if (e.is_string() && e.get<std::string>() == "student_t_auto") {
        cfg.laws.push_back("student_t_auto");
      } else {
        parse_law(e, "laws[]");  // validation only
        cfg.laws.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      }
    }
    cfg.n_trials = get_int(j, "n_trials", 1000, 1, 100000000);
    cfg.bound_constant = get_num(j, "bound_constant", 3.0, 1e-9, 1e9);
  } else if (cfg.kind == "khintchine") {
    check_keys(j, "config",
               with({"ensemble", "d", "m", "p_max", "n_trials", "direction"}));
    cfg.ensembles = parse_ensembles(j);
    cfg.d = get_int(j, "d", 0, 1, 1000000);
    if (cfg.d == 0) throw ConfigError("missing \"d\"");
    cfg.m = get_int(j, "m", 0, 1, 1000000);
    if (cfg.m == 0) throw ConfigError("missing \"m\"");
    cfg.p_max = get_num(j, "p_max", 6.0, 2.0, 64.0);
    cfg.n_trials = get_int(j, "n_trials", 100000, 10000, 100000000);
    if (j.contains("direction")) {
      cfg.direction = j["direction"].get<std::string>();
      if (cfg.direction != "random" && cfg.direction != "e1")
        throw ConfigError("direction: \"random\" or \"e1\"");
    }
  } else if (cfg.kind == "width") {
    check_keys(j, "config",
               with({"ensemble", "dict", "n", "m", "s", "gamma",
                     "cone_factor", "n_trials"}));
    cfg.ensembles = parse_ensembles(j);
    cfg.n = get_int(j, "n", 0, 1, 1000000);
    if (cfg.n == 0) throw ConfigError("missing \"n\"");
    cfg.dict = j.contains("dict") ? parse_dict(j["dict"]) : DictSpec{};
    cfg.m = get_int(j, "m", 0, 1, 1000000);
    if (cfg.m == 0) throw ConfigError("missing \"m\"");
    cfg.s = static_cast<int>(get_int(j, "s", 0, 1, cfg.n));
    if (cfg.s == 0) throw ConfigError("missing \"s\"");
    cfg.gamma = get_num(j, "gamma", 0.5, 1e-9, 1.0);
    if (j.contains("cone_factor")) {
      if (!j["cone_factor"].is_boolean())
        throw ConfigError("cone_factor: expected a boolean");
      cfg.cone_factor = j["cone_factor"].get<bool>();
    }
    cfg.n_trials = get_int(j, "n_trials", 1000, 1, 100000000);
  } else if (cfg.kind == "lowerbound") {
    check_keys(j, "config",
               with({"ensemble", "dict", "n", "m", "s", "gamma", "A", "t",
                     "n_reps", "n_cone_samples", "q_dirs", "q_samples",
                     "width_trials"}));
    cfg.ensembles = parse_ensembles(j);
    cfg.n = get_int(j, "n", 0, 1, 1000000);
    if (cfg.n == 0) throw ConfigError("missing \"n\"");
    cfg.dict = j.contains("dict") ? parse_dict(j["dict"]) : DictSpec{};
    cfg.m = get_int(j, "m", 0, 1, 1000000);
    if (cfg.m == 0) throw ConfigError("missing \"m\"");
    cfg.s = static_cast<int>(get_int(j, "s", 0, 1, cfg.n));
    if (cfg.s == 0) throw ConfigError("missing \"s\"");
    cfg.gamma = get_num(j, "gamma", 0.5, 1e-9, 1.0);
    cfg.A = get_num(j, "A", 0.25, 1e-12, 1e12);
    cfg.t = get_num(j, "t", 0.0, 0.0, 1e12);
    cfg.n_reps = static_cast<int>(get_int(j, "n_reps", 100, 1, 1000000));
    cfg.n_cone_samples = get_int(j, "n_cone_samples", 200, 1, 100000000);
    cfg.q_dirs = static_cast<int>(get_int(j, "q_dirs", 100, 1, 1000000));
    cfg.q_samples = get_int(j, "q_samples", 1000, 1, 100000000);
    cfg.width_trials = get_int(j, "width_trials", 1000, 1, 100000000);
  }

  // dictionary shape coherence for kinds that carry one
  if (cfg.kind == "phase" || cfg.kind == "noise" || cfg.kind == "nsp_corpus" ||
      cfg.kind == "width" || cfg.kind == "lowerbound") {
    if (cfg.dict.kind == DictSpec::Kind::random) {
      if (cfg.dict.d > cfg.n)
        throw ConfigError("dict: d must be <= n");
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

namespace {

json law_to_json(const EntryLaw& law) {
  json j;
  switch (law.kind) {
    case Law::gaussian: j["law"] = "gaussian"; break;
    case Law::rademacher: j["law"] = "rademacher"; break;
    case Law::laplace: j["law"] = "laplace"; break;
    case Law::cauchy: j["law"] = "cauchy"; break;
    case Law::student_t:
      j["law"] = "student_t";
      j["dof"] = law.dof;
      break;
  }
  return j;
}

json dict_to_json(const DictSpec& d) {
  json j;
  switch (d.kind) {
    case DictSpec::Kind::identity:
      j["type"] = "identity";
      break;
    case DictSpec::Kind::random:
      j["type"] = "random";
      j["law"] = law_to_json(d.law)["law"];
      if (d.law.kind == Law::student_t) j["dof"] = d.law.dof;
      j["d"] = d.d;
      break;
    case DictSpec::Kind::file:
      j["type"] = "file";
      j["path"] = d.path;
      break;
  }
  return j;
}

json solver_to_json(const SolverConfig& s) {
  return json{{"tol_feas", s.tol_feas},
              {"tol_change", s.tol_change},
              {"max_iters", s.max_iters},
              {"step_ratio", s.step_ratio},
              {"norm_estimate_iters", s.norm_estimate_iters}};
}

json config_to_json(const ExperimentConfig& cfg) {
  json j{{"schema_version", cfg.schema_version},
         {"kind", cfg.kind},
         {"name", cfg.name},
         {"master_seed", cfg.master_seed}};
  auto ens_array = [&] {
    json a = json::array();
    for (const auto& e : cfg.ensembles) a.push_back(law_to_json(e));
    return a;
  };
  if (cfg.kind == "phase" || cfg.kind == "noise") {
    j["n"] = cfg.n;
    j["s"] = cfg.s;
    if (cfg.kind == "phase") j["m_grid"] = cfg.m_grid;
    else {
      j["m"] = cfg.m;
      j["tail_weight_grid"] = cfg.tail_weight_grid;
    }
    j["ensembles"] = ens_array();
    j["dict"] = dict_to_json(cfg.dict);
    j["eps_grid"] = cfg.eps_grid;
    j["trials_per_cell"] = cfg.trials_per_cell;
    j["solver"] = solver_to_json(cfg.solver);
    j["success_tol"] = cfg.success_tol;
  } else if (cfg.kind == "nsp_corpus") {
    j["n"] = cfg.n;
    j["s"] = cfg.s;
    j["m"] = cfg.m;
    j["ensembles"] = ens_array();
    j["dict"] = dict_to_json(cfg.dict);
    j["trials_per_cell"] = cfg.trials_per_cell;
    j["cert_tol"] = cfg.cert_tol;
    j["oracle_instances"] = cfg.oracle_instances;
    j["oracle_tol"] = cfg.oracle_tol;
    j["gamma_grid"] = cfg.gamma_grid;
    j["tau_samples"] = cfg.tau_samples;
    j["tau_refine"] = cfg.tau_refine;
    j["solver"] = solver_to_json(cfg.solver);
  } else if (cfg.kind == "lemma51") {
    j["n_grid"] = cfg.n_grid;
    j["s_grid"] = cfg.s_grid;
    j["laws"] = cfg.laws;
    j["n_trials"] = cfg.n_trials;
    j["bound_constant"] = cfg.bound_constant;
  } else if (cfg.kind == "khintchine") {
    j["ensembles"] = ens_array();
    j["d"] = cfg.d;
    j["m"] = cfg.m;
    j["p_max"] = cfg.p_max;
    j["n_trials"] = cfg.n_trials;
    j["direction"] = cfg.direction;
  } else if (cfg.kind == "width") {
    j["ensembles"] = ens_array();
    j["dict"] = dict_to_json(cfg.dict);
    j["n"] = cfg.n;
    j["m"] = cfg.m;
    j["s"] = cfg.s;
    j["gamma"] = cfg.gamma;
    j["cone_factor"] = cfg.cone_factor;
    j["n_trials"] = cfg.n_trials;
  } else if (cfg.kind == "lowerbound") {
    j["ensembles"] = ens_array();
    j["dict"] = dict_to_json(cfg.dict);
    j["n"] = cfg.n;
    j["m"] = cfg.m;
    j["s"] = cfg.s;
    j["gamma"] = cfg.gamma;
    j["A"] = cfg.A;
    j["t"] = cfg.t;
    j["n_reps"] = cfg.n_reps;
    j["n_cone_samples"] = cfg.n_cone_samples;
    j["q_dirs"] = cfg.q_dirs;
    j["q_samples"] = cfg.q_samples;
    j["width_trials"] = cfg.width_trials;
  }
  return j;
}

void write_result_files(const std::string& dir, const json& config_echo,
                        const std::string& csv, const json& summary) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir + "/config.json");
    out << config_echo.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + dir + "/config.json");
  }
  {
    std::ofstream out(dir + "/trials.csv", std::ios::binary);
    out << csv;
    if (!out) throw std::runtime_error("cannot write " + dir + "/trials.csv");
  }
  {
    std::ofstream out(dir + "/summary.json");
    out << summary.dump(2) << "\n";
    if (!out)
      throw std::runtime_error("cannot write " + dir + "/summary.json");
  }
}

// Shared dictionary state for a run; random dictionaries are resampled per
// trial, identity/file dictionaries are built once.
struct DictSource {
  const ExperimentConfig* cfg = nullptr;
  Dict fixed;      // identity or file
  bool is_fixed = false;

  explicit DictSource(const ExperimentConfig& c) : cfg(&c) {
    if (c.dict.kind == DictSpec::Kind::identity) {
      fixed = make_identity(c.n);
      is_fixed = true;
    } else if (c.dict.kind == DictSpec::Kind::file) {
      fixed = dict_from_matrix(read_matrix(c.dict.path));
      if (fixed.mat.cols() != c.n)
        throw ConfigError("dict file has " +
                          std::to_string(fixed.mat.cols()) +
                          " atoms, config says n = " + std::to_string(c.n));
      is_fixed = true;
    }
  }
  Dict get(std::uint64_t seed) const {
    if (is_fixed) return fixed;
    return make_random_dict(cfg->dict.law, cfg->dict.d, cfg->n, seed);
  }
  long rows() const {
    return is_fixed ? fixed.mat.rows() : cfg->dict.d;
  }
};

struct TrialRow {
  long m = 0;
  int s = 0;
  double eps = 0.0;
  double tail_w = 0.0;
  std::string ens;
  long trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double err_x = 0.0, err_z = 0.0, sigma_s = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct Cell {
  size_t ens_idx = 0;
  long m = 0;
  double eps = 0.0;
  size_t eps_idx = 0;
  double tail_w = 0.0;
  size_t tail_idx = 0;
  std::uint64_t hash = 0;
};

std::uint64_t cell_hash_of(size_t ens_idx, long m, size_t eps_idx,
                           size_t tail_idx) {
  std::uint64_t h = split_stream(0x6c316c31, ens_idx);
  h = split_stream(h, static_cast<std::uint64_t>(m));
  h = split_stream(h, eps_idx);
  h = split_stream(h, tail_idx);
  return h;
}

TrialRow run_recovery_trial(const ExperimentConfig& cfg,
                            const DictSource& dicts, const Cell& cell,
                            long trial) {
  TrialRow row;
  row.m = cell.m;
  row.s = cfg.s;
  row.eps = cell.eps;
  row.tail_w = cell.tail_w;
  row.ens = law_tag(cfg.ensembles[cell.ens_idx]);
  row.trial = trial;
  std::uint64_t cell_seed = split_stream(cfg.master_seed, cell.hash);
  std::uint64_t trial_seed =
      split_stream(cell_seed, static_cast<std::uint64_t>(trial));
  row.seed = trial_seed;

  Dict dict = dicts.get(split_stream(trial_seed, 2));
  const long d = dict.mat.rows(), n = dict.mat.cols();

  EnsembleSpec phi_spec;
  phi_spec.law = cfg.ensembles[cell.ens_idx];
  phi_spec.rows = cell.m;
  phi_spec.cols = d;
  phi_spec.row_normalization = 1.0 / std::sqrt(double(cell.m));
  Mat phi = sample_matrix(phi_spec, split_stream(trial_seed, 1));

  // signal: +-1 on a uniform random support, optional power-law tail
  Rng sig(split_stream(trial_seed, 3));
  std::vector<long> pool(static_cast<size_t>(n));
  for (long j = 0; j < n; ++j) pool[static_cast<size_t>(j)] = j;
  for (int j = 0; j < cfg.s; ++j) {
    long r = j + static_cast<long>(sig.next_u64() %
                                   static_cast<std::uint64_t>(n - j));
    std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(r)]);
  }
  Vec x0 = Vec::Zero(n);
  for (int j = 0; j < cfg.s; ++j)
    x0(pool[static_cast<size_t>(j)]) = sig.rademacher();
  if (cell.tail_w > 0.0) {
    for (long j = cfg.s; j < n; ++j)
      x0(pool[static_cast<size_t>(j)]) =
          sig.rademacher() * cell.tail_w / double(j - cfg.s + 1);
  }
  Vec z0 = dicts.cfg->dict.kind == DictSpec::Kind::identity
               ? x0
               : Vec(dict.mat * x0);

  Vec y = phi * z0;
  if (cell.eps > 0.0) {
    Rng noise(split_stream(trial_seed, 4));
    Vec e(y.size());
    for (long i = 0; i < e.size(); ++i) e(i) = noise.gaussian();
    double ne = e.norm();
    if (ne > 0.0) y += (cell.eps / ne) * e;
  }

  SolveReport rep;
  if (dicts.cfg->dict.kind == DictSpec::Kind::identity) {
    Problem p;
    p.a = phi;
    p.y = y;
    p.eps = cell.eps;
    rep = solve_qcbp(p, cfg.solver);
  } else {
    rep = synthesize(phi, dict, y, cell.eps, cfg.solver);
  }

  row.err_x = (rep.x_hat - x0).norm();
  row.err_z = (rep.z_hat - z0).norm();
  row.sigma_s = best_s_term_error(x0, cfg.s);
  row.iterations = rep.iterations;
  row.converged = rep.converged;
  row.success = row.err_x <= cfg.success_tol * std::max(1.0, x0.norm());
  return row;
}

std::string rows_to_csv(const std::vector<TrialRow>& rows) {
  std::ostringstream csv;
  csv << "m,s,eps,tail_weight,ensemble,trial,seed,success,err_x,err_z,"
         "sigma_s,iterations,converged\n";
  for (const TrialRow& r : rows) {
    csv << r.m << ',' << r.s << ',' << g17(r.eps) << ',' << g17(r.tail_w)
        << ',' << r.ens << ',' << r.trial << ',' << r.seed << ','
        << (r.success ? 1 : 0) << ',' << g17(r.err_x) << ',' << g17(r.err_z)
        << ',' << g17(r.sigma_s) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << '\n';
  }
  return csv.str();
}

RunResult run_phase_or_noise(const ExperimentConfig& cfg,
                             const std::string& out_root, int threads) {
  DictSource dicts(cfg);
  std::vector<Cell> cells;
  std::vector<long> ms =
      cfg.kind == "phase" ? cfg.m_grid : std::vector<long>{cfg.m};
  std::vector<double> tails =
      cfg.kind == "noise" ? cfg.tail_weight_grid : std::vector<double>{0.0};
  for (size_t ei = 0; ei < cfg.ensembles.size(); ++ei)
    for (long m : ms)
      for (size_t pi = 0; pi < cfg.eps_grid.size(); ++pi)
        for (size_t ti = 0; ti < tails.size(); ++ti) {
          Cell c;
          c.ens_idx = ei;
          c.m = m;
          c.eps = cfg.eps_grid[pi];
          c.eps_idx = pi;
          c.tail_w = tails[ti];
          c.tail_idx = ti;
          c.hash = cell_hash_of(ei, m, pi, ti);
          cells.push_back(c);
        }

  const long per_cell = cfg.trials_per_cell;
  const long n_tasks = static_cast<long>(cells.size()) * per_cell;
  std::vector<TrialRow> rows(static_cast<size_t>(n_tasks));
  parallel_for(n_tasks, threads, [&](long i) {
    const Cell& cell = cells[static_cast<size_t>(i / per_cell)];
    rows[static_cast<size_t>(i)] =
        run_recovery_trial(cfg, dicts, cell, i % per_cell);
  });

  // aggregates
  json cell_stats = json::array();
  std::map<std::string, std::vector<std::pair<long, double>>> rate_by_ens;
  for (size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> errs, errz;
    long succ = 0, conv = 0;
    double iter_sum = 0.0;
    for (long t = 0; t < per_cell; ++t) {
      const TrialRow& r = rows[c * static_cast<size_t>(per_cell) +
                               static_cast<size_t>(t)];
      errs.push_back(r.err_x);
      errz.push_back(r.err_z);
      succ += r.success;
      conv += r.converged;
      iter_sum += double(r.iterations);
    }
    const Cell& cell = cells[c];
    double rate = double(succ) / double(per_cell);
    json cj{{"ensemble", law_tag(cfg.ensembles[cell.ens_idx])},
            {"m", cell.m},
            {"eps", cell.eps},
            {"tail_weight", cell.tail_w},
            {"trials", per_cell},
            {"successes", succ},
            {"success_rate", rate},
            {"median_err_x", median_of(errs)},
            {"median_err_z", median_of(errz)},
            {"mean_iterations", iter_sum / double(per_cell)},
            {"converged_rate", double(conv) / double(per_cell)}};
    cell_stats.push_back(cj);
    if (cell.eps_idx == 0 && cell.tail_idx == 0)
      rate_by_ens[law_tag(cfg.ensembles[cell.ens_idx])].push_back(
          {cell.m, rate});
  }

  json summary{{"schema_version", 1},
               {"kind", cfg.kind},
               {"name", cfg.name},
               {"master_seed", cfg.master_seed},
               {"success_tol", cfg.success_tol},
               {"cells", cell_stats}};

  if (cfg.kind == "phase") {
    json m95 = json::object();
    for (auto& [tag, pts] : rate_by_ens) {
      auto sorted = pts;
      std::sort(sorted.begin(), sorted.end());
      json v;  // null when the grid never reaches 0.95
      for (auto& [m, rate] : sorted)
        if (rate >= 0.95) {
          v = m;
          break;
        }
      m95[tag] = v;
    }
    summary["m95"] = m95;
  } else {
    // err_x ~ c0 * sigma_s/sqrt(s) + c1 * eps, least squares over all trials
    Eigen::MatrixXd X(rows.size(), 2);
    Eigen::VectorXd yv(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      X(static_cast<long>(i), 0) = rows[i].sigma_s / std::sqrt(double(cfg.s));
      X(static_cast<long>(i), 1) = rows[i].eps;
      yv(static_cast<long>(i)) = rows[i].err_x;
    }
    Eigen::Vector2d coef = Eigen::Vector2d::Zero();
    if (X.col(0).norm() == 0.0) {
      double denom = X.col(1).squaredNorm();
      if (denom > 0) coef(1) = X.col(1).dot(yv) / denom;
    } else if (X.col(1).norm() == 0.0) {
      double denom = X.col(0).squaredNorm();
      if (denom > 0) coef(0) = X.col(0).dot(yv) / denom;
    } else {
      coef = X.colPivHouseholderQr().solve(yv);
    }
    double ss_res = (yv - X * coef).squaredNorm();
    double ss_tot = (yv.array() - yv.mean()).matrix().squaredNorm();
    json fit{{"c0", coef(0)},
             {"c1", coef(1)},
             {"r2", ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0},
             {"n_trials_fit", rows.size()}};
    summary["fit"] = fit;
  }

  std::string dir = out_root + "/" + cfg.name;
  write_result_files(dir, config_to_json(cfg), rows_to_csv(rows), summary);
  return {dir, summary};
}

const char* spark_name(SparkStatus s) {
  switch (s) {
    case SparkStatus::full_spark: return "full_spark";
    case SparkStatus::deficient: return "deficient";
    case SparkStatus::infeasible_at_size: return "infeasible_at_size";
  }
  return "?";
}

struct CorpusRow {
  long matrix = 0;
  std::uint64_t seed = 0;
  NspReport cert;
  std::string spark;
  bool oracle_ok = false;
  long oracle_checked = 0;
  std::vector<double> taus;
};

RunResult run_nsp_corpus(const ExperimentConfig& cfg,
                         const std::string& out_root, int threads) {
  DictSource dicts(cfg);
  const long n_mats = cfg.trials_per_cell;
  std::vector<CorpusRow> rows(static_cast<size_t>(n_mats));
  std::uint64_t cell_seed = split_stream(cfg.master_seed, 0x6e7370);

  parallel_for(n_mats, threads, [&](long i) {
    CorpusRow row;
    row.matrix = i;
    std::uint64_t mat_seed =
        split_stream(cell_seed, static_cast<std::uint64_t>(i));
    row.seed = mat_seed;

    Dict dict = dicts.get(split_stream(mat_seed, 2));
    EnsembleSpec phi_spec;
    phi_spec.law = cfg.ensembles[0];
    phi_spec.rows = cfg.m;
    phi_spec.cols = dict.mat.rows();
    phi_spec.row_normalization = 1.0 / std::sqrt(double(cfg.m));
    Mat phi = sample_matrix(phi_spec, split_stream(mat_seed, 1));
    Mat a = cfg.dict.kind == DictSpec::Kind::identity ? phi
                                                      : Mat(phi * dict.mat);

    row.spark = spark_name(full_spark(dict.mat));
    row.cert = certify_nsp(a, cfg.s, cfg.cert_tol);

    // uniform-recovery oracle: random sign/support instances through plain
    // basis pursuit; stops at the first failure (the verdict is already
    // decided there)
    row.oracle_ok = true;
    const long n = a.cols();
    std::vector<long> pool(static_cast<size_t>(n));
    for (long inst = 0; inst < cfg.oracle_instances; ++inst) {
      ++row.oracle_checked;
      Rng org(split_stream(mat_seed, 100 + static_cast<std::uint64_t>(inst)));
      for (long j = 0; j < n; ++j) pool[static_cast<size_t>(j)] = j;
      for (int j = 0; j < cfg.s; ++j) {
        long r = j + static_cast<long>(org.next_u64() %
                                       static_cast<std::uint64_t>(n - j));
        std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(r)]);
      }
      Vec x0 = Vec::Zero(n);
      for (int j = 0; j < cfg.s; ++j)
        x0(pool[static_cast<size_t>(j)]) = org.rademacher();
      Problem p;
      p.a = a;
      p.y = a * x0;
      p.eps = 0.0;
      SolveReport rep = solve_qcbp(p, cfg.solver);
      double err = (rep.x_hat - x0).norm();
      if (err > cfg.oracle_tol * std::max(1.0, x0.norm())) {
        row.oracle_ok = false;
        break;
      }
    }

    for (size_t gi = 0; gi < cfg.gamma_grid.size(); ++gi) {
      ConeSpec cone{n, cfg.s, cfg.gamma_grid[gi]};
      NspReport tau = estimate_robust_tau(
          a, cone, cfg.tau_samples, cfg.tau_refine,
          split_stream(mat_seed, 33 + static_cast<std::uint64_t>(gi)));
      row.taus.push_back(tau.tau_hat);
    }
    rows[static_cast<size_t>(i)] = std::move(row);
  });

  std::ostringstream csv;
  csv << "matrix,seed,status,max_lp_value,lp_count,spark,oracle_ok,"
         "oracle_checked";
  for (double g : cfg.gamma_grid) csv << ",tau_gamma_" << g17(g);
  csv << "\n";
  long holds = 0, fails = 0, boundary = 0, infeasible = 0, agree = 0,
       nonboundary = 0;
  for (const CorpusRow& r : rows) {
    csv << r.matrix << ',' << r.seed << ',' << nsp_status_name(r.cert.status)
        << ',' << g17(r.cert.max_lp_value) << ',' << r.cert.lp_count << ','
        << r.spark << ',' << (r.oracle_ok ? 1 : 0) << ',' << r.oracle_checked;
    for (double tau : r.taus) csv << ',' << g17(tau);
    csv << '\n';
    switch (r.cert.status) {
      case NspStatus::certified_holds:
        ++holds;
        ++nonboundary;
        if (r.oracle_ok) ++agree;
        break;
      case NspStatus::certified_fails:
        ++fails;
        ++nonboundary;
        if (!r.oracle_ok) ++agree;
        break;
      case NspStatus::estimate_only:
        ++boundary;
        break;
      case NspStatus::infeasible_at_size:
        ++infeasible;
        break;
    }
  }

  json summary{{"schema_version", 1},
               {"kind", cfg.kind},
               {"name", cfg.name},
               {"master_seed", cfg.master_seed},
               {"n_matrices", n_mats},
               {"certified_holds", holds},
               {"certified_fails", fails},
               {"boundary", boundary},
               {"infeasible", infeasible},
               {"agree_nonboundary", agree},
               {"nonboundary", nonboundary},
               {"agreement_rate",
                nonboundary > 0 ? double(agree) / double(nonboundary) : 1.0}};
  if (!cfg.gamma_grid.empty()) {
    json taus = json::object();
    for (size_t gi = 0; gi < cfg.gamma_grid.size(); ++gi) {
      std::vector<double> vals;
      for (const CorpusRow& r : rows) vals.push_back(r.taus[gi]);
      double mx = 0;
      for (double v : vals) mx = std::max(mx, v);
      taus[g17(cfg.gamma_grid[gi])] =
          json{{"median", median_of(vals)}, {"max", mx}};
    }
    summary["tau_hat"] = taus;
  }

  std::string dir = out_root + "/" + cfg.name;
  write_result_files(dir, config_to_json(cfg), csv.str(), summary);
  return {dir, summary};
}

RunResult run_lemma51(const ExperimentConfig& cfg,
                      const std::string& out_root) {
  json summary{{"schema_version", 1},
               {"kind", cfg.kind},
               {"name", cfg.name},
               {"master_seed", cfg.master_seed},
               {"bound_constant", cfg.bound_constant}};
  std::ostringstream csv;
  csv << "law,n,s,estimate,std_error,bound,ratio,pass\n";
  bool all_pass = true;
  double max_ratio = 0.0;
  json law_summaries = json::array();
  for (size_t li = 0; li < cfg.laws.size(); ++li) {
    const std::string& spec = cfg.laws[li];
    std::function<EntryLaw(long, int)> for_point;
    if (spec == "student_t_auto") {
      for_point = [](long n, int s) {
        EntryLaw law;
        law.kind = Law::student_t;
        law.dof = static_cast<int>(
            std::ceil(2.0 * std::log(double(n) / double(s))));
        if (law.dof < 1) law.dof = 1;
        return law;
      };
    } else {
      EntryLaw fixed = parse_law(json(spec), "laws[]");
      for_point = [fixed](long, int) { return fixed; };
    }
    LemmaCheck check = check_rearrangement_lemma(
        for_point, cfg.n_grid, cfg.s_grid, cfg.n_trials, cfg.bound_constant,
        split_stream(cfg.master_seed, li));
    for (const LemmaPoint& pt : check.points) {
      csv << pt.law << ',' << pt.n << ',' << pt.s << ',' << g17(pt.estimate)
          << ',' << g17(pt.std_error) << ',' << g17(pt.bound) << ','
          << g17(pt.ratio) << ',' << (pt.pass ? 1 : 0) << '\n';
      max_ratio = std::max(max_ratio, pt.ratio);
    }
    all_pass = all_pass && check.all_pass;
    law_summaries.push_back(json{{"law", spec}, {"all_pass", check.all_pass}});
  }
  summary["laws"] = law_summaries;
  summary["all_pass"] = all_pass;
  summary["max_ratio"] = max_ratio;

  std::string dir = out_root + "/" + cfg.name;
  write_result_files(dir, config_to_json(cfg), csv.str(), summary);
  return {dir, summary};
}

RunResult run_khintchine(const ExperimentConfig& cfg,
                         const std::string& out_root) {
  Vec a_dir;
  if (cfg.direction == "e1") {
    a_dir = Vec::Zero(cfg.d);
    a_dir(0) = 1.0;
  } else {
    Rng rng(split_stream(cfg.master_seed, 0xd1));
    a_dir = make_sphere_sampler(cfg.d)(rng);
  }
  KhintchineCheck check =
      check_khintchine(cfg.ensembles[0], cfg.d, cfg.m, a_dir, cfg.p_max,
                       cfg.n_trials, split_stream(cfg.master_seed, 0x6b));

  std::ostringstream csv;
  csv << "p,estimate,rel_se,unstable\n";
  for (size_t k = 0; k < check.profile.p_values.size(); ++k)
    csv << g17(check.profile.p_values[k]) << ','
        << g17(check.profile.estimates[k]) << ','
        << g17(check.profile.rel_se[k]) << ','
        << (check.profile.unstable[k] ? 1 : 0) << '\n';

  json summary{{"schema_version", 1},
               {"kind", cfg.kind},
               {"name", cfg.name},
               {"master_seed", cfg.master_seed},
               {"law", check.law},
               {"m", cfg.m},
               {"n_trials", cfg.n_trials},
               {"growth_exponent", check.growth_exponent},
               {"lambda_hat", check.profile.lambda_hat},
               {"sqrtp_ok", check.sqrtp_ok},
               {"p_reliable_max", check.p_reliable_max}};
  std::string dir = out_root + "/" + cfg.name;
  write_result_files(dir, config_to_json(cfg), csv.str(), summary);
  return {dir, summary};
}

RunResult run_width(const ExperimentConfig& cfg, const std::string& out_root) {
  DictSource dicts(cfg);
  Dict dict = dicts.get(split_stream(cfg.master_seed, 2));
  WidthEstimate est = estimate_width(
      dict, make_row_sampler(cfg.ensembles[0], dict.mat.rows()), cfg.m, cfg.s,
      cfg.cone_factor ? cfg.gamma : 0.0, cfg.n_trials,
      split_stream(cfg.master_seed, 0x77));

  std::ostringstream csv;
  csv << "m,s,gamma,raw_value,value,std_error,cone_factor,n_trials\n";
  csv << est.m << ',' << est.s << ',' << g17(est.gamma) << ','
      << g17(est.raw_value) << ',' << g17(est.value) << ','
      << g17(est.std_error) << ',' << g17(est.cone_factor) << ','
      << est.n_trials << '\n';

  json summary{{"schema_version", 1},
               {"kind", cfg.kind},
               {"name", cfg.name},
               {"master_seed", cfg.master_seed},
               {"law", law_tag(cfg.ensembles[0])},
               {"raw_value", est.raw_value},
               {"value", est.value},
               {"std_error", est.std_error},
               {"cone_factor", est.cone_factor},
               {"bound_sqrt_slog", std::sqrt(double(cfg.s) *
                                             std::log(double(cfg.n) /
                                                      double(cfg.s))) /
                                       double(cfg.m)}};
  std::string dir = out_root + "/" + cfg.name;
  write_result_files(dir, config_to_json(cfg), csv.str(), summary);
  return {dir, summary};
}

RunResult run_lowerbound(const ExperimentConfig& cfg,
                         const std::string& out_root) {
  DictSource dicts(cfg);
  Dict dict = dicts.get(split_stream(cfg.master_seed, 2));
  ConeSpec cone{cfg.n, cfg.s, cfg.gamma};
  LowerBoundCheck check = check_lower_bound(
      dict, cfg.ensembles[0], cone, cfg.m, cfg.A, cfg.t, cfg.n_reps,
      cfg.n_cone_samples, cfg.q_dirs, cfg.q_samples, cfg.width_trials,
      split_stream(cfg.master_seed, 0x6c62));

  std::ostringstream csv;
  csv << "rep,lhs,rhs,holds\n";
  for (size_t r = 0; r < check.reps.size(); ++r)
    csv << r << ',' << g17(check.reps[r].lhs) << ',' << g17(check.rhs) << ','
        << (check.reps[r].holds ? 1 : 0) << '\n';

  json summary{{"schema_version", 1},
               {"kind", cfg.kind},
               {"name", cfg.name},
               {"master_seed", cfg.master_seed},
               {"law", law_tag(cfg.ensembles[0])},
               {"q_hat", check.q_hat},
               {"w_hat", check.w_hat},
               {"rhs", check.rhs},
               {"n_reps", cfg.n_reps},
               {"n_holds", check.n_holds},
               {"frac_holds", double(check.n_holds) / double(cfg.n_reps)}};
  std::string dir = out_root + "/" + cfg.name;
  write_result_files(dir, config_to_json(cfg), csv.str(), summary);
  return {dir, summary};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::string& out_root, int threads) {
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.kind == "phase" || cfg.kind == "noise")
    return run_phase_or_noise(cfg, out_root, threads);
  if (cfg.kind == "nsp_corpus") return run_nsp_corpus(cfg, out_root, threads);
  if (cfg.kind == "lemma51") return run_lemma51(cfg, out_root);
  if (cfg.kind == "khintchine") return run_khintchine(cfg, out_root);
  if (cfg.kind == "width") return run_width(cfg, out_root);
  if (cfg.kind == "lowerbound") return run_lowerbound(cfg, out_root);
  throw ConfigError("unknown kind " + cfg.kind);
}

nlohmann::json nsp_report_to_json(const NspReport& rep) {
  json j{{"order", rep.order},
         {"status", nsp_status_name(rep.status)},
         {"gamma", rep.gamma},
         {"tau_hat", rep.tau_hat},
         {"max_lp_value", rep.max_lp_value},
         {"lp_count", rep.lp_count},
         {"tol", rep.tol}};
  if (rep.witness) {
    json w = json::array();
    for (long i = 0; i < rep.witness->size(); ++i)
      w.push_back((*rep.witness)(i));
    j["witness"] = w;
  }
  return j;
}

std::string format_report(const std::string& result_dir) {
  std::ifstream in(result_dir + "/summary.json");
  if (!in) throw ConfigError("no summary.json under " + result_dir);
  json s;
  try {
    in >> s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("summary parse error: ") + e.what());
  }
  std::ostringstream out;
  std::string kind = s.value("kind", "?");
  out << s.value("name", "?") << " (" << kind << ")\n";
  if (kind == "phase" || kind == "noise") {
    out << "  ensemble            m        eps   tail    success  med_err_x\n";
    for (const auto& c : s["cells"]) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-16s %5ld  %9.3g  %5.3g  %7.3f  %9.3g\n",
                    c["ensemble"].get<std::string>().c_str(),
                    c["m"].get<long>(), c["eps"].get<double>(),
                    c["tail_weight"].get<double>(),
                    c["success_rate"].get<double>(),
                    c["median_err_x"].get<double>());
      out << line;
    }
    if (s.contains("m95")) out << "  m at 95% success: " << s["m95"].dump() << "\n";
    if (s.contains("fit"))
      out << "  fit err_x ~ c0 sigma_s/sqrt(s) + c1 eps: c0=" << s["fit"]["c0"]
          << " c1=" << s["fit"]["c1"] << " r2=" << s["fit"]["r2"] << "\n";
  } else if (kind == "nsp_corpus") {
    out << "  matrices " << s["n_matrices"] << ": holds "
        << s["certified_holds"] << ", fails " << s["certified_fails"]
        << ", boundary " << s["boundary"] << ", agreement "
        << s["agreement_rate"] << "\n";
  } else if (kind == "lemma51") {
    out << "  all_pass " << s["all_pass"] << ", max ratio " << s["max_ratio"]
        << " (bound constant " << s["bound_constant"] << ")\n";
  } else if (kind == "khintchine") {
    out << "  growth exponent " << s["growth_exponent"] << ", sqrt(p) ok "
        << s["sqrtp_ok"] << "\n";
  } else if (kind == "width") {
    out << "  width " << s["value"] << " (raw " << s["raw_value"] << " +- "
        << s["std_error"] << ")\n";
  } else if (kind == "lowerbound") {
    out << "  holds " << s["n_holds"] << "/" << s["n_reps"] << ", rhs "
        << s["rhs"] << ", q_hat " << s["q_hat"] << ", w_hat " << s["w_hat"]
        << "\n";
  }
  return out.str();
}

}  // namespace l1synth
