// Command line front end. Exit codes: 0 ok, 2 configuration or usage error,
// 3 numerical abort inside a solve.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "l1synth/dictionary.hpp"
#include "l1synth/ensembles.hpp"
#include "l1synth/experiments.hpp"
#include "l1synth/matcore.hpp"
#include "l1synth/nsp.hpp"
#include "l1synth/solver.hpp"

namespace {

using l1synth::ConfigError;
using nlohmann::json;

l1synth::EntryLaw law_from_name(const std::string& name, int dof) {
  l1synth::EntryLaw law;
  if (name == "gaussian") law.kind = l1synth::Law::gaussian;
  else if (name == "rademacher") law.kind = l1synth::Law::rademacher;
  else if (name == "laplace") law.kind = l1synth::Law::laplace;
  else if (name == "cauchy") law.kind = l1synth::Law::cauchy;
  else if (name == "student_t") {
    law.kind = l1synth::Law::student_t;
    if (dof < 1) throw ConfigError("student_t needs --dof >= 1");
    law.dof = dof;
  } else {
    throw ConfigError("unknown law \"" + name + "\"");
  }
  if (law.kind != l1synth::Law::student_t && dof != 0)
    throw ConfigError("--dof only applies to student_t");
  return law;
}

double parse_row_normalization(const std::string& s, long rows) {
  if (s == "inv-sqrt-rows") return 1.0 / std::sqrt(double(rows));
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size())
    throw ConfigError("--row-normalization: \"" + s +
                      "\" is neither a number nor inv-sqrt-rows");
  return v;
}

l1synth::Vec read_vector(const std::string& path) {
  l1synth::Mat m = l1synth::read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw ConfigError(path + ": expected a vector, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + out_path);
  }
}

l1synth::ExperimentConfig load_for(const std::string& config_path,
                                   const std::string& expected_kind,
                                   bool seed_given, std::uint64_t seed) {
  l1synth::ExperimentConfig cfg = l1synth::load_config_file(config_path);
  if (cfg.kind != expected_kind)
    throw ConfigError("config kind is \"" + cfg.kind + "\", expected \"" +
                      expected_kind + "\"");
  if (seed_given) cfg.master_seed = seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1-synthesis recovery experiments"};
  app.require_subcommand(1);

  // gen-matrix
  auto* gen = app.add_subcommand(
      "gen-matrix", "sample a random matrix and write it to a text file");
  std::string gen_law = "gaussian", gen_norm = "1", gen_out;
  int gen_dof = 0;
  long gen_rows = 0, gen_cols = 0;
  std::uint64_t gen_seed = 1;
  gen->add_option("--law", gen_law,
                  "gaussian|rademacher|laplace|student_t|cauchy");
  gen->add_option("--dof", gen_dof, "degrees of freedom for student_t");
  gen->add_option("--rows", gen_rows)->required();
  gen->add_option("--cols", gen_cols)->required();
  gen->add_option("--row-normalization", gen_norm,
                  "scale factor per entry, a number or inv-sqrt-rows");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "output path")->required();

  // solve
  auto* solve = app.add_subcommand(
      "solve", "min ||x||_1 s.t. ||Phi D x - y||_2 <= eps, then z = D x");
  std::string sv_phi, sv_dict, sv_y, sv_out;
  double sv_eps = 0.0;
  l1synth::SolverConfig sv_cfg;
  solve->add_option("--phi", sv_phi, "measurement matrix file")->required();
  solve->add_option("--dict", sv_dict,
                    "dictionary matrix file (omit for identity)");
  solve->add_option("--y", sv_y, "measurement vector file")->required();
  solve->add_option("--eps", sv_eps, "residual budget, >= 0");
  solve->add_option("--max-iters", sv_cfg.max_iters);
  solve->add_option("--tol-feas", sv_cfg.tol_feas);
  solve->add_option("--tol-change", sv_cfg.tol_change);
  solve->add_option("--step-ratio", sv_cfg.step_ratio);
  solve->add_option("--out", sv_out, "write the JSON report here (default stdout)");

  // config-driven runs
  struct RunArgs {
    std::string config, out_root = "results";
    int threads = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
  };
  auto add_run_flags = [](CLI::App* sc, RunArgs& ra) {
    sc->add_option("--config", ra.config, "JSON experiment config")
        ->required();
    sc->add_option("--out", ra.out_root, "results root directory");
    sc->add_option("--threads", ra.threads, "worker threads, >= 1");
    sc->add_option("--seed", ra.seed, "override master_seed")
        ->each([&ra](const std::string&) { ra.seed_given = true; });
  };

  RunArgs phase_args, noise_args, verify_args;
  auto* phase = app.add_subcommand(
      "phase", "success-rate sweep over a measurement grid");
  add_run_flags(phase, phase_args);
  auto* noise = app.add_subcommand(
      "noise", "recovery error under measurement noise and signal tails");
  add_run_flags(noise, noise_args);

  // nsp-cert: single matrix or corpus config
  auto* nsp = app.add_subcommand(
      "nsp-cert", "null-space property certification (matrix or corpus)");
  std::string nsp_a, nsp_out;
  int nsp_s = 0;
  double nsp_tol = 1e-7;
  RunArgs nsp_args;
  nsp->add_option("--a", nsp_a, "matrix file (single-matrix mode)");
  nsp->add_option("--s", nsp_s, "sparsity order (single-matrix mode)");
  nsp->add_option("--tol", nsp_tol, "certification band half width");
  nsp->add_option("--out", nsp_out,
                  "single-matrix: JSON report path; corpus: results root");
  nsp->add_option("--config", nsp_args.config, "corpus config (kind nsp_corpus)");
  nsp->add_option("--threads", nsp_args.threads);
  nsp->add_option("--seed", nsp_args.seed)
      ->each([&nsp_args](const std::string&) { nsp_args.seed_given = true; });

  // verify
  auto* verify = app.add_subcommand(
      "verify", "estimator checks: lemma51 | khintchine | width | lowerbound");
  std::string verify_what;
  verify->add_option("what", verify_what, "which check to run")
      ->required()
      ->check(CLI::IsMember({"lemma51", "khintchine", "width", "lowerbound"}));
  add_run_flags(verify, verify_args);

  // report
  auto* report = app.add_subcommand("report", "print a digest of a result directory");
  std::string report_dir;
  report->add_option("dir", report_dir, "results/<name> directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      l1synth::EnsembleSpec spec;
      spec.law = law_from_name(gen_law, gen_dof);
      if (gen_rows < 1 || gen_cols < 1)
        throw ConfigError("--rows and --cols must be >= 1");
      spec.rows = gen_rows;
      spec.cols = gen_cols;
      spec.row_normalization = parse_row_normalization(gen_norm, gen_rows);
      l1synth::write_matrix(gen_out, l1synth::sample_matrix(spec, gen_seed));
    } else if (solve->parsed()) {
      if (sv_eps < 0) throw ConfigError("--eps must be >= 0");
      l1synth::Mat phi = l1synth::read_matrix(sv_phi);
      l1synth::Vec y = read_vector(sv_y);
      l1synth::SolveReport rep;
      if (sv_dict.empty()) {
        l1synth::Problem p;
        p.a = phi;
        p.y = y;
        p.eps = sv_eps;
        rep = l1synth::solve_qcbp(p, sv_cfg);
      } else {
        l1synth::Dict dict =
            l1synth::dict_from_matrix(l1synth::read_matrix(sv_dict));
        rep = l1synth::synthesize(phi, dict, y, sv_eps, sv_cfg);
      }
      json out{{"iterations", rep.iterations},
               {"converged", rep.converged},
               {"feas_gap", rep.feas_gap},
               {"objective", rep.objective}};
      json xs = json::array(), zs = json::array();
      for (long i = 0; i < rep.x_hat.size(); ++i) xs.push_back(rep.x_hat(i));
      for (long i = 0; i < rep.z_hat.size(); ++i) zs.push_back(rep.z_hat(i));
      out["x_hat"] = xs;
      out["z_hat"] = zs;
      emit(out, sv_out);
    } else if (phase->parsed()) {
      auto cfg = load_for(phase_args.config, "phase", phase_args.seed_given,
                          phase_args.seed);
      auto res = l1synth::run_experiment(cfg, phase_args.out_root,
                                         phase_args.threads);
      std::cout << l1synth::format_report(res.out_dir);
    } else if (noise->parsed()) {
      auto cfg = load_for(noise_args.config, "noise", noise_args.seed_given,
                          noise_args.seed);
      auto res = l1synth::run_experiment(cfg, noise_args.out_root,
                                         noise_args.threads);
      std::cout << l1synth::format_report(res.out_dir);
    } else if (nsp->parsed()) {
      bool single = !nsp_a.empty();
      bool corpus = !nsp_args.config.empty();
      if (single == corpus)
        throw ConfigError("give exactly one of --a or --config");
      if (single) {
        if (nsp_s < 1) throw ConfigError("--s must be >= 1");
        l1synth::Mat a = l1synth::read_matrix(nsp_a);
        l1synth::NspReport rep = l1synth::certify_nsp(a, nsp_s, nsp_tol);
        emit(l1synth::nsp_report_to_json(rep), nsp_out);
      } else {
        auto cfg = load_for(nsp_args.config, "nsp_corpus",
                            nsp_args.seed_given, nsp_args.seed);
        std::string root = nsp_out.empty() ? std::string("results") : nsp_out;
        auto res = l1synth::run_experiment(cfg, root, nsp_args.threads);
        std::cout << l1synth::format_report(res.out_dir);
      }
    } else if (verify->parsed()) {
      auto cfg = load_for(verify_args.config, verify_what,
                          verify_args.seed_given, verify_args.seed);
      auto res = l1synth::run_experiment(cfg, verify_args.out_root,
                                         verify_args.threads);
      std::cout << l1synth::format_report(res.out_dir);
    } else if (report->parsed()) {
      std::cout << l1synth::format_report(report_dir);
    }
  } catch (const l1synth::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
