#pragma once

// Equality/quadratically-constrained basis pursuit
//     min ||x||_1   s.t.  ||a x - y||_2 <= eps
// by the Chambolle-Pock primal-dual iteration. eps = 0 gives plain basis
// pursuit. The synthesis path materializes a = phi * dict and reports both
// the coefficient estimate and its synthesis dict * x_hat.

#include <stdexcept>
#include <string>

#include "l1synth/dictionary.hpp"
#include "l1synth/matcore.hpp"

namespace l1synth {

// Non-finite iterates or results. The CLI maps this to exit code 3, unlike
// precondition violations (invalid_argument), which are configuration errors.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Problem {
  Mat a;
  Vec y;
  double eps = 0.0;
};

struct SolverConfig {
  double tol_feas = 1e-9;    // feasibility gap tolerance, relative to ||y||_2
  double tol_change = 1e-9;  // relative iterate change per iteration
  long max_iters = 200000;
  double step_ratio = 0.99;  // sigma tau ||a||^2 <= step_ratio^2
  int norm_estimate_iters = 2000;
};

struct SolveReport {
  Vec x_hat;
  Vec z_hat;  // dict * x_hat (synthesize) or x_hat itself (solve_qcbp)
  long iterations = 0;
  bool converged = false;
  double feas_gap = 0.0;   // max(0, ||a x_hat - y||_2 - eps)
  double objective = 0.0;  // ||x_hat||_1
};

// Throws NumericalError if iterates go non-finite (diagnostic includes the
// iteration index); hitting max_iters is not an error, it returns
// converged = false.
SolveReport solve_qcbp(const Problem& p, const SolverConfig& cfg = {});

SolveReport synthesize(const Mat& phi, const Dict& dict, const Vec& y,
                       double eps, const SolverConfig& cfg = {});

// sigma_s(x)_1: l1 distance to the best s-term approximation.
double best_s_term_error(const Vec& x, int s);

}  // namespace l1synth
