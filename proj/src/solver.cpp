#include "l1synth/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace l1synth {

namespace {

inline void soft_threshold(Vec& v, double t) {
  for (long i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i)) - t;
    v(i) = a > 0.0 ? (v(i) > 0.0 ? a : -a) : 0.0;
  }
}

}  // namespace

SolveReport solve_qcbp(const Problem& p, const SolverConfig& cfg) {
  const long m = p.a.rows(), n = p.a.cols();
  if (m < 1 || n < 1) throw std::invalid_argument("solve_qcbp: empty matrix");
  if (p.y.size() != m) throw std::invalid_argument("solve_qcbp: y size");
  if (p.eps < 0.0) throw std::invalid_argument("solve_qcbp: eps < 0");
  require_finite(p.a, "solve_qcbp a");
  require_finite(p.y, "solve_qcbp y");

  SolveReport rep;
  const double ny = p.y.norm();
  if (ny == 0.0) {
    // x = 0 is feasible and minimal
    rep.x_hat = Vec::Zero(n);
    rep.z_hat = rep.x_hat;
    rep.converged = true;
    return rep;
  }

  double L = op_norm(p.a, cfg.norm_estimate_iters, 1e-12);
  if (L == 0.0) {
    // a == 0: x = 0 is the only candidate; feasible iff ||y|| <= eps.
    rep.x_hat = Vec::Zero(n);
    rep.z_hat = rep.x_hat;
    rep.feas_gap = std::max(0.0, ny - p.eps);
    rep.converged = rep.feas_gap <= cfg.tol_feas * ny;
    return rep;
  }

  // Work in units of ||y||: the trajectory for (c y, c eps) then matches the
  // one for (y, eps) up to rounding in the normalization itself, which makes
  // the solution scale with c essentially exactly.
  const Vec ys = p.y / ny;
  const double eps_s = p.eps / ny;

  const double step = cfg.step_ratio / (L * (1.0 + 1e-9));
  const double sigma = step, tau = step;

  Vec x = Vec::Zero(n), w = Vec::Zero(m);
  Vec ax = Vec::Zero(m);      // a * x
  Vec axbar = Vec::Zero(m);   // a * xbar
  Vec x_new(n), grad(n);

  long it = 0;
  for (; it < cfg.max_iters; ++it) {
    // dual: w <- prox of the conjugate of the eps-ball indicator
    w += sigma * (axbar - ys);
    if (eps_s > 0.0) {
      double nw = w.norm();
      w *= (nw > 0.0) ? std::max(0.0, 1.0 - sigma * eps_s / nw) : 0.0;
    }
    // primal: soft threshold at tau
    grad.noalias() = p.a.transpose() * w;
    x_new = x - tau * grad;
    soft_threshold(x_new, tau);
    Vec ax_new = p.a * x_new;
    // extrapolation xbar = 2 x_new - x, tracked through a
    axbar = 2.0 * ax_new - ax;

    double change = (x_new - x).norm() / std::max(1.0, x_new.norm());
    double feas = std::max(0.0, (ax_new - ys).norm() - eps_s);
    x.swap(x_new);
    ax.swap(ax_new);
    if ((it & 511) == 0 && (!x.allFinite() || !w.allFinite()))
      throw NumericalError("solve_qcbp: non-finite iterate at iteration " +
                           std::to_string(it));
    if (feas <= cfg.tol_feas && change <= cfg.tol_change) {
      rep.converged = true;
      ++it;
      break;
    }
  }

  if (!x.allFinite())
    throw NumericalError("solve_qcbp: non-finite result");
  rep.x_hat = ny * x;
  rep.z_hat = rep.x_hat;
  rep.iterations = it;
  rep.feas_gap = std::max(0.0, (p.a * rep.x_hat - p.y).norm() - p.eps);
  rep.objective = rep.x_hat.lpNorm<1>();
  return rep;
}

SolveReport synthesize(const Mat& phi, const Dict& dict, const Vec& y,
                       double eps, const SolverConfig& cfg) {
  if (phi.cols() != dict.mat.rows())
    throw std::invalid_argument("synthesize: phi cols != dict rows");
  Problem p;
  p.a = phi * dict.mat;
  p.y = y;
  p.eps = eps;
  SolveReport rep = solve_qcbp(p, cfg);
  rep.z_hat = dict.mat * rep.x_hat;
  return rep;
}

double best_s_term_error(const Vec& x, int s) {
  return std::max(0.0, x.lpNorm<1>() - top_s_l1(x, s));
}

}  // namespace l1synth
