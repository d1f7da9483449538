#include "l1synth/simplex.hpp"

#include <stdexcept>
#include <vector>

namespace l1synth {

LpResult simplex_max(const Mat& a, const Vec& b, const Vec& c) {
  const long m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex_max: shape mismatch");
  require_finite(a, "simplex_max");
  for (long i = 0; i < m; ++i)
    if (b(i) < 0.0)
      throw std::invalid_argument("simplex_max: needs b >= 0");

  const double rc_tol = 1e-9;   // reduced cost threshold
  const double piv_tol = 1e-11; // pivot magnitude threshold
  const long ncols = n + m;

  // Rows 0..m-1: [A | I | b]; row m: [c | 0 | 0] (reduced costs, corner
  // holds -objective).
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, ncols + 1);
  tab.block(0, 0, m, n) = a;
  tab.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  tab.block(0, ncols, m, 1) = b;
  tab.block(m, 0, 1, n) = c.transpose();

  std::vector<long> basis(static_cast<size_t>(m));
  std::vector<char> is_basic(static_cast<size_t>(ncols), 0);
  for (long i = 0; i < m; ++i) {
    basis[static_cast<size_t>(i)] = n + i;
    is_basic[static_cast<size_t>(n + i)] = 1;
  }

  const long max_pivots = 200000 + 50 * ncols;
  for (long pivots = 0;; ++pivots) {
    if (pivots > max_pivots)
      throw std::runtime_error("simplex_max: pivot budget exhausted");

    // Bland: entering = smallest-index nonbasic column with positive
    // reduced cost.
    long e = -1;
    for (long j = 0; j < ncols; ++j)
      if (!is_basic[static_cast<size_t>(j)] && tab(m, j) > rc_tol) {
        e = j;
        break;
      }
    if (e < 0) break;  // optimal

    // Ratio test; ties resolved by smallest basic variable index.
    long r = -1;
    double best = 0.0;
    for (long i = 0; i < m; ++i) {
      double aie = tab(i, e);
      if (aie <= piv_tol) continue;
      double ratio = tab(i, ncols) / aie;
      if (r < 0 || ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 &&
           basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(r)])) {
        r = i;
        best = ratio;
      }
    }
    if (r < 0) {
      // Unbounded: entering variable grows freely; report the ray.
      LpResult res;
      res.status = LpResult::Status::unbounded;
      res.value = -tab(m, ncols);
      res.x = Vec::Zero(n);
      if (e < n) res.x(e) = 1.0;
      for (long i = 0; i < m; ++i) {
        long bi = basis[static_cast<size_t>(i)];
        if (bi < n) res.x(bi) = -tab(i, e);
      }
      return res;
    }

    double piv = tab(r, e);
    tab.row(r) /= piv;
    for (long i = 0; i <= m; ++i) {
      if (i == r) continue;
      double f = tab(i, e);
      if (f != 0.0) tab.row(i) -= f * tab.row(r);
    }
    is_basic[static_cast<size_t>(basis[static_cast<size_t>(r)])] = 0;
    basis[static_cast<size_t>(r)] = e;
    is_basic[static_cast<size_t>(e)] = 1;
  }

  LpResult res;
  res.status = LpResult::Status::optimal;
  res.value = -tab(m, ncols);
  res.x = Vec::Zero(n);
  for (long i = 0; i < m; ++i) {
    long bi = basis[static_cast<size_t>(i)];
    if (bi < n) res.x(bi) = tab(i, ncols);
  }
  return res;
}

}  // namespace l1synth
