#include "l1synth/matcore.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace l1synth {

void require_finite(const Mat& a, const char* what) {
  if (!a.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

Mat read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw std::invalid_argument("bad matrix header in " + path);
  Mat a(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j)
      if (!(in >> a(i, j)))
        throw std::invalid_argument("truncated matrix data in " + path);
  require_finite(a, "read_matrix");
  return a;
}

void write_matrix(const std::string& path, const Mat& a) {
  require_finite(a, "write_matrix");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  out << a.rows() << " " << a.cols() << "\n";
  char buf[40];
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      out << buf << (j + 1 == a.cols() ? "" : " ");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Mat kernel_basis(const Mat& a, double tol) {
  require_finite(a, "kernel_basis");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  long rank = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  long n = a.cols();
  return svd.matrixV().rightCols(n - rank);
}

double op_norm(const Mat& a, int max_iters, double tol) {
  require_finite(a, "op_norm");
  const long n = a.cols();
  // The all-ones start can sit exactly inside a lower invariant subspace of
  // a^T a and converge to an interior singular value; a second deterministic
  // sweep from a different start covers that, and the larger estimate wins.
  Eigen::VectorXd starts[2];
  starts[0] = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  starts[1] = Eigen::VectorXd::LinSpaced(n, 1.0, double(n)).normalized();
  double best = 0.0;
  for (const Eigen::VectorXd& start : starts) {
    Eigen::VectorXd v = start;
    double sigma = 0.0;
    for (int it = 0; it < max_iters; ++it) {
      Eigen::VectorXd w = a.transpose() * (a * v);
      double nw = w.norm();
      if (nw == 0.0) {
        sigma = 0.0;  // v sits in ker(a^T a)
        break;
      }
      // Rayleigh quotient v^T (a^T a) v = ||a v||^2 since v is unit.
      double next = std::sqrt(std::max(0.0, v.dot(w)));
      v = w / nw;
      if (it > 0 && std::abs(next - sigma) <= tol * std::max(1.0, next)) {
        sigma = next;
        break;
      }
      sigma = next;
    }
    best = std::max(best, sigma);
  }
  return best;
}

Vec rearrange_desc(const Vec& v) {
  std::vector<int> idx = rearrange_indices(v);
  Vec out(v.size());
  for (long i = 0; i < v.size(); ++i) out(i) = std::abs(v(idx[i]));
  return out;
}

std::vector<int> rearrange_indices(const Vec& v) {
  std::vector<int> idx(static_cast<size_t>(v.size()));
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    return std::abs(v(i)) > std::abs(v(j));
  });
  return idx;
}

double top_s_l2(const Vec& v, int s) {
  if (s <= 0) return 0.0;
  Vec sorted = rearrange_desc(v);
  long k = std::min<long>(s, sorted.size());
  double acc = 0.0;
  for (long i = 0; i < k; ++i) acc += sorted(i) * sorted(i);
  return std::sqrt(acc);
}

double top_s_l1(const Vec& v, int s) {
  if (s <= 0) return 0.0;
  Vec sorted = rearrange_desc(v);
  long k = std::min<long>(s, sorted.size());
  double acc = 0.0;
  for (long i = 0; i < k; ++i) acc += sorted(i);
  return acc;
}

}  // namespace l1synth
