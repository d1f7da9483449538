#pragma once

// Dense matrix/vector core shared by every module. Mat is row-major so file
// I/O and row-wise sampling write contiguous memory; entries are IEEE doubles
// and must be finite (require_finite gates every operation that consumes
// external data).

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace l1synth {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Throws std::invalid_argument naming `what` if any entry is NaN/Inf.
void require_finite(const Mat& a, const char* what);
void require_finite(const Vec& v, const char* what);

// Text format: first line "rows cols", then one whitespace-separated row per
// line, 17 significant digits (exact double round trip).
Mat read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Mat& a);

// Orthonormal basis of ker(a) as columns (n x k, k = n - rank). Rank is
// decided by a full SVD with singular values <= tol * sigma_max treated as
// zero. Zero matrix yields the identity basis.
Mat kernel_basis(const Mat& a, double tol = 1e-10);

// Largest singular value by power iteration on a^T a, deterministic all-ones
// start. If the iterate collapses (start orthogonal to the top eigenspace, or
// lands in the kernel), restarts once from the index-weighted vector
// (1,2,...,n). Zero matrix returns 0.
double op_norm(const Mat& a, int max_iters = 10000, double tol = 1e-13);

// Magnitudes sorted descending. Ties keep original index order (observable
// through rearrange_indices, which returns the permutation applied).
Vec rearrange_desc(const Vec& v);
std::vector<int> rearrange_indices(const Vec& v);

// l2 norm of the s largest-magnitude entries; s >= length returns ||v||_2.
double top_s_l2(const Vec& v, int s);

// l1 mass of the s largest-magnitude entries (companion of top_s_l2; the
// complement ||v||_1 - top_s_l1 is the best-s-term tail).
double top_s_l1(const Vec& v, int s);

}  // namespace l1synth
