#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "l1synth/matcore.hpp"
#include "l1synth/rng.hpp"

using namespace l1synth;

namespace {

Mat random_mat(long r, long c, std::uint64_t seed) {
  Rng rng(seed);
  Mat a(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) a(i, j) = rng.gaussian();
  return a;
}

// oracle: largest singular value straight from a full SVD
double svd_norm(const Mat& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

// oracle: best s-term l2 mass by enumerating every support of size s
double brute_top_l2(const Vec& v, int s) {
  const int n = static_cast<int>(v.size());
  double best = 0.0;
  std::vector<int> idx(s);
  for (int i = 0; i < s; ++i) idx[i] = i;
  while (true) {
    double sq = 0.0;
    for (int i : idx) sq += v(i) * v(i);
    best = std::max(best, sq);
    int k = s - 1;
    while (k >= 0 && idx[k] == n - s + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
  return std::sqrt(best);
}

}  // namespace

TEST_CASE("op_norm matches a full SVD") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Mat a = random_mat(20, 30, seed);
    CHECK(op_norm(a) == doctest::Approx(svd_norm(a)).epsilon(1e-9));
  }
  // rank deficient
  Mat a = random_mat(10, 4, 77);
  Mat b = a * random_mat(4, 25, 78);
  CHECK(op_norm(b) == doctest::Approx(svd_norm(b)).epsilon(1e-9));
  // zero matrix
  CHECK(op_norm(Mat::Zero(5, 7)) == 0.0);
  // 1x1
  Mat one(1, 1);
  one(0, 0) = -3.5;
  CHECK(op_norm(one) == doctest::Approx(3.5));
}

TEST_CASE("op_norm survives a start vector orthogonal to the top space") {
  // top right-singular vector has alternating signs, exactly orthogonal to
  // the all-ones start
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 2.0;
  a(0, 1) = -2.0;
  a(1, 0) = 1.0;
  a(1, 1) = 1.0;
  CHECK(op_norm(a) == doctest::Approx(svd_norm(a)).epsilon(1e-9));
}

TEST_CASE("kernel_basis spans the kernel orthonormally") {
  Mat a = random_mat(6, 10, 3);
  Mat k = kernel_basis(a);
  REQUIRE(k.cols() == 4);
  CHECK((a * k).cwiseAbs().maxCoeff() < 1e-10);
  Mat gram = k.transpose() * k;
  CHECK((gram - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  // duplicated row does not shrink the kernel
  Mat b(7, 10);
  b.topRows(6) = a;
  b.row(6) = a.row(0);
  CHECK(kernel_basis(b).cols() == 4);

  // full column rank: empty basis
  CHECK(kernel_basis(random_mat(10, 6, 4)).cols() == 0);

  // zero matrix: identity
  Mat z = kernel_basis(Mat::Zero(3, 5));
  CHECK(z.cols() == 5);
  CHECK((z - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rearrange_desc sorts magnitudes and reports the permutation") {
  Vec v(5);
  v << 0.5, -3.0, 2.0, -2.0, 0.0;
  Vec r = rearrange_desc(v);
  CHECK(r(0) == 3.0);
  CHECK(r(1) == 2.0);
  CHECK(r(2) == 2.0);
  CHECK(r(3) == 0.5);
  CHECK(r(4) == 0.0);
  std::vector<int> idx = rearrange_indices(v);
  REQUIRE(idx.size() == 5);
  CHECK(idx[0] == 1);
  // tie between |2.0| and |-2.0| keeps index order
  CHECK(idx[1] == 2);
  CHECK(idx[2] == 3);
  for (int i = 0; i < 5; ++i)
    CHECK(r(i) == std::abs(v(idx[static_cast<size_t>(i)])));
}

TEST_CASE("top_s_l2 equals support enumeration") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    Vec v(12);
    for (int i = 0; i < 12; ++i) v(i) = rng.gaussian();
    for (int s : {1, 2, 3}) {
      CHECK(std::abs(top_s_l2(v, s) - brute_top_l2(v, s)) <= 1e-12);
    }
  }
  Vec v(3);
  v << 1.0, -2.0, 0.5;
  CHECK(top_s_l2(v, 5) == doctest::Approx(v.norm()));
  CHECK(top_s_l1(v, 2) == doctest::Approx(3.0));
  CHECK(top_s_l1(v, 99) == doctest::Approx(3.5));
}

TEST_CASE("matrix file round trip is exact") {
  namespace fs = std::filesystem;
  Mat a(3, 4);
  Rng rng(2);
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 4; ++j) a(i, j) = rng.gaussian() * 1e-7;
  a(0, 0) = 1.0 / 3.0;
  a(1, 1) = -4e300;
  a(2, 2) = 5e-300;
  a(2, 3) = 0.0;
  fs::path p = fs::temp_directory_path() / "l1synth_matcore_roundtrip.txt";
  write_matrix(p.string(), a);
  Mat b = read_matrix(p.string());
  REQUIRE(b.rows() == 3);
  REQUIRE(b.cols() == 4);
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 4; ++j) CHECK(a(i, j) == b(i, j));
  fs::remove(p);
}

TEST_CASE("require_finite rejects NaN and Inf") {
  Mat a = Mat::Zero(2, 2);
  require_finite(a, "ok");
  a(1, 0) = std::nan("");
  CHECK_THROWS_AS(require_finite(a, "bad"), std::invalid_argument);
  Vec v = Vec::Zero(3);
  v(2) = INFINITY;
  CHECK_THROWS_AS(require_finite(v, "bad"), std::invalid_argument);
}

TEST_CASE("read_matrix rejects malformed files") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "l1synth_matcore_bad.txt";
  {
    std::FILE* f = std::fopen(p.string().c_str(), "w");
    std::fputs("2 3\n1 2 3\n4 5\n", f);  // short row
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_matrix(p.string()), std::invalid_argument);
  CHECK_THROWS_AS(read_matrix("/no/such/file"), std::invalid_argument);
  fs::remove(p);
}
