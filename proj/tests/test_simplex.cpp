#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "l1synth/rng.hpp"
#include "l1synth/simplex.hpp"

using namespace l1synth;

namespace {

// oracle: enumerate all candidate vertices of {x >= 0, a x <= b} by picking n
// tight constraints among the m + n available, keep the feasible ones, and
// maximize c^T x. Assumes the feasible set is bounded (callers add box rows).
double vertex_enum_max(const Mat& a, const Vec& b, const Vec& c) {
  const long m = a.rows(), n = a.cols();
  Mat all(m + n, n);
  Vec rhs(m + n);
  all.topRows(m) = a;
  rhs.head(m) = b;
  all.bottomRows(n) = -Mat::Identity(n, n);  // -x_i <= 0
  rhs.tail(n).setZero();

  double best = -1e300;
  std::vector<long> idx(static_cast<size_t>(n));
  std::function<void(long, long)> rec = [&](long start, long k) {
    if (k == n) {
      Mat sys(n, n);
      Vec sysb(n);
      for (long i = 0; i < n; ++i) {
        sys.row(i) = all.row(idx[static_cast<size_t>(i)]);
        sysb(i) = rhs(idx[static_cast<size_t>(i)]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      if (!lu.isInvertible()) return;
      Vec x = lu.solve(sysb);
      if ((x.array() < -1e-9).any()) return;
      if (((a * x - b).array() > 1e-9).any()) return;
      best = std::max(best, c.dot(x));
      return;
    }
    for (long i = start; i <= m + n - (n - k); ++i) {
      idx[static_cast<size_t>(k)] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("textbook maximum") {
  // max 3x + 2y st x + y <= 4, x <= 2, y <= 3: optimum 10 at (2,2)
  Mat a(3, 2);
  a << 1, 1,
       1, 0,
       0, 1;
  Vec b(3), c(2);
  b << 4, 2, 3;
  c << 3, 2;
  LpResult r = simplex_max(a, b, c);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(r.x(0) == doctest::Approx(2.0));
  CHECK(r.x(1) == doctest::Approx(2.0));
  // reported point attains the reported value
  CHECK(c.dot(r.x) == doctest::Approx(r.value));
}

TEST_CASE("degenerate tie does not cycle") {
  // two constraints tight at the optimum
  Mat a(3, 2);
  a << 1, 1,
       1, 1,
       1, 0;
  Vec b(3), c(2);
  b << 2, 2, 1;
  c << 1, 1;
  LpResult r = simplex_max(a, b, c);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == doctest::Approx(2.0));
}

TEST_CASE("unbounded ray is reported") {
  // max x with y - x <= 1: x can grow freely
  Mat a(1, 2);
  a << -1, 1;
  Vec b(1), c(2);
  b << 1;
  c << 1, 0;
  LpResult r = simplex_max(a, b, c);
  REQUIRE(r.status == LpResult::Status::unbounded);
  // the ray must be feasible to follow and improve the objective
  REQUIRE(r.x.size() == 2);
  CHECK(c.dot(r.x) > 1e-9);
  CHECK(((a * r.x).array() <= 1e-12).all());
  CHECK((r.x.array() >= -1e-12).all());
}

TEST_CASE("zero objective stays at a vertex with value zero") {
  Mat a(2, 2);
  a << 1, 0,
       0, 1;
  Vec b(2), c(2);
  b << 1, 1;
  c << 0, 0;
  LpResult r = simplex_max(a, b, c);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == 0.0);
}

TEST_CASE("negative rhs is refused") {
  Mat a(1, 1);
  a << 1;
  Vec b(1), c(1);
  b << -1;
  c << 1;
  CHECK_THROWS_AS(simplex_max(a, b, c), std::invalid_argument);
}

TEST_CASE("random boxed instances match vertex enumeration") {
  Rng rng(31);
  for (int rep = 0; rep < 60; ++rep) {
    const long m = 3, n = 3;
    Mat a(m + n, n);
    Vec b(m + n), c(n);
    for (long i = 0; i < m; ++i) {
      for (long j = 0; j < n; ++j) a(i, j) = rng.gaussian();
      b(i) = 0.5 + 2.0 * rng.next_unit();  // keeps the origin feasible
    }
    a.bottomRows(n) = Mat::Identity(n, n);  // box x_i <= cap
    for (long j = 0; j < n; ++j) b(m + j) = 1.0 + 3.0 * rng.next_unit();
    for (long j = 0; j < n; ++j) c(j) = rng.gaussian();
    LpResult r = simplex_max(a, b, c);
    REQUIRE(r.status == LpResult::Status::optimal);
    double oracle = vertex_enum_max(a, b, c);
    INFO("rep " << rep);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-9));
    // returned point is feasible and attains the value
    CHECK(((a * r.x - b).array() <= 1e-9).all());
    CHECK((r.x.array() >= -1e-12).all());
    CHECK(c.dot(r.x) == doctest::Approx(r.value).epsilon(1e-10));
  }
}
