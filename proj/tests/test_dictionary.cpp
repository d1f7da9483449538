#include <doctest.h>

#include <cmath>

#include "l1synth/dictionary.hpp"

using namespace l1synth;

TEST_CASE("identity dictionary") {
  Dict d = make_identity(6);
  CHECK(d.mat.rows() == 6);
  CHECK(d.mat.cols() == 6);
  CHECK(d.rho == doctest::Approx(1.0));
  CHECK(d.mu == 0.0);
  CoherenceReport rep = coherence(d.mat);
  CHECK(rep.mu == 0.0);
  CHECK(rep.admissible_s == 6);  // capped at n
}

TEST_CASE("coherence of a two-column frame with known angle") {
  // columns (1,0) and (cos t, sin t): mu = |cos t|
  double t = 0.4;
  Mat m(2, 2);
  m(0, 0) = 1.0;
  m(1, 0) = 0.0;
  m(0, 1) = std::cos(t);
  m(1, 1) = std::sin(t);
  CoherenceReport rep = coherence(m);
  CHECK(rep.mu == doctest::Approx(std::cos(t)).epsilon(1e-12));
  CHECK(rep.admissible_s ==
        static_cast<long>(std::floor(1.0 + 1.0 / (16.0 * std::cos(t)))));
  // scale invariance: coherence normalizes columns
  Mat m2 = 3.0 * m;
  CHECK(coherence(m2).mu == doctest::Approx(rep.mu).epsilon(1e-12));
}

TEST_CASE("coherence rejects a zero column") {
  Mat m = Mat::Zero(3, 2);
  m(0, 0) = 1.0;
  CHECK_THROWS_AS(coherence(m), std::invalid_argument);
}

TEST_CASE("random dictionary basics") {
  EntryLaw law;
  law.kind = Law::rademacher;
  Dict d = make_random_dict(law, 16, 64, 5);
  CHECK(d.mat.rows() == 16);
  CHECK(d.mat.cols() == 64);
  // entries are +-1/sqrt(d)
  double v = 1.0 / std::sqrt(16.0);
  for (long i = 0; i < 16; ++i)
    for (long j = 0; j < 64; ++j)
      CHECK(std::abs(std::abs(d.mat(i, j)) - v) < 1e-15);
  CHECK(d.rho == doctest::Approx(op_norm(d.mat)).epsilon(1e-9));
  CHECK(d.mu > 0.0);
  CHECK(d.mu < 1.0);
  // deterministic in the seed
  Dict d2 = make_random_dict(law, 16, 64, 5);
  CHECK((d.mat - d2.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dict_from_matrix validates the aspect") {
  Mat tall(3, 2);
  tall.setZero();
  tall(0, 0) = 1.0;
  tall(1, 1) = 1.0;
  CHECK_THROWS_AS(dict_from_matrix(tall), std::invalid_argument);
}

TEST_CASE("full spark detection") {
  // identity: trivially full spark
  CHECK(full_spark(Mat(Mat::Identity(4, 4))) == SparkStatus::full_spark);

  // duplicated column: some d-subset is singular
  Mat dup(2, 3);
  dup << 1.0, 0.0, 1.0,
         0.0, 1.0, 0.0;
  CHECK(full_spark(dup) == SparkStatus::deficient);

  // Vandermonde with distinct nodes: every 2x2 minor is nonzero
  Mat vand(2, 5);
  for (long j = 0; j < 5; ++j) {
    vand(0, j) = 1.0;
    vand(1, j) = 0.3 * double(j + 1);
  }
  CHECK(full_spark(vand) == SparkStatus::full_spark);

  // combinatorial blowup gets refused, not attempted
  CHECK(full_spark(Mat(Mat::Zero(15, 40))) == SparkStatus::infeasible_at_size);
}
