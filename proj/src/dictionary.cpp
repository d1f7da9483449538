#include "l1synth/dictionary.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace l1synth {

Dict make_identity(long n) {
  if (n < 1) throw std::invalid_argument("make_identity: n < 1");
  Dict d;
  d.mat = Mat::Identity(n, n);
  d.rho = 1.0;
  d.mu = 0.0;
  return d;
}

Dict make_random_dict(const EntryLaw& law, long d, long n, std::uint64_t seed) {
  if (d < 1 || d > n)
    throw std::invalid_argument("make_random_dict: need 1 <= d <= n");
  EnsembleSpec spec;
  spec.law = law;
  spec.rows = d;
  spec.cols = n;
  spec.row_normalization = 1.0 / std::sqrt(double(d));
  return dict_from_matrix(sample_matrix(spec, seed));
}

Dict dict_from_matrix(const Mat& m) {
  if (m.rows() < 1 || m.rows() > m.cols())
    throw std::invalid_argument("dictionary must be d x n with d <= n");
  require_finite(m, "dictionary");
  Dict dict;
  dict.mat = m;
  dict.rho = op_norm(m);
  dict.mu = coherence(m).mu;
  return dict;
}

CoherenceReport coherence(const Mat& dict) {
  require_finite(dict, "coherence");
  const long n = dict.cols();
  Vec norms(n);
  for (long j = 0; j < n; ++j) {
    norms(j) = dict.col(j).norm();
    if (norms(j) == 0.0)
      throw std::invalid_argument("coherence: zero column");
  }
  CoherenceReport rep;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) {
      double c = std::abs(dict.col(i).dot(dict.col(j))) / (norms(i) * norms(j));
      if (c > rep.mu) rep.mu = c;
    }
  if (rep.mu <= 0.0) {
    rep.admissible_s = n;
  } else {
    // mu <= 1/(16(s-1))  <=>  s <= 1 + 1/(16 mu)
    rep.admissible_s = static_cast<long>(std::floor(1.0 + 1.0 / (16.0 * rep.mu)));
    if (rep.admissible_s > n) rep.admissible_s = n;
    if (rep.admissible_s < 0) rep.admissible_s = 0;
  }
  return rep;
}

namespace {

// C(n, k) with saturation above the enumeration budget.
unsigned long long choose_capped(long n, long k, unsigned long long cap) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned long long r = 1;
  for (long i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned long long>(n - k + i) /
        static_cast<unsigned long long>(i);
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace

SparkStatus full_spark(const Mat& dict, double tol) {
  require_finite(dict, "full_spark");
  const long d = dict.rows(), n = dict.cols();
  if (d > n) throw std::invalid_argument("full_spark: d > n");
  const unsigned long long budget = 1000000ULL;
  if (choose_capped(n, d, budget) > budget) return SparkStatus::infeasible_at_size;

  std::vector<long> pick(static_cast<size_t>(d));
  for (long i = 0; i < d; ++i) pick[static_cast<size_t>(i)] = i;
  Eigen::MatrixXd sub(d, d);
  while (true) {
    for (long c = 0; c < d; ++c)
      sub.col(c) = dict.col(pick[static_cast<size_t>(c)]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    const auto& sv = svd.singularValues();
    if (sv(d - 1) <= tol * sv(0)) return SparkStatus::deficient;
    // next combination in lexicographic order
    long i = d - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] == n - d + i) --i;
    if (i < 0) break;
    ++pick[static_cast<size_t>(i)];
    for (long j = i + 1; j < d; ++j)
      pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
  return SparkStatus::full_spark;
}

}  // namespace l1synth
