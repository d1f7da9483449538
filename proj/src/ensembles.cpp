#include "l1synth/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace l1synth {

double sample_entry(const EntryLaw& law, Rng& rng) {
  switch (law.kind) {
    case Law::gaussian:
      return rng.gaussian();
    case Law::rademacher:
      return rng.rademacher();
    case Law::laplace:
      return rng.laplace();
    case Law::cauchy:
      return rng.cauchy();
    case Law::student_t: {
      if (law.dof < 1) throw std::invalid_argument("student_t needs dof >= 1");
      double t = rng.student_t(law.dof);
      if (law.dof >= 3)
        t /= std::sqrt(double(law.dof) / double(law.dof - 2));
      return t;
    }
  }
  throw std::logic_error("unreachable law");
}

std::string law_tag(const EntryLaw& law) {
  switch (law.kind) {
    case Law::gaussian: return "gaussian";
    case Law::rademacher: return "rademacher";
    case Law::laplace: return "laplace";
    case Law::cauchy: return "cauchy";
    case Law::student_t: return "student_t(" + std::to_string(law.dof) + ")";
  }
  return "?";
}

Vec sample_row(const EntryLaw& law, long d, Rng& rng) {
  Vec row(d);
  for (long j = 0; j < d; ++j) row(j) = sample_entry(law, rng);
  return row;
}

Mat sample_matrix(const EnsembleSpec& spec, std::uint64_t seed) {
  if (spec.rows < 1 || spec.cols < 1)
    throw std::invalid_argument("sample_matrix: empty shape");
  Mat a(spec.rows, spec.cols);
  for (long i = 0; i < spec.rows; ++i) {
    Rng rng(split_stream(seed, static_cast<std::uint64_t>(i)));
    for (long j = 0; j < spec.cols; ++j)
      a(i, j) = spec.row_normalization * sample_entry(spec.law, rng);
  }
  require_finite(a, "sample_matrix");
  return a;
}

namespace {

// Integer powers |x|^p for p = 2..pmax by running multiplication, accumulated
// into sums[p-2]. Shared by the point estimate and each bootstrap resample.
void accumulate_powers(const std::vector<double>& absx,
                       const std::vector<long>& index, int pmax,
                       std::vector<double>& sums) {
  for (double& s : sums) s = 0.0;
  for (long id : index) {
    double a = absx[static_cast<size_t>(id)];
    double pw = a * a;
    sums[0] += pw;
    for (int p = 3; p <= pmax; ++p) {
      pw *= a;
      sums[static_cast<size_t>(p - 2)] += pw;
    }
  }
}

}  // namespace

MomentProfile profile_samples(const std::vector<double>& samples, double p_max,
                              std::uint64_t seed) {
  const long n = static_cast<long>(samples.size());
  if (n < 10000)
    throw std::invalid_argument("profile_samples: need >= 1e4 samples");
  int pmax = static_cast<int>(std::ceil(p_max));
  if (pmax < 2) throw std::invalid_argument("profile_samples: p_max < 2");

  std::vector<double> absx(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) absx[i] = std::abs(samples[i]);

  std::vector<long> ident(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) ident[static_cast<size_t>(i)] = i;

  const int P = pmax - 1;
  std::vector<double> sums(static_cast<size_t>(P));
  accumulate_powers(absx, ident, pmax, sums);

  MomentProfile prof;
  prof.p_values.resize(static_cast<size_t>(P));
  prof.estimates.resize(static_cast<size_t>(P));
  std::vector<double> moments(static_cast<size_t>(P));
  for (int p = 2; p <= pmax; ++p) {
    size_t k = static_cast<size_t>(p - 2);
    prof.p_values[k] = p;
    moments[k] = sums[k] / double(n);
    prof.estimates[k] = std::pow(moments[k], 1.0 / double(p));
  }

  // Bootstrap the p-th moments: 20 resamples with replacement.
  const int reps = 20;
  std::vector<double> acc(static_cast<size_t>(P), 0.0),
      acc2(static_cast<size_t>(P), 0.0);
  Rng boot(split_stream(seed, 0x626f6f74));
  std::vector<long> idx(static_cast<size_t>(n));
  std::vector<double> rsums(static_cast<size_t>(P));
  for (int r = 0; r < reps; ++r) {
    for (long i = 0; i < n; ++i)
      idx[static_cast<size_t>(i)] =
          static_cast<long>(boot.next_u64() % static_cast<std::uint64_t>(n));
    accumulate_powers(absx, idx, pmax, rsums);
    for (size_t k = 0; k < static_cast<size_t>(P); ++k) {
      double m = rsums[k] / double(n);
      acc[k] += m;
      acc2[k] += m * m;
    }
  }

  prof.rel_se.resize(static_cast<size_t>(P));
  prof.unstable.resize(static_cast<size_t>(P));
  for (size_t k = 0; k < static_cast<size_t>(P); ++k) {
    double mean = acc[k] / reps;
    double var = std::max(0.0, acc2[k] / reps - mean * mean) *
                 (double(reps) / double(reps - 1));
    double se = std::sqrt(var);
    prof.rel_se[k] = (moments[k] > 0 && std::isfinite(moments[k]))
                         ? se / moments[k]
                         : std::numeric_limits<double>::infinity();
    prof.unstable[k] =
        !(std::isfinite(prof.estimates[k]) && prof.rel_se[k] <= 0.2);
  }

  // Least squares log(estimate) = log(lambda) + alpha log(p), stable p only.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (size_t k = 0; k < static_cast<size_t>(P); ++k) {
    if (prof.unstable[k]) continue;
    double x = std::log(prof.p_values[k]);
    double y = std::log(prof.estimates[k]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    double denom = cnt * sxx - sx * sx;
    prof.alpha_hat = (cnt * sxy - sx * sy) / denom;
    prof.lambda_hat = std::exp((sy - prof.alpha_hat * sx) / cnt);
  }
  return prof;
}

MomentProfile moment_profile(const EntryLaw& law, double p_max, long n_samples,
                             std::uint64_t seed) {
  if (n_samples < 10000)
    throw std::invalid_argument("moment_profile: need >= 1e4 samples");
  Rng rng(split_stream(seed, 0x73616d70));
  std::vector<double> xs(static_cast<size_t>(n_samples));
  for (auto& x : xs) x = sample_entry(law, rng);
  return profile_samples(xs, p_max, seed);
}

RowSampler make_row_sampler(const EntryLaw& law, long d) {
  return [law, d](Rng& rng) { return sample_row(law, d, rng); };
}

DirectionSampler make_sphere_sampler(long d) {
  return [d](Rng& rng) {
    Vec v(d);
    double nrm = 0.0;
    do {
      for (long j = 0; j < d; ++j) v(j) = rng.gaussian();
      nrm = v.norm();
    } while (nrm == 0.0);
    return Vec(v / nrm);
  };
}

double small_ball_estimate(const RowSampler& marginal,
                           const DirectionSampler& directions, double A,
                           int n_dirs, long n_samples, std::uint64_t seed) {
  if (n_dirs < 1 || n_samples < 1)
    throw std::invalid_argument("small_ball_estimate: empty sample plan");
  double qmin = 1.0;
  for (int k = 0; k < n_dirs; ++k) {
    Rng dir_rng(split_stream(seed, 2 * static_cast<std::uint64_t>(k)));
    Vec x = directions(dir_rng);
    Rng row_rng(split_stream(seed, 2 * static_cast<std::uint64_t>(k) + 1));
    long hits = 0;
    for (long i = 0; i < n_samples; ++i) {
      Vec phi = marginal(row_rng);
      if (std::abs(phi.dot(x)) >= A) ++hits;
    }
    qmin = std::min(qmin, double(hits) / double(n_samples));
  }
  return qmin;
}

}  // namespace l1synth
