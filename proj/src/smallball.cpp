#include "l1synth/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace l1synth {

WidthEstimate estimate_width(const Dict& dict, const RowSampler& rows, long m,
                             int s, double gamma, long n_trials,
                             std::uint64_t seed) {
  if (m < 1 || n_trials < 1)
    throw std::invalid_argument("estimate_width: empty plan");
  const long d = dict.mat.rows();
  WidthEstimate est;
  est.n_trials = n_trials;
  est.m = m;
  est.s = s;
  double acc = 0.0, acc2 = 0.0;
  const double scale = 1.0 / std::sqrt(double(m));
  for (long t = 0; t < n_trials; ++t) {
    Rng rng(split_stream(seed, static_cast<std::uint64_t>(t)));
    Vec V = Vec::Zero(d);
    for (long i = 0; i < m; ++i) {
      Vec phi = rows(rng);
      if (phi.size() != d)
        throw std::invalid_argument("estimate_width: row dimension");
      V += rng.rademacher() * phi;
    }
    V *= scale;
    double val = top_s_l2(dict.mat.transpose() * V, s) / double(m);
    acc += val;
    acc2 += val * val;
  }
  est.raw_value = acc / double(n_trials);
  double var = std::max(0.0, acc2 / double(n_trials) -
                                 est.raw_value * est.raw_value);
  est.std_error = std::sqrt(var / double(n_trials));
  if (gamma > 0.0) {
    est.gamma = gamma;
    est.cone_factor = 2.0 + 1.0 / gamma;
  }
  est.value = est.raw_value * est.cone_factor;
  return est;
}

LemmaCheck check_rearrangement_lemma(
    const std::function<EntryLaw(long n, int s)>& law_for_point,
    const std::vector<long>& n_grid, const std::vector<int>& s_grid,
    long n_trials, double bound_constant, std::uint64_t seed) {
  if (n_trials < 1)
    throw std::invalid_argument("check_rearrangement_lemma: n_trials < 1");
  LemmaCheck check;
  check.bound_constant = bound_constant;
  check.all_pass = true;
  std::uint64_t point_key = 0;
  for (long n : n_grid) {
    for (int s : s_grid) {
      ++point_key;
      if (s < 1 || 2L * s > n) continue;  // bound degenerates past n/2
      EntryLaw law = law_for_point(n, s);
      LemmaPoint pt;
      pt.n = n;
      pt.s = s;
      pt.law = law_tag(law);
      double acc = 0.0, acc2 = 0.0;
      std::uint64_t pseed = split_stream(seed, point_key);
      for (long t = 0; t < n_trials; ++t) {
        Rng rng(split_stream(pseed, static_cast<std::uint64_t>(t)));
        Vec z(n);
        for (long j = 0; j < n; ++j) z(j) = sample_entry(law, rng);
        double val = top_s_l2(z, s);
        acc += val;
        acc2 += val * val;
      }
      pt.estimate = acc / double(n_trials);
      double var =
          std::max(0.0, acc2 / double(n_trials) - pt.estimate * pt.estimate);
      pt.std_error = std::sqrt(var / double(n_trials));
      pt.bound = std::sqrt(double(s) * std::log(double(n) / double(s)));
      pt.ratio = pt.estimate / pt.bound;
      pt.pass = pt.ratio <= bound_constant;
      check.all_pass = check.all_pass && pt.pass;
      check.points.push_back(std::move(pt));
    }
  }
  return check;
}

KhintchineCheck check_khintchine(const EntryLaw& law, long d, long m,
                                 const Vec& a_dir, double p_max, long n_trials,
                                 std::uint64_t seed) {
  if (d < 1 || m < 1) throw std::invalid_argument("check_khintchine: shape");
  if (a_dir.size() != d)
    throw std::invalid_argument("check_khintchine: direction dimension");
  KhintchineCheck check;
  check.law = law_tag(law);
  check.m = m;
  check.n_trials = n_trials;
  check.p_reliable_max = std::log(double(n_trials)) / 2.0;

  std::vector<double> xs(static_cast<size_t>(n_trials));
  const double scale = 1.0 / std::sqrt(double(m));
  for (long t = 0; t < n_trials; ++t) {
    Rng rng(split_stream(seed, static_cast<std::uint64_t>(t)));
    double x = 0.0;
    for (long i = 0; i < m; ++i) {
      Vec phi = sample_row(law, d, rng);
      x += rng.rademacher() * phi.dot(a_dir);
    }
    xs[static_cast<size_t>(t)] = x * scale;
  }
  check.profile = profile_samples(xs, p_max, split_stream(seed, 0x6b68));
  check.growth_exponent = check.profile.alpha_hat;

  check.sqrtp_ok = true;
  double est2 = check.profile.estimates.empty() ? 0.0
                                                : check.profile.estimates[0];
  for (size_t k = 0; k < check.profile.p_values.size(); ++k) {
    if (check.profile.unstable[k]) continue;
    double p = check.profile.p_values[k];
    if (check.profile.estimates[k] > 2.0 * est2 * std::sqrt(p / 2.0))
      check.sqrtp_ok = false;
  }
  return check;
}

LowerBoundCheck check_lower_bound(const Dict& dict, const EntryLaw& law,
                                  const ConeSpec& cone, long m, double A,
                                  double t, int n_reps, long n_cone_samples,
                                  int q_dirs, long q_samples,
                                  long width_trials, std::uint64_t seed) {
  const long d = dict.mat.rows(), n = dict.mat.cols();
  if (cone.n != n)
    throw std::invalid_argument("check_lower_bound: cone/dict mismatch");
  if (n_reps < 1 || n_cone_samples < 1)
    throw std::invalid_argument("check_lower_bound: empty plan");

  LowerBoundCheck check;
  check.A = A;
  check.t = t;
  check.m = m;

  // marginal of psi = D^T phi, directions drawn from the cone
  Mat dt = dict.mat.transpose();
  RowSampler marginal = [&law, d, &dt](Rng& rng) {
    return Vec(dt * sample_row(law, d, rng));
  };
  std::uint64_t dir_seed = split_stream(seed, 0xd19);
  std::uint64_t dir_counter = 0;
  DirectionSampler cone_dirs = [&cone, dir_seed, &dir_counter](Rng&) {
    // sample_cone owns its stream layout; pull one vector per call
    return sample_cone(cone, 1, split_stream(dir_seed, dir_counter++))[0];
  };
  check.q_hat = small_ball_estimate(marginal, cone_dirs, 2.0 * A, q_dirs,
                                    q_samples, split_stream(seed, 0x51));

  WidthEstimate west =
      estimate_width(dict, make_row_sampler(law, d), m, cone.s, cone.gamma,
                     width_trials, split_stream(seed, 0x57));
  check.w_hat = west.value;

  const double rt_m = std::sqrt(double(m));
  check.rhs = A * rt_m * check.q_hat - 2.0 * rt_m * check.w_hat - A * t;

  EnsembleSpec phi_spec;
  phi_spec.law = law;
  phi_spec.rows = m;
  phi_spec.cols = d;
  phi_spec.row_normalization = 1.0;  // the sqrt(m) factors sit in the bound
  for (int r = 0; r < n_reps; ++r) {
    std::uint64_t rep_seed = split_stream(seed, 0x1000 + static_cast<std::uint64_t>(r));
    Mat phi = sample_matrix(phi_spec, split_stream(rep_seed, 1));
    Mat psi = phi * dict.mat;
    std::vector<Vec> xs = sample_cone(cone, n_cone_samples, split_stream(rep_seed, 2));
    double lhs = std::numeric_limits<double>::infinity();
    for (const Vec& x : xs) lhs = std::min(lhs, (psi * x).norm());
    LowerBoundRep rep;
    rep.lhs = lhs;
    rep.holds = lhs >= check.rhs;
    if (rep.holds) ++check.n_holds;
    check.reps.push_back(rep);
  }
  return check;
}

}  // namespace l1synth
