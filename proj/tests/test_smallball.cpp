#include <doctest.h>

#include <cmath>

#include "l1synth/smallball.hpp"

using namespace l1synth;

namespace {

EntryLaw law_of(Law k, int dof = 0) {
  EntryLaw law;
  law.kind = k;
  law.dof = dof;
  return law;
}

// E ||N(0, I_n)||_2 = sqrt(2) Gamma((n+1)/2) / Gamma(n/2)
double chi_mean(int n) {
  return std::sqrt(2.0) * std::exp(std::lgamma((n + 1) / 2.0) -
                                   std::lgamma(n / 2.0));
}

}  // namespace

TEST_CASE("width of a deterministic one-row sampler is exact") {
  // phi = e1 always, m = 1: V = +-e1, top_s_l2 = 1, value = 1/m = 1
  Dict dict = make_identity(4);
  RowSampler fixed = [](Rng&) {
    Vec v = Vec::Zero(4);
    v(0) = 1.0;
    return v;
  };
  WidthEstimate est = estimate_width(dict, fixed, 1, 2, 0.0, 50, 7);
  CHECK(est.raw_value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(est.std_error == doctest::Approx(0.0));
  CHECK(est.cone_factor == 1.0);

  // the gamma correction is the (2 + 1/gamma) factor
  WidthEstimate corr = estimate_width(dict, fixed, 1, 2, 0.5, 50, 7);
  CHECK(corr.cone_factor == doctest::Approx(4.0));
  CHECK(corr.value == doctest::Approx(4.0 * corr.raw_value));
}

TEST_CASE("gaussian width at s = n matches the chi mean") {
  // V = m^{-1/2} sum eps_i phi_i is standard normal for gaussian rows, and
  // top_n_l2 is its full norm
  const int n = 16;
  const long m = 4;
  Dict dict = make_identity(n);
  WidthEstimate est = estimate_width(
      dict, make_row_sampler(law_of(Law::gaussian), n), m, n, 0.0, 4000, 11);
  double expect = chi_mean(n) / double(m);
  CHECK(est.raw_value == doctest::Approx(expect).epsilon(0.02));
  CHECK(est.std_error < 0.01 * expect * 5);
  CHECK(est.n_trials == 4000);
}

TEST_CASE("width shrinks with m and grows with s") {
  Dict dict = make_identity(32);
  auto rows = make_row_sampler(law_of(Law::gaussian), 32);
  WidthEstimate m16 = estimate_width(dict, rows, 16, 2, 0.0, 800, 3);
  WidthEstimate m64 = estimate_width(dict, rows, 64, 2, 0.0, 800, 3);
  CHECK(m64.raw_value < m16.raw_value);
  WidthEstimate s8 = estimate_width(dict, rows, 16, 8, 0.0, 800, 3);
  CHECK(s8.raw_value > m16.raw_value);
}

TEST_CASE("rearrangement ratios sit far below the pinned constant") {
  auto gauss = [](long, int) {
    EntryLaw law;
    law.kind = Law::gaussian;
    return law;
  };
  LemmaCheck check =
      check_rearrangement_lemma(gauss, {1024}, {1}, 600, 3.0, 17);
  REQUIRE(check.points.size() == 1);
  const LemmaPoint& pt = check.points[0];
  // E max |z_i| over 1024 gaussians is near sqrt(2 ln 1024) = 3.72,
  // bound = sqrt(ln 1024) = 2.63: ratio lands around 1.4
  CHECK(pt.bound == doctest::Approx(std::sqrt(std::log(1024.0))).epsilon(1e-12));
  CHECK(pt.ratio > 1.1);
  CHECK(pt.ratio < 1.7);
  CHECK(pt.pass);
  CHECK(check.all_pass);
  CHECK(pt.std_error < 0.05);
}

TEST_CASE("rearrangement grid skips degenerate points") {
  auto gauss = [](long, int) {
    EntryLaw law;
    law.kind = Law::gaussian;
    return law;
  };
  LemmaCheck check =
      check_rearrangement_lemma(gauss, {8}, {1, 4, 6}, 100, 3.0, 5);
  // 2s > n drops s = 6 (and s = 4 survives: 8 = 2s is allowed)
  CHECK(check.points.size() == 2);
}

TEST_CASE("khintchine growth for rademacher sums is square-root like") {
  KhintchineCheck check = check_khintchine(law_of(Law::rademacher), 8, 16,
                                           Vec::Unit(8, 0), 6.0, 30000, 23);
  CHECK(check.growth_exponent < 0.6);
  CHECK(check.sqrtp_ok);
  CHECK(check.law == "rademacher");
  // p grid 2..6
  REQUIRE(check.profile.p_values.size() == 5);
  // the p = 2 norm of <e1, V> is the entry second moment, 1
  CHECK(check.profile.estimates[0] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("khintchine flags the heavy tail of low-dof student t") {
  KhintchineCheck check = check_khintchine(law_of(Law::student_t, 3), 8, 16,
                                           Vec::Unit(8, 0), 6.0, 30000, 29);
  // the projected sum keeps tail index 3, so moments at p >= 3 blow up in
  // the bootstrap
  bool any_unstable = false;
  for (char u : check.profile.unstable) any_unstable = any_unstable || u;
  CHECK(any_unstable);
  CHECK(check.law == "student_t(3)");
  CHECK(check.p_reliable_max == doctest::Approx(std::log(30000.0) / 2.0));
}

TEST_CASE("assembled lower bound never overshoots the sampled infimum") {
  Dict dict = make_identity(8);
  ConeSpec cone{8, 1, 1.0};
  LowerBoundCheck check = check_lower_bound(
      dict, law_of(Law::gaussian), cone, 16, 0.25, 0.0, 8, 60, 30, 400, 300, 31);
  CHECK(check.n_holds == 8);
  REQUIRE(check.reps.size() == 8);
  for (const auto& rep : check.reps) {
    CHECK(rep.holds);
    CHECK(rep.lhs >= check.rhs);
    CHECK(rep.lhs > 0.0);
  }
  // rhs assembles from the published pieces
  double rhs = 0.25 * std::sqrt(16.0) * check.q_hat -
               2.0 * std::sqrt(16.0) * check.w_hat - 0.25 * 0.0;
  CHECK(check.rhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(check.q_hat > 0.0);
  CHECK(check.q_hat <= 1.0);
  CHECK(check.w_hat > 0.0);
}
