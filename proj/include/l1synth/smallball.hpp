#pragma once

// Monte Carlo estimators for the quantities in the measurement lower bound:
// mean empirical widths over the sparse hull, the sorted-rearrangement moment
// bound, Khintchine-type L^p growth of projected sums, and the assembled
// small-ball lower-bound check
//     inf_{x in S} ||Psi x||_2  >=  A sqrt(m) Q_{2A} - 2 sqrt(m) W_m - A t.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "l1synth/dictionary.hpp"
#include "l1synth/ensembles.hpp"
#include "l1synth/matcore.hpp"
#include "l1synth/nsp.hpp"

namespace l1synth {

struct WidthEstimate {
  double value = 0.0;      // cone-corrected when cone_factor > 1
  double raw_value = 0.0;  // mean of m^{-1} top_s_l2(D^T V, s)
  double std_error = 0.0;  // of raw_value
  long n_trials = 0;
  long m = 0;
  int s = 0;
  double gamma = 0.0;       // 0 when no cone correction requested
  double cone_factor = 1.0; // 2 + 1/gamma when gamma > 0
};

// Per trial: draw phi_1..phi_m (unnormalized rows) and signs eps_i, form
// V = m^{-1/2} sum eps_i phi_i and evaluate m^{-1} top_s_l2(D^T V, s).
// gamma > 0 additionally multiplies by (2 + 1/gamma), which dominates the
// width of the gamma-cone by the sparse-hull inclusion.
WidthEstimate estimate_width(const Dict& dict, const RowSampler& rows, long m,
                             int s, double gamma, long n_trials,
                             std::uint64_t seed);

struct LemmaPoint {
  long n = 0;
  int s = 0;
  std::string law;
  double estimate = 0.0;   // mean top_s_l2 of n iid coordinates
  double std_error = 0.0;
  double bound = 0.0;      // sqrt(s * log(n/s)), natural log
  double ratio = 0.0;
  bool pass = false;       // ratio <= bound_constant
};

struct LemmaCheck {
  std::vector<LemmaPoint> points;
  double bound_constant = 3.0;
  bool all_pass = false;
};

// law_for_point lets the degrees of freedom track the grid (e.g. student-t
// with dof = ceil(2 log(n/s))). Grid points with s > n/2 are skipped: the
// bound degenerates there.
LemmaCheck check_rearrangement_lemma(
    const std::function<EntryLaw(long n, int s)>& law_for_point,
    const std::vector<long>& n_grid, const std::vector<int>& s_grid,
    long n_trials, double bound_constant, std::uint64_t seed);

struct KhintchineCheck {
  MomentProfile profile;        // of <a, V>, V = m^{-1/2} sum eps_i phi_i
  double growth_exponent = 0.0; // fitted alpha over stable p
  bool sqrtp_ok = false;        // est_p <= 2 est_2 sqrt(p/2) at stable p
  double p_reliable_max = 0.0;  // log(n_trials)/2 heuristic ceiling
  std::string law;
  long m = 0;
  long n_trials = 0;
};

KhintchineCheck check_khintchine(const EntryLaw& law, long d, long m,
                                 const Vec& a_dir, double p_max, long n_trials,
                                 std::uint64_t seed);

struct LowerBoundRep {
  double lhs = 0.0;  // sampled inf over cone points of ||Psi x||_2
  bool holds = false;
};

struct LowerBoundCheck {
  double q_hat = 0.0;       // small-ball estimate at level 2A over the cone
  double w_hat = 0.0;       // cone-corrected width estimate
  double rhs = 0.0;         // A sqrt(m) q_hat - 2 sqrt(m) w_hat - A t
  std::vector<LowerBoundRep> reps;
  long n_holds = 0;
  double A = 0.0, t = 0.0;
  long m = 0;
};

// Q and W are estimated once and shared; each repetition draws a fresh Psi =
// Phi * dict (unnormalized rows) and minimizes over fresh cone samples.
LowerBoundCheck check_lower_bound(const Dict& dict, const EntryLaw& law,
                                  const ConeSpec& cone, long m, double A,
                                  double t, int n_reps, long n_cone_samples,
                                  int q_dirs, long q_samples,
                                  long width_trials, std::uint64_t seed);

}  // namespace l1synth
