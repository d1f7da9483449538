#pragma once

// Null-space property certification and robust-NSP constant estimation.
//
// Certification sweeps every (support T, sign pattern sigma) pair and solves
//     max  sigma^T (B w)_T   s.t.  ||(B w)_{T^c}||_1 <= 1
// over the kernel parametrization v = B w. The property of order s holds iff
// every optimum is < 1. Estimation works on the cone
//     S_gamma = { v on the unit sphere :
//                 ||v_T||_2 >= (gamma/sqrt(s)) ||v_{T^c}||_1, T = top-s }
// and reports 1 / min ||A v||_2 over sampled-and-refined cone points; that is
// always an estimate (a lower bound on tau can only come from the sampled
// directions), never a certificate.

#include <cstdint>
#include <optional>
#include <vector>

#include "l1synth/matcore.hpp"

namespace l1synth {

struct ConeSpec {
  long n = 0;
  int s = 0;
  double gamma = 0.0;  // in (0, 1]
};

enum class NspStatus {
  certified_holds,
  certified_fails,
  estimate_only,
  infeasible_at_size
};

struct NspReport {
  int order = 0;
  NspStatus status = NspStatus::estimate_only;
  double gamma = 0.0;         // 0 on the plain certification path
  double tau_hat = 0.0;       // estimation path only
  double max_lp_value = 0.0;  // largest LP optimum seen (certification path)
  std::optional<Vec> witness;
  long lp_count = 0;
  double tol = 0.0;
};

const char* nsp_status_name(NspStatus s);

// Gauge of the convex hull of unit-norm s-sparse vectors (the s-support
// norm), by the sorted-prefix formula: with w = magnitudes sorted descending
// and w_0 = +inf, find the unique r in {0..s-1} with
//   w_{s-r-1} > (1/(r+1)) sum_{i>=s-r} w_i >= w_{s-r},
// then gauge^2 = sum_{i<s-r} w_i^2 + (sum_{i>=s-r} w_i)^2 / (r+1).
double s_support_gauge(const Vec& v, int s);

// Membership: ||v||_2 within norm_tol of 1 and
// top_s_l2(v, s) >= (gamma/sqrt(s)) * (||v||_1 - top_s_l1(v, s)).
bool in_cone(const Vec& v, const ConeSpec& cone, double norm_tol = 1e-9);

// LHS/RHS of the membership inequality; +inf when the tail vanishes.
double cone_tightness(const Vec& v, const ConeSpec& cone);

// Scales the tail until membership holds (keeping the top-s set), then
// renormalizes. Vectors already in the cone are only renormalized.
Vec cone_repair(const Vec& v, const ConeSpec& cone);

// Mixture sampler: even indices are exactly s-sparse sign vectors, odd
// indices have an s-sparse dominant part plus a flat tail scaled so the
// membership inequality is tight within [1, 1.05]. Every returned vector
// passes in_cone.
std::vector<Vec> sample_cone(const ConeSpec& cone, long count,
                             std::uint64_t seed);

// Exact LP sweep; refuses when C(n, s) * 2^s > 1e6 (infeasible_at_size).
// Optima < 1 - tol everywhere: certified_holds. Any optimum >= 1 + tol or an
// unbounded LP: certified_fails with the witness kernel vector. Optima inside
// the tol band: estimate_only (boundary).
NspReport certify_nsp(const Mat& a, int s, double tol = 1e-7);

// Sampled infimum of ||A v||_2 over the cone with projected-descent
// refinement of the best candidates; tau_hat = 1 / min. Always estimate_only.
NspReport estimate_robust_tau(const Mat& a, const ConeSpec& cone,
                              long n_samples, int refine_iters,
                              std::uint64_t seed);

}  // namespace l1synth
