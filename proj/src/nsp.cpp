#include "l1synth/nsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "l1synth/rng.hpp"
#include "l1synth/simplex.hpp"

namespace l1synth {

namespace {

void check_cone(const ConeSpec& cone) {
  if (cone.n < 1 || cone.s < 1 || cone.s > cone.n)
    throw std::invalid_argument("cone: need 1 <= s <= n");
  if (!(cone.gamma > 0.0 && cone.gamma <= 1.0))
    throw std::invalid_argument("cone: gamma must be in (0, 1]");
}

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

const char* nsp_status_name(NspStatus s) {
  switch (s) {
    case NspStatus::certified_holds: return "certified_holds";
    case NspStatus::certified_fails: return "certified_fails";
    case NspStatus::estimate_only: return "estimate_only";
    case NspStatus::infeasible_at_size: return "infeasible_at_size";
  }
  return "?";
}

double s_support_gauge(const Vec& v, int s) {
  if (s < 1) throw std::invalid_argument("s_support_gauge: s < 1");
  require_finite(v, "s_support_gauge");
  const long n = v.size();
  Vec w = rearrange_desc(v);
  // 1-based sorted magnitudes; index 0 reads +inf, past-the-end reads 0
  auto wat = [&](long i) -> double {
    if (i <= 0) return std::numeric_limits<double>::infinity();
    return i <= n ? w(i - 1) : 0.0;
  };
  std::vector<double> suffix(static_cast<size_t>(n) + 2, 0.0);
  for (long i = n; i >= 1; --i)
    suffix[static_cast<size_t>(i)] =
        suffix[static_cast<size_t>(i) + 1] + w(i - 1);
  auto suf = [&](long i) { return i <= n ? suffix[static_cast<size_t>(i)] : 0.0; };

  for (int r = 0; r <= s - 1; ++r) {
    double tail = suf(s - r);
    double avg = tail / (r + 1);
    if (wat(s - r - 1) > avg && avg >= wat(s - r)) {
      double acc = 0.0;
      for (long i = 1; i <= s - r - 1; ++i) acc += wat(i) * wat(i);
      return std::sqrt(acc + tail * tail / (r + 1));
    }
  }
  // unreachable for finite input; keep the r = s-1 value as a fallback
  double tail = suf(1);
  return std::sqrt(tail * tail / s);
}

bool in_cone(const Vec& v, const ConeSpec& cone, double norm_tol) {
  check_cone(cone);
  if (v.size() != cone.n) return false;
  if (!v.allFinite()) return false;
  if (std::abs(v.norm() - 1.0) > norm_tol) return false;
  double top2 = top_s_l2(v, cone.s);
  double tail1 = std::max(0.0, v.lpNorm<1>() - top_s_l1(v, cone.s));
  return top2 >= (cone.gamma / std::sqrt(double(cone.s))) * tail1;
}

double cone_tightness(const Vec& v, const ConeSpec& cone) {
  check_cone(cone);
  double top2 = top_s_l2(v, cone.s);
  double tail1 = std::max(0.0, v.lpNorm<1>() - top_s_l1(v, cone.s));
  double rhs = (cone.gamma / std::sqrt(double(cone.s))) * tail1;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return top2 / rhs;
}

Vec cone_repair(const Vec& v, const ConeSpec& cone) {
  check_cone(cone);
  require_finite(v, "cone_repair");
  if (v.size() != cone.n) throw std::invalid_argument("cone_repair: size");
  Vec out = v;
  double nrm = out.norm();
  if (nrm == 0.0) throw std::invalid_argument("cone_repair: zero vector");
  out /= nrm;
  double top2 = top_s_l2(out, cone.s);
  double tail1 = std::max(0.0, out.lpNorm<1>() - top_s_l1(out, cone.s));
  double rhs = (cone.gamma / std::sqrt(double(cone.s))) * tail1;
  if (top2 >= rhs) return out;
  // Shrink everything below the top-s threshold; the top-s set is preserved,
  // so membership afterwards is exact by construction.
  double f = (top2 / rhs) * (1.0 - 1e-12);
  std::vector<int> idx = rearrange_indices(out);
  for (size_t k = static_cast<size_t>(cone.s); k < idx.size(); ++k)
    out(idx[k]) *= f;
  out /= out.norm();
  return out;
}

std::vector<Vec> sample_cone(const ConeSpec& cone, long count,
                             std::uint64_t seed) {
  check_cone(cone);
  if (count < 0) throw std::invalid_argument("sample_cone: count < 0");
  const long n = cone.n;
  const int s = cone.s;
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(count));
  std::vector<long> pool(static_cast<size_t>(n));

  for (long i = 0; i < count; ++i) {
    Rng rng(split_stream(seed, static_cast<std::uint64_t>(i)));
    for (long j = 0; j < n; ++j) pool[static_cast<size_t>(j)] = j;
    // partial Fisher-Yates for an s-subset
    for (int j = 0; j < s; ++j) {
      long r = j + static_cast<long>(rng.next_u64() %
                                     static_cast<std::uint64_t>(n - j));
      std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(r)]);
    }
    Vec v = Vec::Zero(n);
    if (i % 2 == 0) {
      // exactly s-sparse sign vector
      for (int j = 0; j < s; ++j)
        v(pool[static_cast<size_t>(j)]) =
            rng.rademacher() / std::sqrt(double(s));
    } else {
      // dominant part with magnitudes in [0.5, 1.5]/sqrt(s)
      double umin = std::numeric_limits<double>::infinity();
      for (int j = 0; j < s; ++j) {
        double mag = (0.5 + rng.next_unit()) / std::sqrt(double(s));
        umin = std::min(umin, mag);
        v(pool[static_cast<size_t>(j)]) = rng.rademacher() * mag;
      }
      if (n > s) {
        // flat jittered tail, scaled for tightness ratio in [1, 1.05]
        Vec t = Vec::Zero(n);
        double tmax = 0.0, t_l1 = 0.0;
        for (long j = s; j < n; ++j) {
          double mag = 1.0 + 0.1 * rng.next_unit();
          t(pool[static_cast<size_t>(j)]) = rng.rademacher() * mag;
          tmax = std::max(tmax, mag);
          t_l1 += mag;
        }
        double u2 = v.norm();
        double ratio = 1.001 + 0.048 * rng.next_unit();
        double c = u2 * std::sqrt(double(s)) / (cone.gamma * t_l1 * ratio);
        // keep the dominant support on top; fall back to a smaller (hence
        // slacker) tail when the tightness target would overtake it
        c = std::min(c, 0.9 * umin / tmax);
        v += c * t;
      }
    }
    v /= v.norm();
    if (!in_cone(v, cone)) v = cone_repair(v, cone);
    out.push_back(std::move(v));
  }
  return out;
}

NspReport certify_nsp(const Mat& a, int s, double tol) {
  require_finite(a, "certify_nsp");
  const long n = a.cols();
  if (s < 1 || s > n) throw std::invalid_argument("certify_nsp: bad order");
  NspReport rep;
  rep.order = s;
  rep.tol = tol;

  const unsigned long long budget = 1000000ULL;
  unsigned long long combos = choose_capped(n, s, budget);
  // 2^s alone exceeds the budget from s = 20 on
  if (s >= 20 || combos > budget ||
      combos * (1ULL << s) > budget) {
    rep.status = NspStatus::infeasible_at_size;
    return rep;
  }

  Mat B = kernel_basis(a);
  const long k = B.cols();
  if (k == 0) {
    // trivial kernel: nothing to violate
    rep.status = NspStatus::certified_holds;
    return rep;
  }

  const long q = n - s;
  // constraint block shared by all sign patterns of a fixed support
  Mat lhs(2 * q + 1, 2 * k + q);
  Vec rhs = Vec::Zero(2 * q + 1);
  rhs(2 * q) = 1.0;
  Vec cost = Vec::Zero(2 * k + q);

  std::vector<long> T(static_cast<size_t>(s));
  for (int i = 0; i < s; ++i) T[static_cast<size_t>(i)] = i;
  double max_val = 0.0;
  bool boundary = false;

  while (true) {
    // rows of lhs for the complement of T
    lhs.setZero();
    {
      long r = 0;
      size_t ti = 0;
      for (long j = 0; j < n; ++j) {
        if (ti < T.size() && T[ti] == j) {
          ++ti;
          continue;
        }
        lhs.block(2 * r, 0, 1, k) = B.row(j);
        lhs.block(2 * r, k, 1, k) = -B.row(j);
        lhs(2 * r, 2 * k + r) = -1.0;
        lhs.block(2 * r + 1, 0, 1, k) = -B.row(j);
        lhs.block(2 * r + 1, k, 1, k) = B.row(j);
        lhs(2 * r + 1, 2 * k + r) = -1.0;
        ++r;
      }
      for (long c = 0; c < q; ++c) lhs(2 * q, 2 * k + c) = 1.0;
    }

    for (std::uint64_t mask = 0; mask < (1ULL << s); ++mask) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
      for (int b = 0; b < s; ++b) {
        double sgn = ((mask >> b) & 1ULL) ? -1.0 : 1.0;
        g += sgn * B.row(T[static_cast<size_t>(b)]).transpose();
      }
      cost.head(k) = g;
      cost.segment(k, k) = -g;
      LpResult lp = simplex_max(lhs, rhs, cost);
      ++rep.lp_count;
      if (lp.status == LpResult::Status::unbounded) {
        Vec w = lp.x.head(k) - lp.x.segment(k, k);
        Vec witness = B * w;
        witness /= witness.norm();
        rep.status = NspStatus::certified_fails;
        rep.witness = witness;
        rep.max_lp_value = std::numeric_limits<double>::infinity();
        return rep;
      }
      max_val = std::max(max_val, lp.value);
      if (lp.value >= 1.0 + tol) {
        Vec w = lp.x.head(k) - lp.x.segment(k, k);
        Vec witness = B * w;
        witness /= witness.norm();
        rep.status = NspStatus::certified_fails;
        rep.witness = witness;
        rep.max_lp_value = max_val;
        return rep;
      }
      if (lp.value >= 1.0 - tol) boundary = true;
    }

    // next support, lexicographic
    int i = s - 1;
    while (i >= 0 && T[static_cast<size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++T[static_cast<size_t>(i)];
    for (int j = i + 1; j < s; ++j)
      T[static_cast<size_t>(j)] = T[static_cast<size_t>(j - 1)] + 1;
  }

  rep.max_lp_value = max_val;
  rep.status = boundary ? NspStatus::estimate_only : NspStatus::certified_holds;
  return rep;
}

NspReport estimate_robust_tau(const Mat& a, const ConeSpec& cone,
                              long n_samples, int refine_iters,
                              std::uint64_t seed) {
  check_cone(cone);
  require_finite(a, "estimate_robust_tau");
  if (a.cols() != cone.n)
    throw std::invalid_argument("estimate_robust_tau: dimension mismatch");
  if (n_samples < 1)
    throw std::invalid_argument("estimate_robust_tau: n_samples < 1");

  NspReport rep;
  rep.order = cone.s;
  rep.gamma = cone.gamma;
  rep.tol = 0.0;
  rep.status = NspStatus::estimate_only;

  std::vector<Vec> samples = sample_cone(cone, n_samples, seed);
  std::vector<std::pair<double, size_t>> ranked;
  ranked.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i)
    ranked.emplace_back((a * samples[i]).norm(), i);
  std::sort(ranked.begin(), ranked.end());

  double L = op_norm(a);
  Eigen::MatrixXd gram = a.transpose() * a;
  double best_val = ranked.front().first;
  Vec best_v = samples[ranked.front().second];

  size_t n_refine = std::min<size_t>(5, ranked.size());
  for (size_t c = 0; c < n_refine; ++c) {
    Vec v = samples[ranked[c].second];
    double val = ranked[c].first;
    double eta = (L > 0) ? 0.25 / (L * L) : 0.0;
    for (int it = 0; it < refine_iters && eta > 0; ++it) {
      Vec cand = v - eta * 2.0 * (gram * v);
      double nc = cand.norm();
      if (nc == 0.0) break;
      cand /= nc;
      if (!in_cone(cand, cone)) cand = cone_repair(cand, cone);
      double cv = (a * cand).norm();
      if (cv < val) {
        v = cand;
        val = cv;
        eta *= 1.2;
      } else {
        eta *= 0.5;
      }
    }
    if (val < best_val) {
      best_val = val;
      best_v = v;
    }
  }

  rep.witness = best_v;
  rep.tau_hat = best_val > 0 ? 1.0 / best_val
                             : std::numeric_limits<double>::infinity();
  rep.max_lp_value = 0.0;
  return rep;
}

}  // namespace l1synth
