#pragma once

// Heavy-tailed measurement ensembles: entry laws, row/matrix sampling with
// per-row split streams, empirical L^p moment profiles, and the small-ball
// (marginal tail) estimator.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "l1synth/matcore.hpp"
#include "l1synth/rng.hpp"

namespace l1synth {

enum class Law { gaussian, rademacher, laplace, student_t, cauchy };

struct EntryLaw {
  Law kind = Law::gaussian;
  int dof = 0;  // student_t only; must be >= 1 there, ignored otherwise
};

// Variance convention: gaussian, rademacher and laplace are unit variance by
// construction; student_t with dof >= 3 is divided by sqrt(dof/(dof-2)) so the
// entries are unit variance too; student_t dof 1..2 and cauchy have no finite
// variance and are used raw.
double sample_entry(const EntryLaw& law, Rng& rng);

// Tag used in CSV cells and reports, e.g. "gaussian", "student_t(7)".
std::string law_tag(const EntryLaw& law);

struct EnsembleSpec {
  EntryLaw law;
  long rows = 0;
  long cols = 0;
  double row_normalization = 1.0;  // multiplies every entry, e.g. 1/sqrt(m)
};

// Row i is drawn from Rng(split_stream(seed, i)), entries left to right, then
// scaled by row_normalization. Output depends only on (spec, seed).
Mat sample_matrix(const EnsembleSpec& spec, std::uint64_t seed);

Vec sample_row(const EntryLaw& law, long d, Rng& rng);

struct MomentProfile {
  std::vector<double> p_values;   // integer grid 2..ceil(p_max)
  std::vector<double> estimates;  // empirical ||xi||_{L^p}
  std::vector<double> rel_se;     // bootstrap relative SE of the p-th moment
  std::vector<char> unstable;     // rel_se > 0.2 (or non-finite estimate)
  double lambda_hat = 0.0;        // fit log||xi||_p ~ log(lambda) + alpha log p
  double alpha_hat = 0.0;         // over stable p only
};

// Instability is judged on the p-th absolute moment (pre-root scale), where
// heavy tails actually show; the p-th root would mask a factor-3 swing in the
// moment as a few percent. 20 bootstrap resamples.
MomentProfile moment_profile(const EntryLaw& law, double p_max,
                             long n_samples, std::uint64_t seed);

// Same estimator applied to caller-provided samples (used for derived
// variables like <a, V>).
MomentProfile profile_samples(const std::vector<double>& samples, double p_max,
                              std::uint64_t seed);

using RowSampler = std::function<Vec(Rng&)>;
using DirectionSampler = std::function<Vec(Rng&)>;

RowSampler make_row_sampler(const EntryLaw& law, long d);
DirectionSampler make_sphere_sampler(long d);

// Estimates Q_A = inf_x P(|<phi, x>| >= A) over n_dirs sampled directions,
// n_samples fresh marginal draws per direction. A sampled infimum, so an
// upper estimate of the true Q_A; callers must treat it as an estimate, not a
// certificate.
double small_ball_estimate(const RowSampler& marginal,
                           const DirectionSampler& directions, double A,
                           int n_dirs, long n_samples, std::uint64_t seed);

}  // namespace l1synth
