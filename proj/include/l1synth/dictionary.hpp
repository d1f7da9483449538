#pragma once

// Dictionaries for synthesis-sparse signals: d x n with d <= n, atoms as
// columns. Coherence drives the admissible sparsity report; full-spark status
// gates the reduction from dictionary NSP to plain NSP of the product matrix.

#include <cstdint>

#include "l1synth/ensembles.hpp"
#include "l1synth/matcore.hpp"

namespace l1synth {

struct Dict {
  Mat mat;           // d x n, d <= n
  double rho = 0.0;  // operator norm of mat
  double mu = 0.0;   // coherence of the columns
};

struct CoherenceReport {
  double mu = 0.0;
  // Largest s with mu <= 1/(16 (s-1)); mu == 0 reports n (every size passes).
  long admissible_s = 0;
};

enum class SparkStatus { full_spark, deficient, infeasible_at_size };

Dict make_identity(long n);

// Entries law / sqrt(d); Rademacher gives exactly unit-norm atoms, the other
// laws approximately so. Uses the same per-row split-stream sampling as
// sample_matrix.
Dict make_random_dict(const EntryLaw& law, long d, long n, std::uint64_t seed);

// Validates shape and finiteness, fills rho and mu.
Dict dict_from_matrix(const Mat& m);

CoherenceReport coherence(const Mat& dict);

// Checks every d x d column submatrix for nonsingularity (smallest singular
// value > tol * largest). Refuses rather than guesses when C(n, d) > 1e6.
SparkStatus full_spark(const Mat& dict, double tol = 1e-10);

}  // namespace l1synth
