#pragma once

// Deterministic splittable RNG used everywhere randomness is needed.
//
// Core generator is SplitMix64 (Steele/Lea/Flood `splitmix64`): state advances
// by the golden-gamma increment, output is a 64-bit finalizer mix. The integer
// stream depends only on the seed, never on platform or thread schedule.
//
// Stream splitting rule (the only one used in this codebase):
//   split(seed, key) = mix64(seed XOR (key + 1) * 0x9E3779B97F4A7C15)
// Nested splits give per-cell / per-trial streams: a trial stream is
// split(split(master_seed, cell_hash), trial_index), so any trial can be
// replayed in isolation and results do not depend on worker count.
//
// Floating-point transforms are explicit (Box-Muller etc.), not std::
// distributions, whose output sequences differ between standard libraries.

#include <cmath>
#include <cstdint>

namespace l1synth {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t split_stream(std::uint64_t seed, std::uint64_t key) {
  return mix64(seed ^ ((key + 1) * 0x9E3779B97F4A7C15ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix64(z);
  }

  // Uniform on the open interval (0,1); 52 random bits plus a half-ulp
  // offset, so 0 and 1 are never returned and log/tan transforms stay finite.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) *
           (1.0 / 4503599627370496.0);
  }

  // Box-Muller, one normal per call (the sine mate is discarded; sequence
  // stays a pure function of the integer stream).
  double gaussian() {
    double u1 = next_unit();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  // Unit-variance Laplace (scale 1/sqrt(2)).
  double laplace() {
    double u = next_unit();
    const double b = 0.70710678118654752440;
    return (u < 0.5) ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
  }

  double cauchy() {
    return std::tan(3.1415926535897932384626433832795 * (next_unit() - 0.5));
  }

  // Student-t as N(0,1) / sqrt(chi2_dof / dof), chi2 formed from dof squared
  // normals. Not standardized here; see EntryLaw for the variance convention.
  double student_t(int dof) {
    double g = gaussian();
    double chi2 = 0.0;
    for (int i = 0; i < dof; ++i) {
      double z = gaussian();
      chi2 += z * z;
    }
    return g / std::sqrt(chi2 / static_cast<double>(dof));
  }

 private:
  std::uint64_t state_;
};

}  // namespace l1synth
