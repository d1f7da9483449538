#pragma once

// Dense phase-II simplex for small LPs of the form
//     max c^T x   s.t.   A x <= b,  x >= 0,   with b >= 0,
// so the slack basis is feasible from the start. Bland's rule (smallest
// index entering, smallest basic index on ratio ties) prevents cycling on the
// heavily degenerate tableaus the null-space certification produces.

#include "l1synth/matcore.hpp"

namespace l1synth {

struct LpResult {
  enum class Status { optimal, unbounded } status = Status::optimal;
  double value = 0.0;  // objective at optimum; unbounded leaves it at the
                       // last vertex value
  Vec x;               // optimal point, or the unbounded ray direction
};

LpResult simplex_max(const Mat& a, const Vec& b, const Vec& c);

}  // namespace l1synth
