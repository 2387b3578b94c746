#pragma once

#include "geo/base.hpp"

namespace geo {

// Dense two-phase simplex for small geometry LPs (a few hundred rows, at most
// a dozen free variables). Solves
//     min c'x   s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x free.
// No LP library ships in this environment, and every use here is tiny and
// dense, so a tableau method with Bland fallback is the right tool.

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  double value = 0.0;
};

struct LpProblem {
  Vec c;
  Mat A_ub;  // may be 0×n
  Vec b_ub;
  Mat A_eq;  // may be 0×n
  Vec b_eq;
  bool maximize = false;
};

LpResult solve_lp(const LpProblem& p);

// Convenience wrapper for the common inequality-only case.
LpResult solve_lp(const Vec& c, const Mat& A_ub, const Vec& b_ub, bool maximize = false);

}  // namespace geo
