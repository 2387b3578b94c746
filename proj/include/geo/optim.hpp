#pragma once

#include <functional>

#include "geo/base.hpp"

namespace geo {

// Nelder-Mead with standard reflection/expansion/contraction/shrink moves.
// The affine-ratio searches restart this from many seeded points, so the
// local routine can stay simple.
struct NmOptions {
  int max_iter = 4000;
  double xtol = 1e-10;
  double ftol = 1e-12;
  double step = 0.25;  // initial simplex edge
};

struct NmResult {
  Vec x;
  double f = 0.0;
  int iters = 0;
};

NmResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                     const NmOptions& opt = {});

// One-dimensional golden-section minimization on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol = 1e-12, int max_iter = 200);

}  // namespace geo
