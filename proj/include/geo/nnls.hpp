#pragma once

#include "geo/base.hpp"

namespace geo {

// Lawson-Hanson active-set NNLS:  min_x ||A x - b||_2  s.t.  x >= 0.
// Used for John-decomposition weights; A has at most a few hundred columns.
struct NnlsResult {
  Vec x;
  double residual = 0.0;  // ||A x - b||
};

NnlsResult nnls(const Mat& A, const Vec& b, int max_iter = 0);

}  // namespace geo
