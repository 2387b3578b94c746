#include "geo/nnls.hpp"

#include <limits>
#include <vector>

namespace geo {

NnlsResult nnls(const Mat& A, const Vec& b, int max_iter) {
  const int n = static_cast<int>(A.cols());
  if (max_iter <= 0) max_iter = 5 * std::max(n, 40);

  Vec x = Vec::Zero(n);
  std::vector<bool> passive(n, false);
  int n_passive = 0;

  auto solve_passive = [&](void) -> Vec {
    Mat Ap(A.rows(), n_passive);
    std::vector<int> idx;
    idx.reserve(n_passive);
    for (int j = 0; j < n; ++j) {
      if (passive[j]) {
        Ap.col(static_cast<int>(idx.size())) = A.col(j);
        idx.push_back(j);
      }
    }
    Vec zp = Ap.colPivHouseholderQr().solve(b);
    Vec z = Vec::Zero(n);
    for (size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[k];
    return z;
  };

  const double wtol = 1e-12 * std::max(1.0, b.norm()) * std::max(1.0, A.cwiseAbs().maxCoeff());
  for (int outer = 0; outer < max_iter; ++outer) {
    Vec w = A.transpose() * (b - A * x);
    int best = -1;
    double wbest = wtol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > wbest) { wbest = w[j]; best = j; }
    }
    if (best < 0) break;
    passive[best] = true;
    ++n_passive;

    Vec z = solve_passive();
    int guard = 0;
    while (guard++ < n + 1) {
      double alpha = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0.0) {
          double a = x[j] / (x[j] - z[j]);
          alpha = std::min(alpha, a);
        }
      }
      if (!std::isfinite(alpha)) break;  // all passive components positive
      for (int j = 0; j < n; ++j) {
        if (passive[j]) x[j] += alpha * (z[j] - x[j]);
      }
      for (int j = 0; j < n; ++j) {
        if (passive[j] && x[j] <= 1e-14) {
          passive[j] = false;
          x[j] = 0.0;
          --n_passive;
        }
      }
      if (n_passive == 0) { z = Vec::Zero(n); break; }
      z = solve_passive();
    }
    x = z.cwiseMax(0.0);
  }

  return {x, (A * x - b).norm()};
}

}  // namespace geo
