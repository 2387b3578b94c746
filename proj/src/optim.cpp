#include "geo/optim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace geo {

NmResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                     const NmOptions& opt) {
  const int n = static_cast<int>(x0.size());
  std::vector<Vec> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) xs[i + 1][i] += opt.step;
  for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<int> ord(n + 1);
  int iters = 0;
  while (iters++ < opt.max_iter) {
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    int lo = ord[0], hi = ord[n], next_hi = ord[n - 1];

    double span = 0.0;
    for (int i = 0; i <= n; ++i) span = std::max(span, (xs[i] - xs[lo]).lpNorm<Eigen::Infinity>());
    if (span < opt.xtol && std::abs(fs[hi] - fs[lo]) < opt.ftol) break;

    Vec centroid = Vec::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != hi) centroid += xs[i];
    }
    centroid /= n;

    Vec xr = centroid + (centroid - xs[hi]);
    double fr = f(xr);
    if (fr < fs[lo]) {
      Vec xe = centroid + 2.0 * (centroid - xs[hi]);
      double fe = f(xe);
      if (fe < fr) { xs[hi] = xe; fs[hi] = fe; }
      else { xs[hi] = xr; fs[hi] = fr; }
    } else if (fr < fs[next_hi]) {
      xs[hi] = xr;
      fs[hi] = fr;
    } else {
      Vec xc = centroid + 0.5 * (xs[hi] - centroid);
      double fc = f(xc);
      if (fc < fs[hi]) { xs[hi] = xc; fs[hi] = fc; }
      else {
        for (int i = 0; i <= n; ++i) {
          if (i == lo) continue;
          xs[i] = xs[lo] + 0.5 * (xs[i] - xs[lo]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  return {xs[best], fs[best], iters};
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, int max_iter) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return (fc < fd) ? c : d;
}

}  // namespace geo
