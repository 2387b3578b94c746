#include "geo/scalars.hpp"

#include <algorithm>
#include <cmath>

namespace geo {

namespace {

// Interval endpoints are part of the contract; allow fp-level slack and clamp
// so endpoint evaluations cannot produce tiny negative radicands.
constexpr double kSlack = 1e-9;

void check_nk(int n, int k) {
  if (n < 2) throw Error(errc::domain_error, "dimension n must be at least 2");
  if (k < 1 || k > n - 1) throw Error(errc::domain_error, "k must lie in [1, n-1]");
}

double checked_range(double x, double lo, double hi, const char* what) {
  if (x < lo - kSlack || x > hi + kSlack) throw Error(errc::domain_error, what);
  return std::clamp(x, lo, hi);
}

}  // namespace

double critical_asymmetry(int n, int k) {
  check_nk(n, k);
  return 2.0 * (n + 1.0) / (k + 1.0) - 1.0;
}

double zeta_scalar(int n, int k, double s) {
  check_nk(n, k);
  s = checked_range(s, 1.0, 1.0 + 2.0 / n, "zeta_scalar: s outside [1, 1+2/n]");
  const double gap = 1.0 + 2.0 / n - s;       // distance to the upper endpoint
  const double sq = s * s - 1.0;              // s^2 - 1 >= 0
  const double t1 = 2.0 * gap - sq;
  const double t2 = 8.0 * gap * sq * (n - k) / n;
  return std::sqrt(std::max(t1 * t1 + t2, 0.0));
}

double mu_scalar(int n, int k, double s) {
  check_nk(n, k);
  const double z = zeta_scalar(n, k, s);
  s = std::clamp(s, 1.0, 1.0 + 2.0 / n);
  return n / (8.0 * (k + 1.0)) *
         (n * (s - 1.0) * (s - 1.0) + 4.0 * k * (s + 1.0) + 4.0 + n * z);
}

double tau_scalar(int n, int k, double mu) {
  check_nk(n, k);
  mu = checked_range(mu, double(n), n + 1.0, "tau_scalar: mu outside [n, n+1]");
  const double g = std::max(mu - n, 0.0);
  const double denom = k * g + mu;
  return (k * std::sqrt(g) + std::sqrt((denom - k) * mu)) / denom;
}

double planar_diameter_bound(double s) {
  s = checked_range(s, 1.0, 2.0, "planar_diameter_bound: s outside [1, 2]");
  const double inner = 4.0 * (2.0 - s) * (2.0 - s) + (s * s - 1.0) * (s * s - 1.0);
  return std::sqrt(s * s + 5.0 + std::sqrt(inner));
}

double planar_xi_star(double s) {
  const double d = planar_diameter_bound(s);
  return std::sqrt(d * d / 2.0 - 2.0);
}

double planar_profile(double s, double xi) {
  s = checked_range(s, 1.0, 2.0, "planar_profile: s outside [1, 2]");
  const double gap = xi * xi - s * s;
  if (gap <= 0.0) throw Error(errc::domain_error, "planar_profile: xi must exceed s");
  return xi * xi + (2.0 - s) * (2.0 - s) / gap;
}

}  // namespace geo
