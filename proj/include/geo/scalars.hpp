#pragma once

#include "geo/base.hpp"

namespace geo {

// Scalar functions backing the extremal constructions and bound evaluators.
// All are direct formula evaluations; arguments outside the stated domains
// throw errc::domain_error.

// Threshold asymmetry 2(n+1)/(k+1) - 1 separating the face-ball regime from
// the spiked-hull regime of the inner k-radius bound.
double critical_asymmetry(int n, int k);

// Helper under the square root of mu_scalar; domain s in [1, 1+2/n].
double zeta_scalar(int n, int k, double s);

// Squared spike distance of the low-asymmetry hull. Strictly increasing on
// [1, 1+2/n] with mu(1) = n and mu(1+2/n) = n+1.
double mu_scalar(int n, int k, double s);

// Halfspace tilt parameter matched to mu in [n, n+1]: the unique nonnegative
// root t of (t*sqrt(mu-n) - 1)^2 = mu*(1-t^2)/k. Strictly increasing with
// tau(n) = sqrt((n-k)/n) and tau(n+1) = 1.
double tau_scalar(int n, int k, double mu);

// Planar diameter bound D_s = sqrt(s^2 + 5 + sqrt(4(2-s)^2 + (s^2-1)^2)) for
// asymmetry s in [1, 2].
double planar_diameter_bound(double s);

// Common norm xi*_s = sqrt(D_s^2/2 - 2) of the two endpoints of a maximal
// planar diametral pair; lies in (s, sqrt(2s)) for s in (1, 2).
double planar_xi_star(double s);

// Profile f_s(xi) = xi^2 + (2-s)^2 / (xi^2 - s^2) on xi > s; its value at
// xi*_s is D_s^2 - 5.
double planar_profile(double s, double xi);

}  // namespace geo
