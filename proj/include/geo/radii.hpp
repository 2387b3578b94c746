#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geo/base.hpp"
#include "geo/bodies.hpp"

namespace geo {

// Details recorded when a measured quantity lands on its bound: the extremal
// configurations are rigid, so near-equality triggers shape checks.
struct EqualityCertificate {
  bool checked = false;  // near-equality triggered the detailed checks
  bool matches = false;  // every applicable condition holds within tolerance
  double center_norm = 0.0;
  double expected_center_norm = 0.0;
  double axis_residual = 0.0;   // max deviation of the semiaxes from the extremal radius
  double perp_residual = 0.0;   // carrier-vs-center orthogonality defect
  Vec contact_products;         // c' u^i over the John contacts
  double product_residual = 0.0;  // distance of the products from the allowed two-value set
};

struct BoundReport {
  std::string quantity_name;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // signed so that pass <=> slack >= -1e-7
  bool pass = false;
  bool containment_certified = true;  // false when containment relied on boundary sampling
  std::optional<EqualityCertificate> equality_certificate;
};

// Smallest enclosing Euclidean ball of a point set (columns). Optimality is
// certified by the support points: the center must lie in their convex hull.
struct MinBall {
  Vec center;
  double radius = 0.0;
  std::vector<int> support;
  bool certified = false;
};
MinBall min_enclosing_ball(const Mat& points);

// For K in Loewner position, the projection of K onto F needs a ball of
// radius at least sqrt(k/n); the minimum-volume enclosing ellipsoid of the
// projection obeys the same volume bound, with equality only for the centered
// ball of exactly that radius.
BoundReport outer_kradius(const ConvexBody& K, const Subspace& F);

// For K in John position, a k-ellipsoid E inside K has volume at most that of
// the ball of radius sqrt((n/k) min{(s_J+1)/2, (n+1)/(k+1)}). Equality forces
// E to be a k-ball of that radius with |c|^2 = n(min - 1), carrier
// perpendicular to c, and John-contact products c' u^i in a two-value set.
BoundReport inner_bound_report(const ConvexBody& K, const KEllipsoid& E);

// For planar K in John position, diam(K) <= D_{s_J(K)}; an extremal pair x, y
// must satisfy |x| = |y| = sqrt(D^2/2 - 2) and |(x+y)/2| = sqrt(D^2/4 - 2).
BoundReport planar_diameter_report(const ConvexBody& K);

// Support function of a k-ellipsoid in closed form, with its maximizer. When
// b is perpendicular to the carrier every point attains the maximum.
struct SupportEval {
  double value = 0.0;
  Vec maximizer;
  bool unique = true;
};
SupportEval oracle_ellip_support(const KEllipsoid& E, const Vec& b);

// Checks (sum x_i' u_i)^2 <= sum_{i,l} |x_i||x_l|(1 - u_i' u_l) for vectors
// x_i summing to zero and unit u_i; near-equality triggers the rigidity
// condition u_i - u = sigma (sqrt(gamma)/xi) x_i/|x_i| for a single sign.
struct BallLemmaReport {
  double lhs = 0.0;
  double gamma = 0.0;
  bool holds = false;
  bool near_equality = false;
  bool characterization_checked = false;
  bool characterization_ok = false;
  double characterization_residual = 0.0;
};
BallLemmaReport oracle_ball_lemma(const std::vector<Vec>& xs, const std::vector<Vec>& us);

// For x, y in a John-position body: x'y >= -n, |x-y| bounded by the running
// and global distance bounds; near-equality in the global bound requires
// |x| = |y| = n.
struct VectorPropertyReport {
  double inner_product = 0.0;
  double distance = 0.0;
  bool inner_ok = false;
  bool pair_ok = false;
  bool global_ok = false;
  bool near_global_equality = false;
  bool equality_norms_ok = true;
};
VectorPropertyReport oracle_john_vectors(const ConvexBody& K, const Vec& x, const Vec& y);

// Local search for a large inscribed k-ball of a polytope: the carrier is
// optimized by Nelder-Mead while (center, radius) for a fixed carrier is an
// exact LP. Lower-bound procedure only; restarts make it deterministic per seed.
KBall inner_kball_search(const ConvexBody& K, int k, unsigned seed, int restarts = 50);

}  // namespace geo
