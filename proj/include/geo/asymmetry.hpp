#pragma once

#include <string>
#include <vector>

#include "geo/base.hpp"
#include "geo/bodies.hpp"

namespace geo {

// Result of an asymmetry measurement: the dilatation value in [1, n], the
// center it was measured around, the directions where the covering ratio
// binds, and how the value was obtained.
struct AsymmetryReport {
  double value = 1.0;
  Vec witness_center;      // Minkowski center candidate; origin for the John measure
  Mat binding_directions;  // columns: unit directions achieving the ratio
  std::string method;      // "exact-LP" | "certificate" | "sampled-lower-bound"
  bool sweep_checked = false;  // a dense sphere sweep cross-checked the value
};

// Smallest rho such that K - c is covered by rho (c - K) over the best center
// c. Polytopes are solved exactly by a single LP over their facets; ball hulls
// use an attached certificate when present and otherwise report a sampled
// lower bound.
AsymmetryReport minkowski_asymmetry(const ConvexBody& K);

// The same dilatation factor with the center pinned to the origin, which must
// be the John center: requires the John ellipsoid of K to be the unit ball.
AsymmetryReport john_asymmetry(const ConvexBody& K);

// Report-only verification that c is a Minkowski center witnessing asymmetry
// exactly s: the support inequality h_{K-c}(a) <= s h_{K-c}(-a) must hold on
// sampled plus certificate directions, and the directions where it binds must
// positively span the space (origin interior to their hull, decided by LP).
struct CenterCheck {
  bool pass = false;
  double max_violation = 0.0;  // worst support-scaled positive part of h(a) - s h(-a)
  bool origin_interior = false;
  Mat equality_directions;  // columns: directions where the inequality binds
  int directions_tested = 0;
};
CenterCheck verify_minkowski_center(const ConvexBody& K, const Vec& c, double s);

// Ratio of the John to the Minkowski asymmetry across the spindle family,
// which separates the two measures as far as possible.
struct GapRow {
  double s = 1.0;          // family parameter
  double john = 1.0;       // measured John asymmetry
  double minkowski = 1.0;  // certified Minkowski asymmetry
  double ratio = 1.0;      // john / minkowski, equals (s + 1) / 2
};
struct GapScan {
  std::vector<GapRow> rows;
  double max_ratio = 1.0;
};
GapScan asymmetry_gap_scan(int n, const std::vector<double>& s_grid);

}  // namespace geo
