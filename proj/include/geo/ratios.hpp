#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "geo/base.hpp"
#include "geo/bodies.hpp"

namespace geo {

// ---------------------------------------------------------------------------
// Radial functionals
//
// Measured against a gauge body C (the unit Euclidean ball when absent).
// Circumradius R and inradius r place translated copies of C itself around or
// inside K; diameter D and width w measure difference vectors in the norm of
// the central symmetral (C - C)/2, so an asymmetric gauge is symmetrized
// automatically for those two.

struct RadialProfile {
  double w = 0.0;  // min over directions of the symmetral-normalized width
  double D = 0.0;  // max pairwise distance in the symmetral norm
  double R = 0.0;  // least rho with K inside a translate of rho C
  double r = 0.0;  // largest rho with a translate of rho C inside K

  std::optional<ConvexBody> gauge_body;  // absent = Euclidean

  // Witnesses. The width direction is a unit vector attaining w; the diameter
  // pair attains D; the circumcenter t satisfies K ⊂ R·C + t and the incenter
  // c satisfies r·C + c ⊂ K.
  Vec width_direction;
  Vec diameter_a, diameter_b;
  Vec circumcenter;
  Vec incenter;

  // Width bracket. In the plane the sweep over the merged normal fans is
  // exact and both ends equal w. From dimension three on, w is the local
  // refinement of a sampled minimum: w = w_lower is the refined value, and
  // w_upper is the pre-refinement grid minimum, so the interval records the
  // refinement gap.
  double w_lower = 0.0, w_upper = 0.0;
  bool w_exact = false;
};

// Full-dimensional K required. Polytopes carry the full profile for any
// polytope or ellipsoid gauge; ellipsoids are supported in the Euclidean
// case. Other combinations throw errc::representation_unavailable.
RadialProfile radial_profile(const ConvexBody& K,
                             const std::optional<ConvexBody>& C = std::nullopt);

// ---------------------------------------------------------------------------
// Optimization over affine images

struct AffineSearchResult {
  AffineMap best_map;      // apply to K to realize best_ratio
  double best_ratio = 0.0;
  std::string method;      // "john-start" | "multistart-local"
  int iterations = 0;      // local-descent iterations summed over restarts

  // Ratio of the unoptimized start (K brought into John position). The
  // search never regresses past it: minimizations report best_ratio at most
  // this value, the width maximization at least it.
  double john_start_ratio = 0.0;

  // Theorem sandwich evaluated for this body (and gauge): the true affine
  // optimum lies in [lower_bound, upper_bound], and within_bounds records
  // whether best_ratio does up to 1e-6.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool within_bounds = false;
};

// Minimize D(AK,C) / (2 r(AK,C)) over invertible affine maps A. The linear
// part is parameterized as upper triangular with positive diagonal (rotations
// of the image are redundant for the rotation-invariant Euclidean gauge);
// a general gauge fixes an orientation, so there the parameterization gains
// rotation angles. Dimension at most 4; K must be a polytope.
AffineSearchResult minimize_Dr_affine(const ConvexBody& K,
                                      const std::optional<ConvexBody>& C = std::nullopt,
                                      std::uint64_t seed = 2026, int restarts = 50);

// Maximize w(AK) / (2 R(AK)) (Euclidean) via descent on the reciprocal.
// Dimension at most 3, where the polytope width is exact; K must be a
// polytope.
AffineSearchResult maximize_wR_affine(const ConvexBody& K,
                                      std::uint64_t seed = 2026, int restarts = 50);

// ---------------------------------------------------------------------------
// Certified two-sided sandwich
//
// An upper bound on the smallest |rho| admitting C ⊂ AK + t ⊂ rho(±C) + t'
// over invertible A (the generalized distance that allows a mirrored outer
// copy). Seeded by the D/r search, refined on the sandwich objective itself,
// and certified by replaying both containments facet by facet.

struct GrunbaumBound {
  double rho = 0.0;
  AffineMap witness;       // C ⊂ witness(K) ⊂ rho·(sign C) + outer_shift
  Vec outer_shift;
  bool mirrored = false;   // outer copy uses -C
  double inner_slack = 0.0;  // max violation of C ⊂ witness(K), <= 0 when clean
  double outer_slack = 0.0;  // max violation of the outer inclusion
  bool certified = false;    // both slacks at most 1e-9
};

GrunbaumBound grunbaum_upper_bound(const ConvexBody& K, const ConvexBody& C,
                                   std::uint64_t seed = 2026, int restarts = 20);

// ---------------------------------------------------------------------------
// Shear-inflation map
//
// A(x) = P_U x + alpha ((x - P_U x) - c) + c for a linear subspace U, an
// offset c in U^perp, and alpha > 1. Before returning, the map is verified on
// the hypothesis body conv((mu (B^n ∩ U) + c) ∪ B^n): the unit ball must lie
// inside the image, and every sampled common boundary point x of the unit
// ball and the image must satisfy c'x > 0. Violations of the preconditions
// throw errc::parameter_out_of_range; a failed verification throws
// errc::domain_error.
AffineMap shear_inflation_map(const Subspace& U, const Vec& c, double alpha,
                              double mu = 1.2);

}  // namespace geo
