#pragma once

#include <vector>

#include "geo/bodies.hpp"

namespace geo {

// Families of bodies with machine-checkable extremal-position certificates.
// Every constructor attaches a BodyCertificate carrying the exact contact
// decomposition and, where applicable, the inscribed k-ball, the enclosing
// certified polytope, and asymmetry data, so downstream verification never
// has to rediscover them numerically.

enum class RegularKind { simplex, cube, cross_polytope };
enum class ExtremalPosition { john, loewner };

// Columns are the n+1 vertices of the regular simplex whose inscribed
// ellipsoid is the unit ball: vertex norms n, pairwise inner products -n,
// facet halfspaces (-x_i/n)'x <= 1.
Mat john_simplex_vertices(int n);

// Regular polytope positioned so the named extremal ellipsoid is the unit
// ball, with the exact contact decomposition attached.
ConvexBody regular_body(RegularKind kind, int n, ExtremalPosition position);

// k x n matrix with orthonormal rows whose columns all have squared norm k/n.
Mat flat_frame(int n, int k);

// n x n orthogonal matrix whose first k rows form flat_frame(n, k).
Mat flat_rotation(int n, int k);

// n x (n+1) matrix with orthonormal rows, all orthogonal to the all-ones
// vector, whose first k rows have all column squared norms k/(n+1). Columns
// scaled by sqrt((n+1)/n) are regular-simplex vertices on the unit sphere
// whose projections onto the first k coordinates all have norm sqrt(k/n).
// Throws generation_failed when no such frame exists (n even, k in {1,n-1}).
Mat flat_simplex_basis(int n, int k);

// Polytope built from sign patterns over J, a subset of {1..n-1}: all facets
// touch the unit ball and carry an exact unit-ball decomposition, so any body
// nested between the unit ball and this envelope is in John position.
// tau must lie in [sqrt((n-|J|)/((|J|+1)n)), 1].
ConvexBody john_envelope(int n, const std::vector<int>& J, double tau);

// Hull interpolation cross-polytope -> cube -> simplex over t in [0, 2], each
// piece rotated so that projecting onto the first k coordinates realizes
// enclosing-ball radius sqrt(k/n) for every t, while the Loewner ellipsoid
// stays the unit ball throughout. For n even and k in {1, n-1} the simplex
// leg does not exist and t is restricted to [0, 1].
ConvexBody outer_family(int n, int k, double t);

// Regular simplex intersected with its negation scaled by s in [1, n]: John
// position with asymmetry s. For s >= critical_asymmetry(n, k) the inscribed
// face k-ball certificate (radius sqrt(n(n+1)/(k(k+1)))) is attached.
ConvexBody high_asym_body(int n, int k, double s);

// Unit-ball hull with 4k spikes realizing asymmetry s in
// [1+2/n, critical_asymmetry(n, k)], with an inscribed k-ball of radius
// sqrt(n(s+1)/(2k)) and an enclosing certified polytope.
ConvexBody mid_asym_body(int n, int k, double s);

// Same hull shape for the low range s in [1, 1+2/n]: spike length
// sqrt(mu_scalar(n, k, s)), inscribed k-ball radius sqrt(mu_scalar(n,k,s)/k).
ConvexBody small_asym_body(int n, int k, double s);

// Dispatch over the three regimes: low range up to 1+2/n, spiked range up to
// critical_asymmetry(n, k), simplex-intersection range up to n.
ConvexBody asym_body(int n, int k, double s);

// Unit ball with two antipodal spikes -sqrt(ns) e_n and sqrt(n/s) e_n: John
// position with asymmetry s but Minkowski asymmetry only 2s/(s+1); the unique
// Minkowski center and its equality directions are attached.
ConvexBody rounding_body(int n, double s);

}  // namespace geo
