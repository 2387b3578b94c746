#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geo/base.hpp"

namespace geo {

// ---------------------------------------------------------------------------
// Linear-algebra carriers

struct Subspace {
  Mat basis;  // n×k, orthonormal columns
  int ambient() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }
};

Subspace make_subspace(const Mat& basis);
Subspace coordinate_subspace(int n, const std::vector<int>& coords);  // 0-based axes

struct AffineMap {
  Mat L;
  Vec t;
  Vec operator()(const Vec& x) const { return L * x + t; }
};

AffineMap make_affine(const Mat& L, const Vec& t);
AffineMap identity_map(int n);
AffineMap compose(const AffineMap& f, const AffineMap& g);  // x -> f(g(x))
AffineMap inverse(const AffineMap& f);

// A k-dimensional Euclidean ball sitting in an affine subspace.
struct KBall {
  Vec origin;   // carrier origin (ambient coordinates)
  Mat basis;    // n×k orthonormal carrier basis
  double radius = 0.0;
};

// Axis-aligned-in-carrier ellipsoid: {origin + basis * (semiaxes .* y) : |y| <= 1}.
struct KEllipsoid {
  Vec origin;
  Mat basis;     // n×k orthonormal
  Vec semiaxes;  // k positive entries
};

// ---------------------------------------------------------------------------
// Convex bodies

enum class BodyKind { vpolytope, hpolytope, ballhull, ellipsoid };

const char* body_kind_name(BodyKind k);

struct ConvexBody;

// Optional certificate block carried by constructed bodies: John contacts and
// weights, the extremal inscribed k-ball, an enclosing polytope that proves
// the John position, plus asymmetry data used by the verification suites.
struct BodyCertificate {
  Mat contacts;  // n×m unit directions, columns
  Vec weights;
  std::optional<KBall> kball;
  std::shared_ptr<const ConvexBody> enclosing;
  Mat asym_directions;  // columns a with h(a)/h(-a) attaining s_J
  std::optional<double> john_asymmetry;
  std::optional<double> minkowski_value;
  std::optional<Vec> minkowski_center;
  std::string family;  // construction family name, empty if not constructed
  double param_s = 0.0, param_t = 0.0, param_tau = 0.0;
  int param_k = 0;
};

struct ConvexBody {
  BodyKind kind = BodyKind::vpolytope;
  int n = 0;

  // V-form (primary for vpolytope, cache otherwise)
  Mat V;  // n×m vertex columns
  bool has_V = false;

  // H-form, rows are unit outward normals with offsets b (primary for
  // hpolytope, cache otherwise)
  Mat A;
  Vec b;
  bool has_H = false;

  // ballhull: conv(Ball(center, radius) ∪ apex columns)
  Vec center;
  double radius = 0.0;
  Mat apexes;

  // ellipsoid: {x : (x-ec)' Q (x-ec) <= 1}, Q SPD
  Vec ec;
  Mat Q;

  std::optional<BodyCertificate> cert;
};

// Constructors validate representation invariants and throw geo::Error.
ConvexBody make_vpolytope(const Mat& vertices);
ConvexBody make_hpolytope(const Mat& A, const Vec& b);  // checks bounded, interior
ConvexBody make_ballhull(const Vec& center, double radius, const Mat& apexes);
ConvexBody make_ellipsoid(const Vec& center, const Mat& Q);

// ---------------------------------------------------------------------------
// Operations

double support(const ConvexBody& K, const Vec& a);
Vec support_point(const ConvexBody& K, const Vec& a);
double gauge(const ConvexBody& K, const Vec& x);   // min{rho >= 0 : x in rho K}
bool contains(const ConvexBody& K, const Vec& x, double tol = 1e-9);
ConvexBody project(const ConvexBody& K, const Subspace& F);  // body in F-coordinates
ConvexBody polar(const ConvexBody& K);
ConvexBody apply(const AffineMap& f, const ConvexBody& K);

// Representation changes (brute-force enumeration, desk scale).
void ensure_hform(ConvexBody& K);  // fills A,b for a vpolytope
void ensure_vform(ConvexBody& K);  // fills V for an hpolytope
std::pair<Mat, Vec> facets_from_vertices(const Mat& V);
Mat vertices_from_facets(const Mat& A, const Vec& b);

// Chebyshev center of {Ax <= b} (rows need not be unit). Returns (center, radius).
std::pair<Vec, double> chebyshev_center(const Mat& A, const Vec& b);

// Largest inscribed Euclidean ball check used by gauge/polar preconditions.
bool origin_strictly_interior(const ConvexBody& K, double min_radius = tol::interior_radius);

// Volume of the unit ball in R^k.
double unit_ball_volume(int k);

}  // namespace geo
