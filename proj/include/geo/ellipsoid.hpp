#pragma once

#include <vector>

#include "geo/base.hpp"
#include "geo/bodies.hpp"

namespace geo {

// Maximize u'Bu + 2 g'u over the unit sphere (B symmetric). Exact via the
// eigenbasis secular equation, including the hard case.
struct SphereQuadMax {
  Vec u;
  double value;
};
SphereQuadMax max_quadratic_on_sphere(const Mat& B, const Vec& g);

// Symmetric positive-definite square root.
Mat sqrtm_spd(const Mat& M);

// Minimum-volume enclosing ellipsoid of a point set / convex body.
struct MveeResult {
  Vec center;
  Mat shape;     // E = {x : (x-center)' shape (x-center) <= 1}
  Mat points;    // touch points on the boundary (columns)
  Mat contacts;  // whitened unit touch directions (columns)
  Vec weights;   // barycentric weights on touch points (sum ~ 1)
  Vec lambdas;   // sphere-decomposition weights (n * weights)
  double gap;    // final dual gap max_i g_i - (n+1), <= eps*(n+1) on success
  int iterations = 0;
};
MveeResult mvee_points(const Mat& P, double eps = tol::mvee_eps, int max_iter = 500000);
MveeResult mvee_body(const ConvexBody& K, double eps = tol::mvee_eps);

// Maximum-volume inscribed ellipsoid {G u + d : |u| <= 1} of {x : A x <= b}.
struct InscribedResult {
  Mat G;  // SPD
  Vec d;
  Vec mu;  // KKT multiplier per facet (0 when inactive)
  std::vector<int> active;
  double kkt_residual;
  double min_slack;  // min_i b_i - a_i'd - |G a_i|
};
InscribedResult inscribed_ellipsoid(const Mat& A, const Vec& b,
                                    double kkt_target = tol::newton_kkt);

// Sphere decomposition at the unit ball: contacts u_i on bd(K) ∩ S^{n-1} with
// positive weights solving sum l_i u_i u_i' = I, sum l_i u_i = 0.
struct JohnDecomposition {
  Mat contacts;
  Vec lambdas;
  double residual;        // least-squares residual of the two moment systems
  double contact_defect;  // max deviation of contacts from both boundaries
};
JohnDecomposition john_decomposition(const ConvexBody& K, double contact_tol = tol::contact);

struct PositionReport {
  bool in_position = false;
  double vector_residual = 0;     // |sum l u|
  double matrix_residual = 0;     // |sum l uu' - I|_F
  double trace_residual = 0;      // |sum l - n|
  double contact_defect = 0;      // contacts off the sphere or off bd(K)
  double containment_defect = 0;  // ball/body containment violation
  Mat contacts;
  Vec lambdas;
};
PositionReport john_verify(const ConvexBody& K, double contact_tol = tol::contact);
PositionReport loewner_verify(const ConvexBody& K, double contact_tol = tol::contact);

// Affinely normalize so the maximal inscribed (John) / minimal enclosing
// (Loewner) ellipsoid becomes the unit ball. Returns the new body and the map.
struct NormalizedBody {
  ConvexBody body;
  AffineMap map;
};
NormalizedBody normalize_john(const ConvexBody& K);
NormalizedBody normalize_loewner(const ConvexBody& K);

// Containment defects: 0 when contained, else the violation magnitude.
double ball_in_ellipsoid_defect(const Vec& c0, double r, const Vec& c, const Mat& Q);
double ellipsoid_in_ball_defect(const Vec& c, const Mat& Q);  // vs the unit ball
double unit_ball_in_body_defect(const ConvexBody& K);
double body_in_unit_ball_defect(const ConvexBody& K);

}  // namespace geo
