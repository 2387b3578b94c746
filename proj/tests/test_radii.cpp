#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "geo/asymmetry.hpp"
#include "geo/base.hpp"
#include "geo/bodies.hpp"
#include "geo/constructions.hpp"
#include "geo/ellipsoid.hpp"
#include "geo/optim.hpp"
#include "geo/radii.hpp"
#include "geo/sampling.hpp"
#include "geo/scalars.hpp"

using namespace geo;

namespace {

KEllipsoid as_kellipsoid(const KBall& ball) {
  KEllipsoid E;
  E.origin = ball.origin;
  E.basis = ball.basis;
  E.semiaxes = Vec::Constant(ball.basis.cols(), ball.radius);
  return E;
}

KEllipsoid make_kball(const Vec& origin, const Mat& basis, double radius) {
  KEllipsoid E;
  E.origin = origin;
  E.basis = basis;
  E.semiaxes = Vec::Constant(basis.cols(), radius);
  return E;
}

// Random polytope affinely normalized so its maximal inscribed ellipsoid is
// the unit ball; retries seeds until the position verifies cleanly.
ConvexBody random_john_polytope(int n, unsigned seed) {
  for (unsigned attempt = 0; attempt < 50; ++attempt) {
    Rng rng(1000003ULL * seed + 7919ULL * attempt + 11ULL);
    const int m = 2 * n + 3;
    Mat V(n, m);
    for (int j = 0; j < m; ++j) V.col(j) = rng.uniform(1.2, 2.2) * rng.unit_vector(n);
    try {
      ConvexBody K = make_vpolytope(V);
      ConvexBody J = normalize_john(K).body;
      if (john_verify(J).in_position) return J;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(errc::generation_failed, "random_john_polytope: no usable seed");
}

// Smallest projection radius over all lines (k = 1) or hyperplanes
// (k = n - 1), minimized by Nelder-Mead from vertex/edge/random starts.
double min_projection_radius(const Mat& V, int k, unsigned seed) {
  const int n = static_cast<int>(V.rows());
  auto radius_for = [&](const Vec& u) {
    const double nu = u.norm();
    if (nu < 1e-8) return 1e6;
    const Vec w = u / nu;
    if (k == 1) {
      const Vec p = V.transpose() * w;
      return 0.5 * (p.maxCoeff() - p.minCoeff());
    }
    Mat basis = orthonormal_completion(w).rightCols(n - 1);
    return min_enclosing_ball(basis.transpose() * V).radius;
  };
  std::vector<Vec> starts;
  for (int i = 0; i < V.cols(); ++i) starts.push_back(V.col(i));
  for (int i = 0; i < V.cols(); ++i)
    for (int j = i + 1; j < V.cols(); ++j) starts.push_back(V.col(i) + V.col(j));
  Rng rng(seed);
  for (int t = 0; t < 6; ++t) starts.push_back(rng.unit_vector(n));
  NmOptions opt;
  opt.max_iter = 800;
  double best = 1e6;
  for (const Vec& s : starts) {
    NmResult res = nelder_mead(radius_for, s, opt);
    best = std::min(best, res.f);
  }
  return best;
}

Vec best_projection_direction(const Mat& V, unsigned seed) {
  const int n = static_cast<int>(V.rows());
  auto radius_for = [&](const Vec& u) {
    const double nu = u.norm();
    if (nu < 1e-8) return 1e6;
    const Vec p = V.transpose() * (u / nu);
    return 0.5 * (p.maxCoeff() - p.minCoeff());
  };
  std::vector<Vec> starts;
  for (int i = 0; i < V.cols(); ++i) starts.push_back(V.col(i));
  for (int i = 0; i < V.cols(); ++i)
    for (int j = i + 1; j < V.cols(); ++j) starts.push_back(V.col(i) + V.col(j));
  Rng rng(seed);
  for (int t = 0; t < 6; ++t) starts.push_back(rng.unit_vector(n));
  NmOptions opt;
  opt.max_iter = 800;
  double best = 1e6;
  Vec arg = Vec::Unit(n, 0);
  for (const Vec& s : starts) {
    NmResult res = nelder_mead(radius_for, s, opt);
    if (res.f < best) {
      best = res.f;
      arg = res.x.normalized();
    }
  }
  return arg;
}

}  // namespace

TEST_CASE("smallest enclosing ball: basics and certificates") {
  // Antipodal pair: center at the midpoint, both points on the boundary.
  Mat P(2, 2);
  P << 1.0, -1.0, 0.0, 0.0;
  MinBall b = min_enclosing_ball(P);
  CHECK(b.center.norm() <= 1e-12);
  CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.support.size() == 2);
  CHECK(b.certified);

  // Single point and duplicated points collapse to radius zero.
  MinBall single = min_enclosing_ball(Mat::Constant(3, 1, 0.5));
  CHECK(single.radius == 0.0);
  CHECK(single.certified);
  MinBall dup = min_enclosing_ball(Mat::Constant(3, 4, 0.5));
  CHECK(dup.radius <= 1e-12);
  CHECK(dup.certified);

  // Random clouds: every point inside, certificate accepted.
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    Rng rng(seed);
    Mat Q(3, 60);
    for (int j = 0; j < 60; ++j) Q.col(j) = rng.normal_vec(3);
    MinBall mb = min_enclosing_ball(Q);
    for (int j = 0; j < 60; ++j) CHECK((Q.col(j) - mb.center).norm() <= mb.radius + 1e-9);
    CHECK(mb.support.size() >= 2);
    CHECK(mb.certified);
  }

  CHECK_THROWS_AS(min_enclosing_ball(Mat(3, 0)), Error);
}

TEST_CASE("smallest enclosing ball: cross-polytope vertex sets") {
  for (int k : {1, 2, 3}) {
    Mat P(k, 2 * k);
    P.setZero();
    for (int i = 0; i < k; ++i) {
      P(i, 2 * i) = 1.0;
      P(i, 2 * i + 1) = -1.0;
    }
    MinBall b = min_enclosing_ball(P);
    CHECK(b.center.norm() <= 1e-9);
    CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.certified);
  }
}

TEST_CASE("outer projection radius: exact values on regular bodies") {
  // Cube in Loewner position, coordinate plane: the projected square has
  // circumradius sqrt(2/3), which meets the bound exactly.
  ConvexBody cube = regular_body(RegularKind::cube, 3, ExtremalPosition::loewner);
  BoundReport r = outer_kradius(cube, coordinate_subspace(3, {0, 1}));
  CHECK(r.pass);
  CHECK(r.measured == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(std::abs(r.slack) <= 1e-9);
  REQUIRE(r.equality_certificate.has_value());
  CHECK(r.equality_certificate->matches);
  CHECK(r.equality_certificate->center_norm <= 1e-6);

  // Cross-polytope on a flat plane: every vertex projects to norm sqrt(k/n).
  ConvexBody cross = regular_body(RegularKind::cross_polytope, 4, ExtremalPosition::loewner);
  Subspace flat = make_subspace(flat_frame(4, 2).transpose());
  BoundReport rf = outer_kradius(cross, flat);
  CHECK(rf.pass);
  CHECK(rf.measured == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  REQUIRE(rf.equality_certificate.has_value());
  CHECK(rf.equality_certificate->matches);

  // The same body on a coordinate plane projects to the full 2-dimensional
  // cross-polytope of circumradius 1: strictly above the bound.
  BoundReport rc = outer_kradius(cross, coordinate_subspace(4, {0, 1}));
  CHECK(rc.pass);
  CHECK(rc.measured == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rc.slack > 0.29);
  CHECK(!rc.equality_certificate.has_value());

  // The unit ball projects to the unit ball of the plane: strict again.
  ConvexBody ball = make_ellipsoid(Vec::Zero(3), Mat::Identity(3, 3));
  BoundReport rb = outer_kradius(ball, coordinate_subspace(3, {0, 2}));
  CHECK(rb.pass);
  CHECK(rb.measured == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rb.slack > 0.18);
}

TEST_CASE("outer projection radius: interpolation family is constant") {
  for (int k : {1, 2}) {
    Subspace F = coordinate_subspace(3, k == 1 ? std::vector<int>{0} : std::vector<int>{0, 1});
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 50; ++i) {
      const double t = 2.0 * i / 49.0;
      BoundReport r = outer_kradius(outer_family(3, k, t), F);
      CHECK(r.pass);
      lo = std::min(lo, r.measured);
      hi = std::max(hi, r.measured);
    }
    CHECK(hi - lo <= 1e-6);
    CHECK(lo == doctest::Approx(std::sqrt(k / 3.0)).epsilon(1e-9));
  }

  // Midpoint of the family: equality with a centered-ball certificate.
  BoundReport mid = outer_kradius(outer_family(3, 1, 0.5), coordinate_subspace(3, {0}));
  CHECK(std::abs(mid.measured - std::sqrt(1.0 / 3.0)) <= 1e-7);
  REQUIRE(mid.equality_certificate.has_value());
  CHECK(mid.equality_certificate->matches);
}

TEST_CASE("outer projection radius: simplex minima match the classical table") {
  // Odd dimension: the minimum over lines is the generic sqrt(1/n).
  ConvexBody s3 = regular_body(RegularKind::simplex, 3, ExtremalPosition::loewner);
  ConvexBody s3v = s3;
  ensure_vform(s3v);
  CHECK(min_projection_radius(s3v.V, 1, 31u) ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-6));
  Vec u3 = best_projection_direction(s3v.V, 31u);
  BoundReport r3 = outer_kradius(s3, make_subspace(u3));
  CHECK(r3.pass);
  CHECK(std::abs(r3.slack) <= 1e-6);
  REQUIRE(r3.equality_certificate.has_value());
  CHECK(r3.equality_certificate->matches);

  // Even dimension: both exceptional entries sit strictly above sqrt(k/n).
  ConvexBody s4 = regular_body(RegularKind::simplex, 4, ExtremalPosition::loewner);
  ConvexBody s4v = s4;
  ensure_vform(s4v);
  const double r1 = min_projection_radius(s4v.V, 1, 41u);
  CHECK(r1 == doctest::Approx(5.0 / (4.0 * std::sqrt(6.0))).epsilon(1e-6));
  CHECK(r1 > 0.5 + 1e-3);
  const double r3m = min_projection_radius(s4v.V, 3, 43u);
  CHECK(r3m == doctest::Approx(7.0 / 8.0).epsilon(1e-6));
  CHECK(r3m > std::sqrt(3.0 / 4.0) + 1e-3);
}

TEST_CASE("outer projection radius: preconditions") {
  ConvexBody john_cube = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  CHECK_THROWS_WITH_AS(outer_kradius(john_cube, coordinate_subspace(3, {0})),
                       doctest::Contains("not the unit ball"), Error);
  ConvexBody cross = regular_body(RegularKind::cross_polytope, 3, ExtremalPosition::loewner);
  CHECK_THROWS_AS(outer_kradius(cross, coordinate_subspace(4, {0})), Error);
  try {
    outer_kradius(cross, coordinate_subspace(4, {0}));
  } catch (const Error& e) {
    CHECK(e.code() == errc::wrong_dimension);
  }
}

TEST_CASE("inscribed ellipsoid bound: constructed equality bodies") {
  // Truncated simplex, high asymmetry: the certificate ball meets Ball's
  // branch of the bound with contact products in {1, -1}.
  ConvexBody high = high_asym_body(3, 1, 3.0);
  REQUIRE(high.cert.has_value());
  REQUIRE(high.cert->kball.has_value());
  BoundReport rh = inner_bound_report(high, as_kellipsoid(*high.cert->kball));
  CHECK(rh.pass);
  CHECK(rh.containment_certified);
  CHECK(rh.bound == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));
  CHECK(std::abs(rh.slack) <= 1e-7);
  REQUIRE(rh.equality_certificate.has_value());
  CHECK(rh.equality_certificate->matches);
  for (int i = 0; i < rh.equality_certificate->contact_products.size(); ++i) {
    const double p = rh.equality_certificate->contact_products[i];
    CHECK(std::min(std::abs(p - 1.0), std::abs(p + 1.0)) <= 1e-9);
  }

  // Spiked hull, middle asymmetry: equality on the asymmetry branch with
  // products in {1, (1-s)/2}.
  ConvexBody midb = mid_asym_body(4, 2, 1.6);
  REQUIRE(midb.cert->kball.has_value());
  BoundReport rm = inner_bound_report(midb, as_kellipsoid(*midb.cert->kball));
  CHECK(rm.pass);
  CHECK(rm.containment_certified);
  CHECK(rm.bound == doctest::Approx(std::sqrt(4.0 * 2.6 / 4.0)).epsilon(1e-12));
  CHECK(std::abs(rm.slack) <= 1e-7);
  REQUIRE(rm.equality_certificate.has_value());
  CHECK(rm.equality_certificate->matches);
  bool saw_other = false;
  for (int i = 0; i < rm.equality_certificate->contact_products.size(); ++i) {
    const double p = rm.equality_certificate->contact_products[i];
    CHECK(std::min(std::abs(p - 1.0), std::abs(p + 0.3)) <= 1e-9);
    saw_other = saw_other || std::abs(p + 0.3) <= 1e-9;
  }
  CHECK(saw_other);

  // Symmetric corner cases: flat diagonal ball in the cube, edge-midpoint
  // segment in the simplex.
  ConvexBody cube = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  Mat diag = Vec::Constant(3, 1.0 / std::sqrt(3.0));
  BoundReport rc = inner_bound_report(cube, make_kball(Vec::Zero(3), diag, std::sqrt(3.0)));
  CHECK(rc.pass);
  CHECK(std::abs(rc.slack) <= 1e-9);
  REQUIRE(rc.equality_certificate.has_value());
  CHECK(rc.equality_certificate->matches);

  Mat X = john_simplex_vertices(3);
  ConvexBody simplex = regular_body(RegularKind::simplex, 3, ExtremalPosition::john);
  Vec c = 0.5 * (X.col(0) + X.col(1));
  Mat axis = (X.col(0) - X.col(1)).normalized();
  BoundReport rs = inner_bound_report(simplex, make_kball(c, axis, std::sqrt(6.0)));
  CHECK(rs.pass);
  CHECK(std::abs(rs.slack) <= 1e-9);
  REQUIRE(rs.equality_certificate.has_value());
  CHECK(rs.equality_certificate->matches);
  CHECK(rs.equality_certificate->expected_center_norm ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("inscribed ellipsoid bound: regime matching across the families") {
  struct Case {
    int n, k;
    double s;
    ConvexBody body;
  };
  std::vector<Case> cases;
  cases.push_back({3, 1, 3.0, high_asym_body(3, 1, 3.0)});
  cases.push_back({2, 1, 2.0, high_asym_body(2, 1, 2.0)});
  cases.push_back({4, 1, 4.0, high_asym_body(4, 1, 4.0)});
  cases.push_back({4, 3, 2.0, high_asym_body(4, 3, 2.0)});
  cases.push_back({4, 3, 1.7, high_asym_body(4, 3, 1.7)});
  cases.push_back({3, 1, 1.8, mid_asym_body(3, 1, 1.8)});
  cases.push_back({4, 2, 2.0, mid_asym_body(4, 2, 2.0)});
  cases.push_back({2, 1, 1.6, small_asym_body(2, 1, 1.6)});
  cases.push_back({3, 1, 1.4, small_asym_body(3, 1, 1.4)});
  cases.push_back({3, 1, 1.0, small_asym_body(3, 1, 1.0)});
  cases.push_back({4, 2, 1.3, small_asym_body(4, 2, 1.3)});

  for (const Case& c : cases) {
    CAPTURE(c.n);
    CAPTURE(c.k);
    CAPTURE(c.s);
    REQUIRE(c.body.cert.has_value());
    REQUIRE(c.body.cert->kball.has_value());
    BoundReport rep = inner_bound_report(c.body, as_kellipsoid(*c.body.cert->kball));
    CHECK(rep.pass);
    CHECK(rep.containment_certified);
    const bool ball_branch = c.s >= critical_asymmetry(c.n, c.k) - 1e-9;
    const std::string family = c.body.cert->family;
    if (family == "high_asym" || family == "mid_asym") {
      // Extremal families meet their branch of the bound exactly.
      CHECK(std::abs(rep.slack) <= 1e-7);
      REQUIRE(rep.equality_certificate.has_value());
      CHECK(rep.equality_certificate->matches);
      CHECK(ball_branch == (family == "high_asym"));
    } else if (c.s <= 1.0 + 1e-9) {
      // The spiked family degenerates to an extremal symmetric body at s = 1.
      CHECK(std::abs(rep.slack) <= 1e-7);
      REQUIRE(rep.equality_certificate.has_value());
      CHECK(rep.equality_certificate->matches);
    } else {
      // Interior small-asymmetry bodies stay strictly below the bound.
      CHECK(rep.slack > 1e-3);
      CHECK(!rep.equality_certificate.has_value());
    }
  }
}

TEST_CASE("inscribed ellipsoid bound: strict for off-extremal balls") {
  ConvexBody cube = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    Vec dir = rng.unit_vector(3);
    Vec center = 0.2 * rng.unit_vector(3);
    BoundReport rep = inner_bound_report(cube, make_kball(center, dir, 0.5));
    CHECK(rep.pass);
    CHECK(rep.slack > 0.1);
    CHECK(!rep.equality_certificate.has_value());
    CHECK(rep.containment_certified);
  }
}

TEST_CASE("inscribed ellipsoid bound: preconditions and violations") {
  ConvexBody cube = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  // A segment reaching outside the cube violates a facet inequality.
  CHECK_THROWS_WITH_AS(
      inner_bound_report(cube, make_kball(0.9 * Vec::Unit(3, 0), Mat::Identity(3, 3).leftCols(1), 0.5)),
      doctest::Contains("facet"), Error);

  // Inflating the spiked hull's certificate ball pokes through the envelope.
  ConvexBody midb = mid_asym_body(3, 1, 1.8);
  KEllipsoid fat = as_kellipsoid(*midb.cert->kball);
  fat.semiaxes *= 1.3;
  CHECK_THROWS_AS(inner_bound_report(midb, fat), Error);

  // A tall ball on the spike axis escapes the hull itself.
  Vec c = midb.cert->kball->origin;
  CHECK_THROWS_AS(
      inner_bound_report(midb, make_kball(c, Mat::Identity(3, 3).rightCols(1), 0.6)), Error);

  // Dimension and position preconditions.
  CHECK_THROWS_AS(inner_bound_report(cube, make_kball(Vec::Zero(3), Mat::Identity(3, 3), 0.5)),
                  Error);
  CHECK_THROWS_AS(inner_bound_report(cube, make_kball(Vec::Zero(2), Mat::Identity(2, 1), 0.5)),
                  Error);
  ConvexBody loewner_cross = regular_body(RegularKind::cross_polytope, 3, ExtremalPosition::loewner);
  CHECK_THROWS_AS(
      inner_bound_report(loewner_cross, make_kball(Vec::Zero(3), Mat::Identity(3, 1), 0.1)),
      Error);
}

TEST_CASE("planar diameter bound: spiked family attains it") {
  for (double s : {1.0, 1.4, 2.0}) {
    CAPTURE(s);
    ConvexBody K = small_asym_body(2, 1, s);
    BoundReport rep = planar_diameter_report(K);
    CHECK(rep.pass);
    CHECK(std::abs(rep.slack) <= 1e-7);
    CHECK(rep.bound == doctest::Approx(planar_diameter_bound(s)).epsilon(1e-12));
    REQUIRE(rep.equality_certificate.has_value());
    CHECK(rep.equality_certificate->matches);
  }
}

TEST_CASE("planar diameter: square, disc, and spindle") {
  ConvexBody square = regular_body(RegularKind::cube, 2, ExtremalPosition::john);
  BoundReport rs = planar_diameter_report(square);
  CHECK(rs.measured == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rs.bound == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(rs.pass);
  REQUIRE(rs.equality_certificate.has_value());
  CHECK(rs.equality_certificate->matches);
  CHECK(rs.equality_certificate->expected_center_norm <= 1e-7);

  ConvexBody disc = make_ellipsoid(Vec::Zero(2), Mat::Identity(2, 2));
  BoundReport rd = planar_diameter_report(disc);
  CHECK(rd.measured == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rd.pass);
  CHECK(rd.slack > 0.8);

  // Rounding body: strictly inside the bound for its asymmetry level.
  ConvexBody spindle = rounding_body(2, 1.5);
  BoundReport rp = planar_diameter_report(spindle);
  CHECK(rp.pass);
  CHECK(rp.measured >= 2.0);
  CHECK(rp.slack > 1e-3);
  CHECK(!rp.equality_certificate.has_value());
}

TEST_CASE("planar diameter: random John polytopes obey the bound") {
  for (unsigned seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    ConvexBody K = random_john_polytope(2, seed);
    BoundReport rep = planar_diameter_report(K);
    CHECK(rep.slack >= -1e-9);
    CHECK(rep.pass);
  }
}

TEST_CASE("planar diameter: preconditions") {
  ConvexBody cube3 = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  CHECK_THROWS_AS(planar_diameter_report(cube3), Error);
  ConvexBody loewner_tri = regular_body(RegularKind::simplex, 2, ExtremalPosition::loewner);
  CHECK_THROWS_WITH_AS(planar_diameter_report(loewner_tri),
                       doctest::Contains("unit disc"), Error);
}

TEST_CASE("ellipsoid support function: closed form vs sampling") {
  // Direction perpendicular to the carrier: value reduces to b'c and every
  // point attains it.
  KEllipsoid E;
  E.origin = Vec::Zero(3);
  E.origin << 0.3, -0.2, 0.7;
  E.basis = Mat::Identity(3, 3).leftCols(2);
  E.semiaxes = Vec::Constant(2, 1.0);
  SupportEval perp = oracle_ellip_support(E, Vec::Unit(3, 2));
  CHECK(perp.value == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(!perp.unique);
  CHECK((perp.maximizer - E.origin).norm() <= 1e-12);

  // Unit ball of the carrier: the support in a carrier direction is |b|.
  Vec b(3);
  b << 0.3, 0.4, 0.0;
  E.origin.setZero();
  SupportEval in = oracle_ellip_support(E, b);
  CHECK(in.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(in.unique);
  CHECK(in.maximizer.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.dot(in.maximizer) == doctest::Approx(in.value).epsilon(1e-12));

  // Random cases: the closed form dominates every boundary sample and is
  // attained by the reported maximizer.
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4;
    const int k = 1 + trial % 3;
    Mat G(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(G);
    KEllipsoid R;
    R.basis = qr.householderQ() * Mat::Identity(n, k);
    R.origin = rng.normal_vec(n);
    R.semiaxes = Vec::Constant(k, 0.0);
    for (int j = 0; j < k; ++j) R.semiaxes[j] = rng.uniform(0.3, 2.0);
    Vec dir = rng.unit_vector(n);
    SupportEval se = oracle_ellip_support(R, dir);

    // The maximizer lies on the boundary and attains the value.
    Vec y = R.basis.transpose() * (se.maximizer - R.origin);
    double onb = 0.0;
    for (int j = 0; j < k; ++j) onb += y[j] * y[j] / (R.semiaxes[j] * R.semiaxes[j]);
    CHECK(onb == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dir.dot(se.maximizer) == doctest::Approx(se.value).epsilon(1e-12));

    double sampled = -1e18;
    Mat Y = k == 2 ? circle_grid(2000) : (k == 3 ? icosphere(4) : Mat());
    if (k == 1) {
      Y = Mat(1, 2);
      Y << 1.0, -1.0;
    }
    for (int j = 0; j < Y.cols(); ++j) {
      Vec x = R.origin + R.basis * (R.semiaxes.asDiagonal() * Y.col(j));
      sampled = std::max(sampled, dir.dot(x));
    }
    CHECK(sampled <= se.value + 1e-12);
    CHECK(sampled >= se.value - 1e-3);  // grid resolution, not formula error
  }
}

TEST_CASE("ball-vector inequality oracle") {
  // All-zero x's: equality holds vacuously.
  std::vector<Vec> zx(3, Vec::Zero(3));
  std::vector<Vec> zu{Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)};
  BallLemmaReport zr = oracle_ball_lemma(zx, zu);
  CHECK(zr.holds);
  CHECK(zr.near_equality);
  CHECK(zr.characterization_checked);
  CHECK(zr.characterization_ok);

  // Randomized sweep: the inequality never fails.
  Rng rng(99);
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = 2 + trial % 4;
    const int m = 2 + trial % 5;
    std::vector<Vec> xs(m), us(m);
    Vec mean = Vec::Zero(d);
    for (int i = 0; i < m; ++i) {
      xs[i] = rng.normal_vec(d);
      mean += xs[i];
    }
    for (int i = 0; i < m; ++i) xs[i] -= mean / m;
    for (int i = 0; i < m; ++i) us[i] = rng.unit_vector(d);
    BallLemmaReport rep = oracle_ball_lemma(xs, us);
    CHECK(rep.holds);
  }

  // Constructed equality instance, including a vanishing x.
  std::vector<Vec> xs(3, Vec::Zero(3));
  xs[0] << 0.5, 0.0, 0.0;
  xs[1] << -0.5, 0.0, 0.0;
  std::vector<Vec> us(3, Vec::Zero(3));
  us[0] << 0.6, 0.0, 0.8;
  us[1] << -0.6, 0.0, 0.8;
  us[2] << 0.0, 1.0, 0.0;
  BallLemmaReport eq = oracle_ball_lemma(xs, us);
  CHECK(eq.holds);
  CHECK(eq.gamma == doctest::Approx(eq.lhs).epsilon(1e-12));
  CHECK(eq.near_equality);
  CHECK(eq.characterization_checked);
  CHECK(eq.characterization_ok);
  CHECK(eq.characterization_residual <= 1e-9);

  // Preconditions: recentering is the caller's job; u's must be unit.
  std::vector<Vec> bad{Vec::Unit(3, 0)};
  std::vector<Vec> uu{Vec::Unit(3, 0)};
  CHECK_THROWS_AS(oracle_ball_lemma(bad, uu), Error);
  std::vector<Vec> x0{Vec::Zero(3)};
  std::vector<Vec> u2{2.0 * Vec::Unit(3, 0)};
  CHECK_THROWS_AS(oracle_ball_lemma(x0, u2), Error);
}

TEST_CASE("john vector inequalities") {
  // Simplex vertices: inner product exactly -n, distance at the global bound,
  // norms equal to n as the equality case demands.
  ConvexBody simplex = regular_body(RegularKind::simplex, 3, ExtremalPosition::john);
  Mat X = john_simplex_vertices(3);
  VectorPropertyReport rs = oracle_john_vectors(simplex, X.col(0), X.col(1));
  CHECK(rs.inner_ok);
  CHECK(rs.inner_product == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(rs.pair_ok);
  CHECK(rs.global_ok);
  CHECK(rs.distance == doctest::Approx(std::sqrt(24.0)).epsilon(1e-9));
  CHECK(rs.near_global_equality);
  CHECK(rs.equality_norms_ok);

  // Cube corners: equality in the running bound, far from the global one.
  ConvexBody cube = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  Vec p = Vec::Ones(3);
  VectorPropertyReport rc = oracle_john_vectors(cube, p, -p);
  CHECK(rc.inner_product == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(rc.inner_ok);
  CHECK(rc.pair_ok);
  CHECK(rc.distance == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(rc.global_ok);
  CHECK(!rc.near_global_equality);

  // A repeated point gives distance zero and a trivially valid report.
  VectorPropertyReport rr = oracle_john_vectors(cube, p, p);
  CHECK(rr.inner_ok);
  CHECK(rr.pair_ok);
  CHECK(rr.global_ok);
  CHECK(rr.distance == 0.0);

  CHECK_THROWS_AS(oracle_john_vectors(cube, 2.0 * p, p), Error);
}

TEST_CASE("inscribed k-ball search: known optima") {
  // Cube: the flat diagonal carrier gives radius sqrt(n/k).
  ConvexBody cube2 = regular_body(RegularKind::cube, 2, ExtremalPosition::john);
  KBall b2 = inner_kball_search(cube2, 1, 5u, 20);
  CHECK(b2.radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  ConvexBody cube3 = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  KBall b3 = inner_kball_search(cube3, 1, 5u, 20);
  CHECK(b3.radius == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));

  // Cross-polytope: a coordinate segment of length 2 sqrt(n).
  ConvexBody cross3 = regular_body(RegularKind::cross_polytope, 3, ExtremalPosition::john);
  KBall bc = inner_kball_search(cross3, 1, 9u, 20);
  CHECK(bc.radius == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));

  // Simplex: the optimal segment joins two edge midpoints at radius sqrt(6);
  // the optimal 2-ball is the inscribed disc of a facet.
  ConvexBody simplex = regular_body(RegularKind::simplex, 3, ExtremalPosition::john);
  KBall bs = inner_kball_search(simplex, 1, 17u, 30);
  CHECK(bs.radius >= std::sqrt(6.0) - 1e-5);
  BoundReport rs = inner_bound_report(simplex, as_kellipsoid(bs));
  CHECK(rs.pass);
  CHECK(std::abs(rs.slack) <= 1e-5);
  KBall bf = inner_kball_search(simplex, 2, 23u, 30);
  CHECK(bf.radius >= std::sqrt(2.0) - 1e-5);
  BoundReport rf = inner_bound_report(simplex, as_kellipsoid(bf));
  CHECK(rf.pass);
}

TEST_CASE("inscribed k-ball search: random polytopes satisfy the bound") {
  for (int n : {2, 3}) {
    for (unsigned seed = 0; seed < 7; ++seed) {
      ConvexBody K = random_john_polytope(n, 1000 + seed);
      for (int k = 1; k < n; ++k) {
        CAPTURE(n);
        CAPTURE(seed);
        CAPTURE(k);
        KBall ball = inner_kball_search(K, k, seed, 6);
        CHECK(ball.radius >= 1.0 - 1e-9);  // the unit ball itself is feasible
        BoundReport rep = inner_bound_report(K, as_kellipsoid(ball));
        CHECK(rep.pass);
        CHECK(rep.containment_certified);
      }
    }
  }
}

TEST_CASE("inscribed k-ball search: preconditions") {
  ConvexBody cube = regular_body(RegularKind::cube, 3, ExtremalPosition::john);
  CHECK_THROWS_AS(inner_kball_search(cube, 0, 1u), Error);
  CHECK_THROWS_AS(inner_kball_search(cube, 3, 1u), Error);
  ConvexBody spindle = rounding_body(3, 1.5);
  CHECK_THROWS_WITH_AS(inner_kball_search(spindle, 1, 1u),
                       doctest::Contains("polytope"), Error);
}
