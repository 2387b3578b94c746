#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "geo/base.hpp"
#include "geo/bodies.hpp"
#include "geo/ellipsoid.hpp"
#include "geo/optim.hpp"

using namespace geo;

namespace {

Mat cube_vertices(int n) {
  int m = 1 << n;
  Mat V(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) V(i, j) = (j >> i) & 1 ? 1.0 : -1.0;
  return V;
}

ConvexBody cube_h(int n) {
  Mat A(2 * n, n);
  Vec b = Vec::Ones(2 * n);
  A.setZero();
  for (int i = 0; i < n; ++i) {
    A(2 * i, i) = 1.0;
    A(2 * i + 1, i) = -1.0;
  }
  return make_hpolytope(A, b);
}

// n+1 unit vectors in R^n with pairwise inner product -1/n
Mat simplex_dirs(int n) {
  Mat ones = Vec::Ones(n + 1).normalized();
  Mat F = orthonormal_completion(ones);
  Mat B = F.rightCols(n);
  Mat W(n, n + 1);
  for (int i = 0; i <= n; ++i) {
    Vec u = Vec::Unit(n + 1, i) - Vec::Constant(n + 1, 1.0 / (n + 1));
    W.col(i) = (B.transpose() * u).normalized();
  }
  return W;
}

}  // namespace

TEST_CASE("sphere-quadratic maximizer matches sampling and satisfies stationarity") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform_int(2, 5);
    Mat R = Mat::Random(n, n);
    Mat B = R * R.transpose();  // PSD
    Vec g = rng.normal_vec(n);
    SphereQuadMax sq = max_quadratic_on_sphere(B, g);
    CHECK(std::abs(sq.u.norm() - 1.0) < 1e-10);
    // stationarity: (B - nu I) u = -g for some nu  =>  residual orthogonal test
    Vec r = B * sq.u + g;
    Vec tang = r - r.dot(sq.u) * sq.u;
    CHECK(tang.norm() < 1e-8 * std::max(1.0, r.norm()));
    // compare against random + local search
    double best = -1e300;
    for (int i = 0; i < 500; ++i) {
      Vec u = rng.unit_vector(n);
      best = std::max(best, u.dot(B * u) + 2 * g.dot(u));
    }
    auto f = [&](const Vec& v) {
      Vec u = v.normalized();
      return -(u.dot(B * u) + 2 * g.dot(u));
    };
    NmResult nm = nelder_mead(f, sq.u, {300, 1e-12, 1e-14, 0.1});
    best = std::max(best, -nm.f);
    CHECK(sq.value >= best - 1e-7);
  }
  // zero linear term: value is the top eigenvalue
  Mat B2(2, 2);
  B2 << 3, 0, 0, 1;
  SphereQuadMax sq = max_quadratic_on_sphere(B2, Vec::Zero(2));
  CHECK(sq.value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spd square root") {
  Rng rng(32);
  for (int n = 2; n <= 6; ++n) {
    Mat R = Mat::Random(n, n);
    Mat M = R * R.transpose() + 0.1 * Mat::Identity(n, n);
    Mat T = sqrtm_spd(M);
    CHECK((T * T - M).norm() < 1e-11 * M.norm());
    CHECK((T - T.transpose()).norm() < 1e-12);
  }
}

TEST_CASE("minimal enclosing ellipsoid of the cube is the scaled ball") {
  for (int n = 2; n <= 4; ++n) {
    MveeResult r = mvee_points(cube_vertices(n));
    CHECK(r.gap <= 1e-9 * (n + 1));
    CHECK(r.center.norm() < 1e-9);
    CHECK((r.shape - Mat::Identity(n, n) / n).norm() < 1e-8);
    CHECK(r.lambdas.sum() == doctest::Approx(double(n)).epsilon(1e-10));
    Mat msum = Mat::Zero(n, n);
    Vec vsum = Vec::Zero(n);
    for (int j = 0; j < r.contacts.cols(); ++j) {
      msum += r.lambdas[j] * r.contacts.col(j) * r.contacts.col(j).transpose();
      vsum += r.lambdas[j] * r.contacts.col(j);
    }
    CHECK((msum - Mat::Identity(n, n)).norm() < 1e-8);
    CHECK(vsum.norm() < 1e-8);
  }
}

TEST_CASE("minimal enclosing ellipse through four symmetric points") {
  Mat P(2, 4);
  P << 2, -2, 0, 0, 0, 0, 1, -1;
  MveeResult r = mvee_points(P);
  Mat expect(2, 2);
  expect << 0.25, 0, 0, 1;
  CHECK(r.center.norm() < 1e-10);
  CHECK((r.shape - expect).norm() < 1e-9);
}

TEST_CASE("minimal enclosing ellipsoid of a regular simplex is the unit ball") {
  for (int n = 2; n <= 5; ++n) {
    Mat W = simplex_dirs(n);
    MveeResult r = mvee_points(W);
    CHECK(r.center.norm() < 1e-9);
    CHECK((r.shape - Mat::Identity(n, n)).norm() < 1e-8);
    for (int j = 0; j < r.weights.size(); ++j)
      CHECK(r.weights[j] == doctest::Approx(1.0 / (n + 1)).epsilon(1e-7));
  }
}

TEST_CASE("minimal enclosing ellipsoid is affinely equivariant") {
  Rng rng(88);
  int n = 3;
  Mat P(n, 12);
  for (int j = 0; j < 12; ++j) P.col(j) = 2.0 * rng.normal_vec(n);
  Mat L = Mat::Identity(n, n);
  L(0, 1) = 0.8;
  L(1, 2) = -0.4;
  L(0, 0) = 1.7;
  Vec t = rng.normal_vec(n);
  MveeResult r0 = mvee_points(P);
  Mat P2 = (L * P).colwise() + t;
  MveeResult r1 = mvee_points(P2);
  Mat Li = L.inverse();
  CHECK((r1.center - (L * r0.center + t)).norm() < 1e-7);
  CHECK((r1.shape - Li.transpose() * r0.shape * Li).norm() < 1e-7 * r0.shape.norm());
}

TEST_CASE("enclosing ellipsoid of a plain ball body recovers the ball") {
  Vec c(3);
  c << 0.4, -0.2, 0.1;
  ConvexBody B = make_ballhull(c, 1.7, Mat(3, 0));
  MveeResult r = mvee_body(B);
  CHECK((r.center - c).norm() < 1e-7);
  CHECK((r.shape - Mat::Identity(3, 3) / (1.7 * 1.7)).norm() < 1e-7);
}

TEST_CASE("enclosing ellipsoid of a ball with one apex: touching and containment") {
  Mat apex(2, 1);
  apex << 3.0, 0.0;
  ConvexBody K = make_ballhull(Vec::Zero(2), 1.0, apex);
  MveeResult r = mvee_body(K);
  CHECK(r.gap <= 1e-7);
  // containment of the ball part and the apex
  CHECK(ball_in_ellipsoid_defect(Vec::Zero(2), 1.0, r.center, r.shape) <= 1e-7);
  Vec da = apex.col(0) - r.center;
  CHECK(da.dot(r.shape * da) <= 1.0 + 1e-7);
  // the apex is extreme, so the optimal ellipsoid must touch it
  CHECK(da.dot(r.shape * da) >= 1.0 - 1e-5);
}

TEST_CASE("maximal inscribed ellipsoid of boxes") {
  ConvexBody cube = cube_h(3);
  InscribedResult r = inscribed_ellipsoid(cube.A, cube.b);
  CHECK(r.kkt_residual <= 1e-9);
  CHECK((r.G - Mat::Identity(3, 3)).norm() < 1e-8);
  CHECK(r.d.norm() < 1e-9);
  CHECK(std::abs(r.min_slack) < 1e-8);

  Mat A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  Vec b(4);
  b << 2, 2, 1, 1;
  InscribedResult r2 = inscribed_ellipsoid(A, b);
  Mat expect(2, 2);
  expect << 2, 0, 0, 1;
  CHECK((r2.G - expect).norm() < 1e-8);
  CHECK(r2.d.norm() < 1e-9);
}

TEST_CASE("maximal inscribed ellipsoid of regular simplices is the unit ball") {
  for (int n = 2; n <= 5; ++n) {
    Mat W = simplex_dirs(n);
    Mat A(n + 1, n);
    for (int i = 0; i <= n; ++i) A.row(i) = -W.col(i).transpose();
    Vec b = Vec::Ones(n + 1);
    InscribedResult r = inscribed_ellipsoid(A, b);
    CHECK(r.kkt_residual <= 1e-9);
    CHECK((r.G - Mat::Identity(n, n)).norm() < 1e-7);
    CHECK(r.d.norm() < 1e-7);
  }
}

TEST_CASE("inscribed ellipsoid transforms with the body") {
  Rng rng(17);
  ConvexBody cube = cube_h(2);
  Mat L(2, 2);
  L << 1.3, 0.6, -0.2, 0.9;
  Vec t(2);
  t << 0.4, -1.1;
  AffineMap f = make_affine(L, t);
  ConvexBody KK = apply(f, cube);
  InscribedResult r = inscribed_ellipsoid(KK.A, KK.b);
  // reference: image of the unit ball (inscribed ellipsoid of the cube)
  for (int i = 0; i < 100; ++i) {
    Vec a = rng.unit_vector(2);
    double h_computed = r.d.dot(a) + (r.G * a).norm();
    double h_expected = t.dot(a) + (L.transpose() * a).norm();
    CHECK(h_computed == doctest::Approx(h_expected).epsilon(1e-7));
  }
}

TEST_CASE("sphere decomposition of the cube") {
  ConvexBody cube = cube_h(3);
  JohnDecomposition d = john_decomposition(cube);
  CHECK(d.residual <= 1e-12);
  CHECK(d.contact_defect <= 1e-12);
  REQUIRE(d.contacts.cols() == 6);
  for (int j = 0; j < 6; ++j) CHECK(d.lambdas[j] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("sphere decomposition of the regular simplex") {
  for (int n = 2; n <= 5; ++n) {
    Mat W = simplex_dirs(n);
    Mat A(n + 1, n);
    for (int i = 0; i <= n; ++i) A.row(i) = -W.col(i).transpose();
    ConvexBody T = make_hpolytope(A, Vec::Ones(n + 1));
    JohnDecomposition d = john_decomposition(T);
    CHECK(d.residual <= 1e-10);
    REQUIRE(d.contacts.cols() == n + 1);
    for (int j = 0; j < d.lambdas.size(); ++j)
      CHECK(d.lambdas[j] == doctest::Approx(double(n) / (n + 1)).epsilon(1e-8));
    PositionReport rep = john_verify(T);
    CHECK(rep.in_position);
  }
}

TEST_CASE("normalization into inscribed-ball position") {
  Rng rng(909);
  for (int n = 2; n <= 4; ++n) {
    Mat V(n, 3 * n + 2);
    for (int j = 0; j < V.cols(); ++j) V.col(j) = (1.0 + rng.uniform()) * rng.unit_vector(n);
    ConvexBody K = make_vpolytope(V);
    NormalizedBody nb = normalize_john(K);
    PositionReport rep = john_verify(nb.body);
    CHECK(rep.in_position);
    CHECK(rep.vector_residual <= 1e-8);
    CHECK(rep.matrix_residual <= 1e-8);
    CHECK(rep.containment_defect <= 1e-8);
    // normalizing again should be (nearly) the identity
    NormalizedBody nb2 = normalize_john(nb.body);
    CHECK((nb2.map.L - Mat::Identity(n, n)).norm() < 1e-6);
    CHECK(nb2.map.t.norm() < 1e-6);
  }
}

TEST_CASE("normalization into enclosing-ball position") {
  Mat V(2, 4);
  V << 2, -2, 0, 0, 0, 0, 1, -1;
  ConvexBody K = make_vpolytope(V);
  NormalizedBody nb = normalize_loewner(K);
  PositionReport rep = loewner_verify(nb.body);
  CHECK(rep.in_position);
  CHECK(rep.containment_defect <= 1e-9);
  // all four vertices become unit contacts
  for (int j = 0; j < nb.body.V.cols(); ++j)
    CHECK(nb.body.V.col(j).norm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("extremal ellipsoids swap under polarity for symmetric bodies") {
  Rng rng(2718);
  int n = 3;
  Mat X(n, 5);
  for (int j = 0; j < 5; ++j) X.col(j) = (1.0 + rng.uniform()) * rng.unit_vector(n);
  Mat V(n, 10);
  V << X, -X;
  ConvexBody K = make_vpolytope(V);

  MveeResult louter = mvee_points(V);
  CHECK(louter.center.norm() < 1e-8);

  ConvexBody Kp = polar(K);
  InscribedResult jinner = inscribed_ellipsoid(Kp.A, Kp.b);
  CHECK(jinner.d.norm() < 1e-7);
  // polar of {x'Qx<=1} is {x'Q^{-1}x<=1}; the inscribed ellipsoid of the polar
  // body must equal it, i.e. G^2 = Q_outer.
  Mat G2 = jinner.G * jinner.G;
  CHECK((G2 - louter.shape).norm() < 1e-6 * louter.shape.norm());
}

TEST_CASE("containment defect helpers") {
  // unit ball inside the doubled ball: clean containment
  CHECK(ball_in_ellipsoid_defect(Vec::Zero(2), 1.0, Vec::Zero(2), Mat::Identity(2, 2) / 4)
        == doctest::Approx(0.0));
  // shifted ball poking out of the doubled ball: farthest point at distance 2.5
  Vec c(2);
  c << 1.5, 0;
  CHECK(ball_in_ellipsoid_defect(c, 1.0, Vec::Zero(2), Mat::Identity(2, 2) / 4)
        == doctest::Approx(0.25).epsilon(1e-9));
  // ellipsoid in unit ball
  CHECK(ellipsoid_in_ball_defect(Vec::Zero(3), Mat::Identity(3, 3) * 4) == doctest::Approx(0.0));
  CHECK(ellipsoid_in_ball_defect(Vec::Zero(3), Mat::Identity(3, 3) / 4)
        == doctest::Approx(1.0).epsilon(1e-9));
  ConvexBody cube = cube_h(2);
  CHECK(unit_ball_in_body_defect(cube) == doctest::Approx(0.0));
  CHECK(body_in_unit_ball_defect(cube) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
}
