#include "geo/radii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geo/asymmetry.hpp"
#include "geo/ellipsoid.hpp"
#include "geo/lp.hpp"
#include "geo/nnls.hpp"
#include "geo/optim.hpp"
#include "geo/sampling.hpp"
#include "geo/scalars.hpp"

namespace geo {
namespace {

constexpr double kEqualityTrigger = 1e-6;  // relative gap that arms certificate checks
constexpr double kCertTol = 1e-7;          // rigidity residual level (exact constructions)
constexpr double kMveeCertTol = 1e-6;      // MVEE-derived certificate level

// ---------------------------------------------------------------------------
// Smallest enclosing ball: Welzl's move-to-front recursion, then an optimality
// certificate (the center must be a convex combination of support points).

struct Ball {
  Vec center;
  double radius = -1.0;  // negative marks the empty ball
};

bool ball_covers(const Ball& B, const Vec& p) {
  if (B.radius < 0.0) return false;
  return (p - B.center).norm() <= B.radius + 1e-10;
}

// Smallest ball through all points of R; the min-norm solve keeps the center
// inside aff(R) even when R is affinely dependent.
Ball circumball(const std::vector<Vec>& R, int d) {
  Ball B;
  B.center = Vec::Zero(d);
  if (R.empty()) return B;
  const int t = static_cast<int>(R.size());
  if (t == 1) {
    B.center = R[0];
    B.radius = 0.0;
    return B;
  }
  Mat A(t - 1, d);
  Vec rhs(t - 1);
  for (int i = 1; i < t; ++i) {
    A.row(i - 1) = 2.0 * (R[i] - R[0]).transpose();
    rhs[i - 1] = (R[i] - R[0]).squaredNorm();
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  B.center = R[0] + cod.solve(rhs);
  B.radius = 0.0;
  for (const Vec& p : R) B.radius = std::max(B.radius, (p - B.center).norm());
  return B;
}

Ball welzl(std::vector<Vec>& pts, int m, std::vector<Vec>& R, int d) {
  if (m == 0 || static_cast<int>(R.size()) == d + 1) return circumball(R, d);
  Ball B = welzl(pts, m - 1, R, d);
  if (ball_covers(B, pts[m - 1])) return B;
  Vec p = pts[m - 1];
  R.push_back(p);
  B = welzl(pts, m - 1, R, d);
  R.pop_back();
  std::rotate(pts.begin(), pts.begin() + m - 1, pts.begin() + m);  // move-to-front
  return B;
}

// ---------------------------------------------------------------------------
// Smallest ball enclosing conv(B(c0,r0) ∪ apexes). The farthest-ball radius
// f(c) = max(|c0-c|+r0, max_i |p_i-c|) is convex, so a certified local
// optimum is global; the certificate reuses the convex-hull condition on the
// touch points.

Ball ballhull_meb(const ConvexBody& P, bool& certified) {
  const int d = P.n;
  const Vec c0 = P.center;
  const double r0 = P.radius;
  auto farthest = [&](const Vec& c) {
    double f = (c0 - c).norm() + r0;
    for (int j = 0; j < P.apexes.cols(); ++j) f = std::max(f, (P.apexes.col(j) - c).norm());
    return f;
  };

  std::vector<Vec> starts{c0};
  if (P.apexes.cols() > 0) {
    Mat all(d, P.apexes.cols() + 1);
    all.leftCols(P.apexes.cols()) = P.apexes;
    all.col(P.apexes.cols()) = c0;
    starts.push_back(min_enclosing_ball(all).center);
  }
  Ball best;
  best.center = starts[0];
  best.radius = farthest(starts[0]);
  NmOptions opt;
  opt.xtol = 1e-12;
  for (const Vec& s : starts) {
    NmResult res = nelder_mead([&](const Vec& c) { return farthest(c); }, s, opt);
    if (res.f < best.radius) {
      best.radius = res.f;
      best.center = res.x;
    }
  }

  // Touch points: the far pole of the ball plus every apex at max distance.
  const double touch_tol = 1e-6 * std::max(1.0, best.radius);
  std::vector<Vec> touch;
  const double off = (c0 - best.center).norm();
  if (off <= 1e-12) {
    // Center coincides with the ball center: optimal iff the ball covers all.
    bool covered = true;
    for (int j = 0; j < P.apexes.cols(); ++j)
      covered = covered && (P.apexes.col(j) - c0).norm() <= r0 + 1e-9;
    certified = covered;
    if (covered) {
      best.center = c0;
      best.radius = r0;
    }
    return best;
  }
  if (std::abs(off + r0 - best.radius) <= touch_tol)
    touch.push_back(c0 + (r0 / off) * (c0 - best.center));
  for (int j = 0; j < P.apexes.cols(); ++j)
    if (std::abs((P.apexes.col(j) - best.center).norm() - best.radius) <= touch_tol)
      touch.push_back(P.apexes.col(j));

  certified = false;
  if (!touch.empty()) {
    Mat A(d + 1, touch.size());
    for (size_t i = 0; i < touch.size(); ++i) {
      A.col(i).head(d) = touch[i];
      A(d, i) = 1.0;
    }
    Vec rhs(d + 1);
    rhs.head(d) = best.center;
    rhs[d] = 1.0;
    certified = nnls(A, rhs).residual <= 1e-6 * std::max(1.0, best.center.norm());
  }
  return best;
}

// ---------------------------------------------------------------------------
// Containment of a k-ellipsoid in a body. Facet checks are exact for
// polytopes; the ellipsoid case reduces to a sphere-quadratic maximum; ball
// hulls combine the certificate polytope's facets with boundary sampling
// (polished by local search), the latter labeled non-certifying.

void facet_containment(const ConvexBody& H, const KEllipsoid& E, const char* what) {
  for (int i = 0; i < H.A.rows(); ++i) {
    const Vec a = H.A.row(i).transpose();
    if (oracle_ellip_support(E, a).value > H.b[i] + 1e-9)
      throw Error(errc::containment_violated, std::string(what) + ": ellipsoid crosses a facet");
  }
}

Mat boundary_grid(int k, int target) {
  if (k == 1) {
    Mat Y(1, 2);
    Y << 1.0, -1.0;
    return Y;
  }
  if (k == 2) return circle_grid(target);
  if (k == 3) return icosphere(4);
  Rng rng(0xba11a0ddULL + 97ULL * k);
  return random_directions(k, target, rng);
}

bool check_inner_containment(const ConvexBody& K, const KEllipsoid& E) {
  const int k = static_cast<int>(E.basis.cols());
  switch (K.kind) {
    case BodyKind::hpolytope:
    case BodyKind::vpolytope: {
      ConvexBody H = K;
      ensure_hform(H);
      facet_containment(H, E, "inner_bound_report");
      return true;
    }
    case BodyKind::ellipsoid: {
      // max_{x in E} (x-ec)' Q (x-ec) via the whitened sphere quadratic.
      Mat W = sqrtm_spd(K.Q);
      Mat M = W * E.basis * E.semiaxes.asDiagonal();
      Vec g = W * (E.origin - K.ec);
      SphereQuadMax q = max_quadratic_on_sphere(M.transpose() * M, M.transpose() * g);
      if (q.value + g.squaredNorm() > 1.0 + 1e-9)
        throw Error(errc::containment_violated, "inner_bound_report: ellipsoid not inside the body");
      return true;
    }
    case BodyKind::ballhull: {
      const bool have_cert = K.cert && K.cert->enclosing && K.cert->enclosing->has_H;
      if (have_cert) facet_containment(*K.cert->enclosing, E, "inner_bound_report");
      Mat Y = boundary_grid(k, 720);
      Mat D = E.basis * E.semiaxes.asDiagonal();
      double worst = -std::numeric_limits<double>::infinity();
      Vec worst_y = Y.col(0);
      for (int j = 0; j < Y.cols(); ++j) {
        const Vec x = E.origin + D * Y.col(j);
        const double g = gauge(K, x);
        if (g > worst) {
          worst = g;
          worst_y = Y.col(j);
        }
        if (g > 1.0 + 1e-9)
          throw Error(errc::containment_violated, "inner_bound_report: boundary sample escapes the body");
      }
      // Polish the worst sample over the boundary sphere.
      NmOptions opt;
      opt.max_iter = 400;
      NmResult res = nelder_mead(
          [&](const Vec& z) {
            const double nz = z.norm();
            if (nz < 1e-12) return 0.0;
            return -gauge(K, E.origin + D * (z / nz));
          },
          worst_y, opt);
      if (-res.f > 1.0 + 1e-9)
        throw Error(errc::containment_violated, "inner_bound_report: refined boundary point escapes the body");
      return have_cert;
    }
  }
  return false;
}

void validate_kellipsoid(const KEllipsoid& E, int n, const char* what) {
  if (static_cast<int>(E.basis.rows()) != n || E.origin.size() != n)
    throw Error(errc::wrong_dimension, std::string(what) + ": carrier lives in the wrong ambient space");
  const int k = static_cast<int>(E.basis.cols());
  if (k < 1 || k > n - 1)
    throw Error(errc::parameter_out_of_range, std::string(what) + ": k must be in [1, n-1]");
  if (E.semiaxes.size() != k || E.semiaxes.minCoeff() <= 0.0)
    throw Error(errc::degenerate_input, std::string(what) + ": semiaxes must be positive");
  if (!is_orthonormal(E.basis))
    throw Error(errc::degenerate_input, std::string(what) + ": carrier basis not orthonormal");
}

double body_john_asymmetry(const ConvexBody& K) {
  if (K.cert && K.cert->john_asymmetry) return *K.cert->john_asymmetry;
  return john_asymmetry(K).value;
}

}  // namespace

MinBall min_enclosing_ball(const Mat& points) {
  const int d = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (d < 1 || m < 1) throw Error(errc::degenerate_input, "min_enclosing_ball: empty point set");
  std::vector<Vec> pts(m);
  for (int j = 0; j < m; ++j) pts[j] = points.col(j);
  Rng rng(0x5eb00d5ULL + 1315423911ULL * static_cast<std::uint64_t>(m) + d);
  for (int i = m - 1; i > 0; --i) std::swap(pts[i], pts[rng.uniform_int(0, i)]);
  std::vector<Vec> R;
  Ball B = welzl(pts, m, R, d);

  MinBall out;
  out.center = B.center;
  out.radius = std::max(B.radius, 0.0);
  const double stol = 1e-8 * std::max(1.0, out.radius);
  for (int j = 0; j < m; ++j)
    if (std::abs((points.col(j) - out.center).norm() - out.radius) <= stol)
      out.support.push_back(j);
  if (m == 1) {
    out.certified = true;
    return out;
  }
  if (out.support.size() >= 2) {
    Mat A(d + 1, out.support.size());
    for (size_t i = 0; i < out.support.size(); ++i) {
      A.col(i).head(d) = points.col(out.support[i]);
      A(d, i) = 1.0;
    }
    Vec rhs(d + 1);
    rhs.head(d) = out.center;
    rhs[d] = 1.0;
    out.certified = nnls(A, rhs).residual <= 1e-7 * std::max(1.0, out.center.norm());
  }
  return out;
}

BoundReport outer_kradius(const ConvexBody& K, const Subspace& F) {
  if (F.ambient() != K.n)
    throw Error(errc::wrong_dimension, "outer_kradius: subspace ambient dimension mismatch");
  const int n = K.n;
  const int k = F.dim();
  if (k < 1 || k > n)
    throw Error(errc::parameter_out_of_range, "outer_kradius: k must be in [1, n]");
  if (!loewner_verify(K).in_position)
    throw Error(errc::not_in_loewner_position,
                "outer_kradius: minimal enclosing ellipsoid is not the unit ball");

  ConvexBody P = project(K, F);
  double meb_radius = 0.0;
  Vec mvee_center;
  Mat mvee_shape;
  if (P.kind == BodyKind::ellipsoid) {
    Eigen::SelfAdjointEigenSolver<Mat> es(P.Q);
    meb_radius = 1.0 / std::sqrt(es.eigenvalues().minCoeff());
    mvee_center = P.ec;
    mvee_shape = P.Q;
  } else if (P.kind == BodyKind::ballhull) {
    bool certified = false;
    Ball b = ballhull_meb(P, certified);
    if (!certified)
      throw Error(errc::no_convergence, "outer_kradius: enclosing-ball certificate failed");
    meb_radius = b.radius;
    MveeResult mv = mvee_body(P);
    mvee_center = mv.center;
    mvee_shape = mv.shape;
  } else {
    ensure_vform(P);
    MinBall mb = min_enclosing_ball(P.V);
    if (!mb.certified)
      throw Error(errc::no_convergence, "outer_kradius: enclosing-ball certificate failed");
    meb_radius = mb.radius;
    MveeResult mv = mvee_points(P.V);
    mvee_center = mv.center;
    mvee_shape = mv.shape;
  }

  const double bound = std::sqrt(double(k) / n);
  BoundReport rep;
  rep.quantity_name = "outer_kradius";
  rep.measured = meb_radius;
  rep.bound = bound;
  rep.slack = meb_radius - bound;  // lower bound on the projection's radius

  Eigen::SelfAdjointEigenSolver<Mat> es(mvee_shape);
  const Vec ev = es.eigenvalues();
  double log_rvol = 0.0;
  for (int j = 0; j < k; ++j) log_rvol -= 0.5 * std::log(ev[j]);
  const double vol_radius = std::exp(log_rvol / k);  // volume-equivalent MVEE radius
  rep.pass = rep.slack >= -tol::bound_pass && vol_radius >= bound - tol::bound_pass;

  if (std::abs(rep.slack) <= kEqualityTrigger * std::max(1.0, bound)) {
    EqualityCertificate cert;
    cert.checked = true;
    cert.center_norm = mvee_center.norm();
    cert.expected_center_norm = 0.0;
    for (int j = 0; j < k; ++j)
      cert.axis_residual = std::max(cert.axis_residual, std::abs(1.0 / std::sqrt(ev[j]) - bound));
    cert.matches = cert.center_norm <= kMveeCertTol && cert.axis_residual <= kMveeCertTol;
    rep.equality_certificate = cert;
  }
  return rep;
}

BoundReport inner_bound_report(const ConvexBody& K, const KEllipsoid& E) {
  const int n = K.n;
  validate_kellipsoid(E, n, "inner_bound_report");
  const int k = static_cast<int>(E.basis.cols());
  PositionReport pos = john_verify(K);
  if (!pos.in_position)
    throw Error(errc::not_in_john_position,
                "inner_bound_report: maximal inscribed ellipsoid is not the unit ball");
  const double s = body_john_asymmetry(K);
  const bool certified = check_inner_containment(K, E);

  const double ball_term = (n + 1.0) / (k + 1.0);
  const double asym_term = (s + 1.0) / 2.0;
  const double min_term = std::min(asym_term, ball_term);
  const double bound = std::sqrt(double(n) / k * min_term);
  double log_mean = 0.0;
  for (int j = 0; j < k; ++j) log_mean += std::log(E.semiaxes[j]);
  const double measured = std::exp(log_mean / k);  // volume-equivalent radius

  BoundReport rep;
  rep.quantity_name = "inner_kellipsoid";
  rep.measured = measured;
  rep.bound = bound;
  rep.slack = bound - measured;  // upper bound on the inscribed volume radius
  rep.pass = rep.slack >= -tol::bound_pass;
  rep.containment_certified = certified;

  if (std::abs(rep.slack) <= kEqualityTrigger * std::max(1.0, bound)) {
    EqualityCertificate cert;
    cert.checked = true;
    for (int j = 0; j < k; ++j)
      cert.axis_residual = std::max(cert.axis_residual, std::abs(E.semiaxes[j] - bound));
    cert.center_norm = E.origin.norm();
    cert.expected_center_norm = std::sqrt(std::max(0.0, n * (min_term - 1.0)));
    if (cert.center_norm > 1e-9) {
      const Vec chat = E.origin / cert.center_norm;
      cert.perp_residual = (E.basis.transpose() * chat).cwiseAbs().maxCoeff();
    }
    const Mat& contacts =
        (K.cert && K.cert->contacts.cols() > 0) ? K.cert->contacts : pos.contacts;
    cert.contact_products = contacts.transpose() * E.origin;
    // Extremal contact products take one of two values; the second depends on
    // which term of the bound is active.
    const double other = ball_term <= asym_term ? (k - n) / (k + 1.0) : (1.0 - s) / 2.0;
    for (int i = 0; i < cert.contact_products.size(); ++i) {
      const double p = cert.contact_products[i];
      cert.product_residual =
          std::max(cert.product_residual, std::min(std::abs(p - 1.0), std::abs(p - other)));
    }
    cert.matches = cert.axis_residual <= kCertTol &&
                   std::abs(cert.center_norm - cert.expected_center_norm) <= kCertTol &&
                   cert.perp_residual <= kCertTol && cert.product_residual <= kCertTol;
    rep.equality_certificate = cert;
  }
  return rep;
}

BoundReport planar_diameter_report(const ConvexBody& K) {
  if (K.n != 2)
    throw Error(errc::wrong_dimension, "planar_diameter_report: only planar bodies");
  if (!john_verify(K).in_position)
    throw Error(errc::not_in_john_position,
                "planar_diameter_report: maximal inscribed ellipsoid is not the unit disc");
  const double s = body_john_asymmetry(K);
  const double bound = planar_diameter_bound(s);

  double D = 0.0;
  Vec x = Vec::Zero(2), y = Vec::Zero(2);
  if (K.kind == BodyKind::ellipsoid) {
    Eigen::SelfAdjointEigenSolver<Mat> es(K.Q);
    const double a = 1.0 / std::sqrt(es.eigenvalues()[0]);
    const Vec v = es.eigenvectors().col(0);
    D = 2.0 * a;
    x = K.ec + a * v;
    y = K.ec - a * v;
  } else if (K.kind == BodyKind::ballhull) {
    D = 2.0 * K.radius;
    x = K.center + K.radius * Vec::Unit(2, 0);
    y = K.center - K.radius * Vec::Unit(2, 0);
    for (int i = 0; i < K.apexes.cols(); ++i) {
      const Vec p = K.apexes.col(i);
      const double dp = (p - K.center).norm() + K.radius;
      if (dp > D) {
        D = dp;
        x = p;
        y = K.center - K.radius * (p - K.center).normalized();
      }
      for (int j = i + 1; j < K.apexes.cols(); ++j) {
        const double dij = (p - K.apexes.col(j)).norm();
        if (dij > D) {
          D = dij;
          x = p;
          y = K.apexes.col(j);
        }
      }
    }
  } else {
    ConvexBody V = K;
    ensure_vform(V);
    for (int i = 0; i < V.V.cols(); ++i)
      for (int j = i + 1; j < V.V.cols(); ++j) {
        const double dij = (V.V.col(i) - V.V.col(j)).norm();
        if (dij > D) {
          D = dij;
          x = V.V.col(i);
          y = V.V.col(j);
        }
      }
  }

  BoundReport rep;
  rep.quantity_name = "planar_diameter";
  rep.measured = D;
  rep.bound = bound;
  rep.slack = bound - D;  // upper bound on the diameter
  rep.pass = rep.slack >= -tol::bound_pass;

  if (std::abs(rep.slack) <= kEqualityTrigger * std::max(1.0, bound)) {
    EqualityCertificate cert;
    cert.checked = true;
    const double xi = std::sqrt(std::max(0.0, D * D / 2.0 - 2.0));
    cert.axis_residual = std::max(std::abs(x.norm() - xi), std::abs(y.norm() - xi));
    cert.center_norm = 0.5 * (x + y).norm();
    cert.expected_center_norm = std::sqrt(std::max(0.0, D * D / 4.0 - 2.0));
    cert.matches = cert.axis_residual <= kCertTol &&
                   std::abs(cert.center_norm - cert.expected_center_norm) <= kCertTol;
    rep.equality_certificate = cert;
  }
  return rep;
}

SupportEval oracle_ellip_support(const KEllipsoid& E, const Vec& b) {
  if (b.size() != E.basis.rows())
    throw Error(errc::wrong_dimension, "oracle_ellip_support: direction dimension mismatch");
  const int k = static_cast<int>(E.basis.cols());
  const Vec bv = E.basis.transpose() * b;  // carrier components of b
  double S = 0.0;
  for (int j = 0; j < k; ++j) S += E.semiaxes[j] * E.semiaxes[j] * bv[j] * bv[j];
  const double root = std::sqrt(S);
  SupportEval out;
  out.value = b.dot(E.origin) + root;
  if (root > 1e-12 * std::max(1.0, b.norm() * E.semiaxes.maxCoeff())) {
    Vec w = Vec::Zero(b.size());
    for (int j = 0; j < k; ++j) w += E.semiaxes[j] * E.semiaxes[j] * bv[j] * E.basis.col(j);
    out.maximizer = E.origin + w / root;
    out.unique = true;
  } else {
    out.maximizer = E.origin;  // b is perpendicular to the carrier: any point works
    out.unique = false;
  }
  return out;
}

BallLemmaReport oracle_ball_lemma(const std::vector<Vec>& xs, const std::vector<Vec>& us) {
  if (xs.empty() || xs.size() != us.size())
    throw Error(errc::degenerate_input, "oracle_ball_lemma: mismatched or empty input lists");
  const int d = static_cast<int>(xs[0].size());
  Vec sum = Vec::Zero(d);
  for (const Vec& x : xs) {
    if (x.size() != d) throw Error(errc::degenerate_input, "oracle_ball_lemma: mixed dimensions");
    sum += x;
  }
  if (sum.norm() > 1e-10)
    throw Error(errc::parameter_out_of_range, "oracle_ball_lemma: the x's must sum to zero");
  for (const Vec& u : us) {
    if (u.size() != d) throw Error(errc::degenerate_input, "oracle_ball_lemma: mixed dimensions");
    if (std::abs(u.norm() - 1.0) > 1e-9)
      throw Error(errc::degenerate_input, "oracle_ball_lemma: the u's must be unit vectors");
  }

  const int m = static_cast<int>(xs.size());
  BallLemmaReport rep;
  double dot = 0.0;
  for (int i = 0; i < m; ++i) dot += xs[i].dot(us[i]);
  rep.lhs = dot * dot;
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < m; ++l)
      rep.gamma += xs[i].norm() * xs[l].norm() * (1.0 - us[i].dot(us[l]));
  rep.holds = rep.lhs <= rep.gamma + 1e-9 * std::max(1.0, rep.gamma);
  rep.near_equality = rep.holds && rep.gamma - rep.lhs <= 1e-9 * std::max(rep.gamma, 1e-12);

  if (rep.near_equality) {
    rep.characterization_checked = true;
    double xi = 0.0;
    for (const Vec& x : xs) xi += x.norm();
    if (xi <= 1e-14) {
      rep.characterization_ok = true;  // every x vanishes: condition is vacuous
    } else {
      Vec u = Vec::Zero(d);
      for (int i = 0; i < m; ++i) u += xs[i].norm() * us[i];
      u /= xi;
      const double rho = std::sqrt(std::max(rep.gamma, 0.0)) / xi;
      double best = std::numeric_limits<double>::infinity();
      for (const double sigma : {1.0, -1.0}) {
        double res = 0.0;
        for (int i = 0; i < m; ++i) {
          const double nx = xs[i].norm();
          if (nx <= 1e-12) continue;
          res = std::max(res, (us[i] - u - sigma * rho * xs[i] / nx).norm());
        }
        best = std::min(best, res);
      }
      rep.characterization_residual = best;
      rep.characterization_ok = best <= 1e-7;
    }
  }
  return rep;
}

VectorPropertyReport oracle_john_vectors(const ConvexBody& K, const Vec& x, const Vec& y) {
  if (x.size() != K.n || y.size() != K.n)
    throw Error(errc::wrong_dimension, "oracle_john_vectors: point dimension mismatch");
  if (!contains(K, x, 1e-9) || !contains(K, y, 1e-9))
    throw Error(errc::containment_violated, "oracle_john_vectors: point outside the body");
  const double n = K.n;
  VectorPropertyReport rep;
  rep.inner_product = x.dot(y);
  rep.distance = (x - y).norm();
  rep.inner_ok = rep.inner_product >= -n - 1e-9;
  const double pair_bound =
      std::sqrt(2.0 * (std::max(x.squaredNorm(), y.squaredNorm()) + n));
  rep.pair_ok = rep.distance <= pair_bound + 1e-9;
  const double global_bound = std::sqrt(2.0 * n * (n + 1.0));
  rep.global_ok = rep.distance <= global_bound + 1e-9;
  rep.near_global_equality = global_bound - rep.distance <= 1e-6 * global_bound;
  if (rep.near_global_equality)
    rep.equality_norms_ok = std::abs(x.norm() - n) <= 1e-6 && std::abs(y.norm() - n) <= 1e-6;
  return rep;
}

KBall inner_kball_search(const ConvexBody& K, int k, unsigned seed, int restarts) {
  const int n = K.n;
  if (k < 1 || k > n - 1)
    throw Error(errc::parameter_out_of_range, "inner_kball_search: k must be in [1, n-1]");
  if (restarts < 1)
    throw Error(errc::parameter_out_of_range, "inner_kball_search: need at least one restart");
  if (K.kind != BodyKind::hpolytope && K.kind != BodyKind::vpolytope)
    throw Error(errc::representation_unavailable, "inner_kball_search: needs a polytope");
  ConvexBody H = K;
  ensure_hform(H);
  const int m = static_cast<int>(H.A.rows());

  auto carrier_of = [&](const Vec& z) {
    Mat X = Eigen::Map<const Mat>(z.data(), n, k);
    Eigen::HouseholderQR<Mat> qr(X);
    Mat Q = qr.householderQ() * Mat::Identity(n, k);
    return Q;
  };
  // For a fixed carrier the best (center, radius) is an exact LP:
  // a_i'c + |V'a_i| r <= b_i for every facet, maximize r.
  auto lp_radius = [&](const Mat& V, Vec* center) {
    Mat A(m, n + 1);
    A.leftCols(n) = H.A;
    for (int i = 0; i < m; ++i) A(i, n) = (V.transpose() * H.A.row(i).transpose()).norm();
    Vec obj = Vec::Zero(n + 1);
    obj[n] = 1.0;
    LpResult r = solve_lp(obj, A, H.b, /*maximize=*/true);
    if (r.status != LpStatus::optimal) return -1.0;
    if (center) *center = r.x.head(n);
    return r.x[n];
  };

  // Structured starts first (coordinate and flat carriers), then random ones.
  std::vector<Vec> starts;
  {
    Mat X0 = Mat::Identity(n, k);
    starts.push_back(Eigen::Map<Vec>(X0.data(), n * k));
    Mat X1 = Mat::Ones(n, k);
    for (int j = 1; j < k; ++j) X1(j - 1, j) = -1.0;  // keep the columns independent
    starts.push_back(Eigen::Map<Vec>(X1.data(), n * k));
  }
  Rng root(seed ? seed : 1u);
  for (int t = 0; t < restarts; ++t) {
    Rng rng(root.derive(static_cast<std::uint64_t>(t) + 1));
    starts.push_back(rng.normal_vec(n * k));
  }

  NmOptions opt;
  opt.max_iter = 500;
  double best_r = -1.0;
  Mat best_V = Mat::Identity(n, k);
  for (const Vec& z0 : starts) {
    NmResult res = nelder_mead(
        [&](const Vec& z) { return -lp_radius(carrier_of(z), nullptr); }, z0, opt);
    const double r = -res.f;
    if (r > best_r) {
      best_r = r;
      best_V = carrier_of(res.x);
    }
  }

  KBall out;
  out.basis = best_V;
  out.radius = lp_radius(best_V, &out.origin);
  if (out.radius <= 0.0)
    throw Error(errc::no_convergence, "inner_kball_search: no feasible inscribed ball found");
  return out;
}

}  // namespace geo
