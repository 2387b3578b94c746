#include "geo/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "geo/lp.hpp"
#include "geo/optim.hpp"

namespace geo {

namespace {

std::string dim_msg(const char* what, int got, int want) {
  std::ostringstream os;
  os << what << ": dimension mismatch (got " << got << ", want " << want << ")";
  return os.str();
}

double binom_count(int m, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= static_cast<double>(m - i) / (i + 1);
  return c;
}

// Visit all k-subsets of {0..m-1}; f returns false to abort.
template <typename F>
void for_each_subset(int m, int k, F&& f) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!f(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Subspace / AffineMap

Subspace make_subspace(const Mat& basis) {
  if (basis.cols() < 1 || basis.cols() > basis.rows())
    throw Error(errc::wrong_dimension, "subspace: need 1 <= k <= n basis columns");
  if (!is_orthonormal(basis))
    throw Error(errc::degenerate_input, "subspace: basis columns not orthonormal within 1e-10");
  return Subspace{basis};
}

Subspace coordinate_subspace(int n, const std::vector<int>& coords) {
  Mat basis = Mat::Zero(n, static_cast<int>(coords.size()));
  for (size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] < 0 || coords[j] >= n)
      throw Error(errc::parameter_out_of_range, "subspace: coordinate index out of range");
    basis(coords[j], static_cast<int>(j)) = 1.0;
  }
  return make_subspace(basis);
}

AffineMap make_affine(const Mat& L, const Vec& t) {
  if (L.rows() != L.cols() || L.rows() != t.size())
    throw Error(errc::wrong_dimension, "affine map: square linear part and matching translation required");
  if (std::abs(L.determinant()) <= tol::affine_det)
    throw Error(errc::degenerate_input, "affine map: |det| below 1e-12");
  return AffineMap{L, t};
}

AffineMap identity_map(int n) { return AffineMap{Mat::Identity(n, n), Vec::Zero(n)}; }

AffineMap compose(const AffineMap& f, const AffineMap& g) {
  return AffineMap{f.L * g.L, f.L * g.t + f.t};
}

AffineMap inverse(const AffineMap& f) {
  Mat Li = f.L.inverse();
  return AffineMap{Li, -(Li * f.t)};
}

// ---------------------------------------------------------------------------
// Constructors

const char* body_kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::vpolytope: return "vpolytope";
    case BodyKind::hpolytope: return "hpolytope";
    case BodyKind::ballhull: return "ballhull";
    case BodyKind::ellipsoid: return "ellipsoid";
  }
  return "?";
}

ConvexBody make_vpolytope(const Mat& vertices) {
  const int n = static_cast<int>(vertices.rows());
  const int m = static_cast<int>(vertices.cols());
  if (n < 1) throw Error(errc::wrong_dimension, "vpolytope: empty vertex matrix");

  // merge duplicates
  std::vector<int> keep;
  for (int j = 0; j < m; ++j) {
    bool dup = false;
    for (int i : keep) {
      if ((vertices.col(j) - vertices.col(i)).lpNorm<Eigen::Infinity>() <= tol::vertex_dedup) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(j);
  }
  Mat V(n, static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) V.col(static_cast<int>(j)) = vertices.col(keep[j]);

  if (V.cols() < n + 1)
    throw Error(errc::degenerate_input, "vpolytope: fewer than n+1 distinct vertices");
  Mat D = V.rightCols(V.cols() - 1).colwise() - V.col(0);
  Eigen::ColPivHouseholderQR<Mat> qr(D);
  qr.setThreshold(1e-10);
  if (qr.rank() < n)
    throw Error(errc::degenerate_input, "vpolytope: vertex set not full-dimensional");

  ConvexBody K;
  K.kind = BodyKind::vpolytope;
  K.n = n;
  K.V = V;
  K.has_V = true;
  return K;
}

ConvexBody make_hpolytope(const Mat& A_in, const Vec& b_in) {
  const int m = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());
  if (m < n + 1) throw Error(errc::degenerate_input, "hpolytope: fewer than n+1 halfspaces");
  if (b_in.size() != m) throw Error(errc::wrong_dimension, dim_msg("hpolytope offsets", (int)b_in.size(), m));

  Mat A(m, n);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    double nrm = A_in.row(i).norm();
    if (nrm <= 1e-14) throw Error(errc::degenerate_input, "hpolytope: zero normal row");
    A.row(i) = A_in.row(i) / nrm;
    b[i] = b_in[i] / nrm;
  }

  // boundedness: 2n support LPs
  for (int j = 0; j < n; ++j) {
    for (double sgn : {1.0, -1.0}) {
      Vec c = Vec::Zero(n);
      c[j] = sgn;
      LpResult r = solve_lp(c, A, b, /*maximize=*/true);
      if (r.status == LpStatus::unbounded)
        throw Error(errc::unbounded_body, "hpolytope: recession direction along coordinate axis");
      if (r.status == LpStatus::infeasible)
        throw Error(errc::empty_interior, "hpolytope: empty feasible set");
    }
  }
  auto [cc, rad] = chebyshev_center(A, b);
  (void)cc;
  if (!(rad > tol::interior_radius))
    throw Error(errc::empty_interior, "hpolytope: chebyshev radius below 1e-9 (no interior)");

  ConvexBody K;
  K.kind = BodyKind::hpolytope;
  K.n = n;
  K.A = A;
  K.b = b;
  K.has_H = true;
  return K;
}

ConvexBody make_ballhull(const Vec& center, double radius, const Mat& apexes) {
  const int n = static_cast<int>(center.size());
  if (!(radius > 0)) throw Error(errc::parameter_out_of_range, "ballhull: radius must be positive");
  if (apexes.size() > 0 && apexes.rows() != n)
    throw Error(errc::wrong_dimension, dim_msg("ballhull apexes", (int)apexes.rows(), n));

  std::vector<int> keep;
  for (int j = 0; j < apexes.cols(); ++j) {
    if ((apexes.col(j) - center).norm() > radius + tol::vertex_dedup) {
      bool dup = false;
      for (int i : keep) {
        if ((apexes.col(j) - apexes.col(i)).lpNorm<Eigen::Infinity>() <= tol::vertex_dedup) {
          dup = true;
          break;
        }
      }
      if (!dup) keep.push_back(j);
    }
  }
  ConvexBody K;
  K.kind = BodyKind::ballhull;
  K.n = n;
  K.center = center;
  K.radius = radius;
  K.apexes.resize(n, static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) K.apexes.col(static_cast<int>(j)) = apexes.col(keep[j]);
  return K;
}

ConvexBody make_ellipsoid(const Vec& center, const Mat& Q) {
  const int n = static_cast<int>(center.size());
  if (Q.rows() != n || Q.cols() != n)
    throw Error(errc::wrong_dimension, dim_msg("ellipsoid shape", (int)Q.rows(), n));
  Mat Qs = 0.5 * (Q + Q.transpose());
  Eigen::LLT<Mat> llt(Qs);
  if (llt.info() != Eigen::Success)
    throw Error(errc::degenerate_input, "ellipsoid: shape matrix not positive definite");
  ConvexBody K;
  K.kind = BodyKind::ellipsoid;
  K.n = n;
  K.ec = center;
  K.Q = Qs;
  return K;
}

// ---------------------------------------------------------------------------
// Support

double support(const ConvexBody& K, const Vec& a) {
  if (a.size() != K.n) throw Error(errc::wrong_dimension, dim_msg("support direction", (int)a.size(), K.n));
  switch (K.kind) {
    case BodyKind::vpolytope:
      return (K.V.transpose() * a).maxCoeff();
    case BodyKind::hpolytope: {
      if (K.has_V) return (K.V.transpose() * a).maxCoeff();
      LpResult r = solve_lp(a, K.A, K.b, /*maximize=*/true);
      if (r.status == LpStatus::unbounded)
        throw Error(errc::unbounded_body, "support: unbounded in requested direction");
      if (r.status == LpStatus::infeasible)
        throw Error(errc::empty_interior, "support: empty body");
      return r.value;
    }
    case BodyKind::ballhull: {
      double h = K.center.dot(a) + K.radius * a.norm();
      if (K.apexes.cols() > 0) h = std::max(h, (K.apexes.transpose() * a).maxCoeff());
      return h;
    }
    case BodyKind::ellipsoid: {
      Vec w = K.Q.ldlt().solve(a);
      return K.ec.dot(a) + std::sqrt(std::max(0.0, a.dot(w)));
    }
  }
  throw Error(errc::invalid_body, "support: unknown body kind");
}

Vec support_point(const ConvexBody& K, const Vec& a) {
  switch (K.kind) {
    case BodyKind::vpolytope: {
      int idx = 0;
      (K.V.transpose() * a).maxCoeff(&idx);
      return K.V.col(idx);
    }
    case BodyKind::hpolytope: {
      if (K.has_V) {
        int idx = 0;
        (K.V.transpose() * a).maxCoeff(&idx);
        return K.V.col(idx);
      }
      LpResult r = solve_lp(a, K.A, K.b, /*maximize=*/true);
      if (r.status != LpStatus::optimal)
        throw Error(errc::unbounded_body, "support_point: no finite maximizer");
      return r.x;
    }
    case BodyKind::ballhull: {
      double na = a.norm();
      if (na <= 0) return K.center;
      double hb = K.center.dot(a) + K.radius * na;
      Vec best = K.center + (K.radius / na) * a;
      for (int j = 0; j < K.apexes.cols(); ++j) {
        double v = K.apexes.col(j).dot(a);
        if (v > hb) {
          hb = v;
          best = K.apexes.col(j);
        }
      }
      return best;
    }
    case BodyKind::ellipsoid: {
      Vec w = K.Q.ldlt().solve(a);
      double s = std::sqrt(std::max(1e-300, a.dot(w)));
      return K.ec + w / s;
    }
  }
  throw Error(errc::invalid_body, "support_point: unknown body kind");
}

// ---------------------------------------------------------------------------
// Gauge

namespace {

// maximize x·a over the polar of conv(Ball(c,r) ∪ apex columns), i.e. over
// {a : p_j·a <= 1, c·a + r|a| <= 1}, by a damped-Newton log-barrier on the
// halfspace terms and the second-order-cone term (1-c·a)^2 - r^2|a|^2 > 0.
// Duality-gap certificate: (m+2)/t at the final barrier parameter.
double ballhull_polar_max(const Vec& x, const Vec& c, double r, const Mat& P) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(P.cols());

  auto barrier = [&](const Vec& a, double t, double* val) -> bool {
    double phi = -t * x.dot(a);
    for (int j = 0; j < m; ++j) {
      double s = 1.0 - P.col(j).dot(a);
      if (s <= 0) return false;
      phi -= std::log(s);
    }
    double u = 1.0 - c.dot(a);
    double q = u * u - r * r * a.squaredNorm();
    if (u <= 0 || q <= 0) return false;
    phi -= std::log(q);
    *val = phi;
    return true;
  };

  Vec a = Vec::Zero(n);
  double t = 1.0;
  const double t_final = 1e13;
  while (true) {
    for (int it = 0; it < 80; ++it) {
      Vec g = -t * x;
      Mat H = Mat::Zero(n, n);
      for (int j = 0; j < m; ++j) {
        double s = 1.0 - P.col(j).dot(a);
        g += P.col(j) / s;
        H += (P.col(j) * P.col(j).transpose()) / (s * s);
      }
      double u = 1.0 - c.dot(a);
      double q = u * u - r * r * a.squaredNorm();
      Vec dq = -2.0 * u * c - 2.0 * r * r * a;
      g += -dq / q;
      H += (dq * dq.transpose()) / (q * q) + (2.0 * r * r * Mat::Identity(n, n) - 2.0 * c * c.transpose()) / q;

      Eigen::LLT<Mat> llt(H + 1e-13 * H.trace() * Mat::Identity(n, n));
      Vec step = -llt.solve(g);
      double decr = -g.dot(step);
      if (!(decr > 1e-13)) break;

      double f0 = 0.0;
      if (!barrier(a, t, &f0)) break;  // current iterate must be feasible
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        Vec cand = a + alpha * step;
        double f1;
        if (barrier(cand, t, &f1) && f1 <= f0 - 0.25 * alpha * decr) {
          a = cand;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      if (decr < 1e-12) break;
    }
    if (t >= t_final) break;
    t = std::min(t * 10.0, t_final);
  }
  return x.dot(a);
}

double gauge_ballhull(const ConvexBody& K, const Vec& x) {
  double nx = x.norm();
  if (nx <= 0) return 0.0;
  Vec xu = x / nx;
  return nx * ballhull_polar_max(xu, K.center, K.radius, K.apexes);
}

}  // namespace

bool origin_strictly_interior(const ConvexBody& K, double min_radius) {
  switch (K.kind) {
    case BodyKind::vpolytope: {
      if (K.has_H) return K.b.minCoeff() > min_radius;
      // margin LP: max d subject to V*lam = 0, sum lam = 1, lam_i >= d
      const int m = static_cast<int>(K.V.cols());
      LpProblem p;
      p.c = Vec::Zero(m + 1);
      p.c[m] = 1.0;
      p.maximize = true;
      p.A_ub = Mat::Zero(m, m + 1);
      for (int i = 0; i < m; ++i) {
        p.A_ub(i, i) = -1.0;
        p.A_ub(i, m) = 1.0;
      }
      p.b_ub = Vec::Zero(m);
      p.A_eq = Mat::Zero(K.n + 1, m + 1);
      p.A_eq.block(0, 0, K.n, m) = K.V;
      p.A_eq.row(K.n).head(m).setOnes();
      p.b_eq = Vec::Zero(K.n + 1);
      p.b_eq[K.n] = 1.0;
      LpResult r = solve_lp(p);
      return r.status == LpStatus::optimal && r.value > min_radius;
    }
    case BodyKind::hpolytope:
      return K.b.minCoeff() > min_radius;
    case BodyKind::ballhull: {
      if (K.center.norm() <= K.radius - min_radius) return true;
      // fall back to a sampled + refined minimum of the support function
      Rng rng(0x5eedULL);
      double best = 1e300;
      Vec best_dir;
      for (int i = 0; i < 512; ++i) {
        Vec a = rng.unit_vector(K.n);
        double h = support(K, a);
        if (h < best) {
          best = h;
          best_dir = a;
        }
      }
      auto f = [&](const Vec& v) {
        double nv = v.norm();
        if (nv < 1e-9) return 1e300;
        return support(K, v / nv);
      };
      NmResult nm = nelder_mead(f, best_dir, {400, 1e-12, 1e-14, 0.2});
      return std::min(best, nm.f) > min_radius;
    }
    case BodyKind::ellipsoid:
      return K.ec.dot(K.Q * K.ec) < 1.0 - min_radius;
  }
  return false;
}

double gauge(const ConvexBody& K, const Vec& x) {
  if (x.size() != K.n) throw Error(errc::wrong_dimension, dim_msg("gauge point", (int)x.size(), K.n));
  if (!origin_strictly_interior(K))
    throw Error(errc::origin_not_interior, "gauge: origin not strictly interior to the body");
  switch (K.kind) {
    case BodyKind::vpolytope: {
      if (K.has_H) {
        double g = 0.0;
        for (int i = 0; i < K.A.rows(); ++i) g = std::max(g, K.A.row(i).dot(x) / K.b[i]);
        return g;
      }
      // min sum(mu) s.t. V mu = x, mu >= 0
      const int m = static_cast<int>(K.V.cols());
      LpProblem p;
      p.c = Vec::Ones(m);
      p.A_ub = -Mat::Identity(m, m);
      p.b_ub = Vec::Zero(m);
      p.A_eq = K.V;
      p.b_eq = x;
      LpResult r = solve_lp(p);
      if (r.status != LpStatus::optimal)
        throw Error(errc::no_convergence, "gauge: representation LP failed");
      return r.value;
    }
    case BodyKind::hpolytope: {
      double g = 0.0;
      for (int i = 0; i < K.A.rows(); ++i) g = std::max(g, K.A.row(i).dot(x) / K.b[i]);
      return g;
    }
    case BodyKind::ballhull:
      return gauge_ballhull(K, x);
    case BodyKind::ellipsoid: {
      double al = K.ec.dot(K.Q * K.ec) - 1.0;  // < 0 when origin interior
      double be = -x.dot(K.Q * K.ec);
      double ga = x.dot(K.Q * x);
      double disc = be * be - al * ga;
      return (-be - std::sqrt(std::max(0.0, disc))) / al;
    }
  }
  throw Error(errc::invalid_body, "gauge: unknown body kind");
}

bool contains(const ConvexBody& K, const Vec& x, double tol_) {
  switch (K.kind) {
    case BodyKind::hpolytope:
      return ((K.A * x - K.b).array() <= tol_).all();
    case BodyKind::vpolytope: {
      const int m = static_cast<int>(K.V.cols());
      LpProblem p;
      p.c = Vec::Zero(m);
      p.A_ub = -Mat::Identity(m, m);
      p.b_ub = Vec::Constant(m, tol_);
      p.A_eq = Mat(K.n + 1, m);
      p.A_eq.topRows(K.n) = K.V;
      p.A_eq.row(K.n).setOnes();
      p.b_eq = Vec(K.n + 1);
      p.b_eq.head(K.n) = x;
      p.b_eq[K.n] = 1.0;
      return solve_lp(p).status == LpStatus::optimal;
    }
    case BodyKind::ballhull: {
      ConvexBody shifted = K;
      shifted.center = Vec::Zero(K.n);
      shifted.apexes = K.apexes.colwise() - K.center;
      return gauge_ballhull(shifted, x - K.center) <= 1.0 + tol_;
    }
    case BodyKind::ellipsoid:
      return (x - K.ec).dot(K.Q * (x - K.ec)) <= 1.0 + tol_;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Representation changes

std::pair<Vec, double> chebyshev_center(const Mat& A, const Vec& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  LpProblem p;
  p.c = Vec::Zero(n + 1);
  p.c[n] = 1.0;
  p.maximize = true;
  p.A_ub = Mat(m, n + 1);
  p.A_ub.leftCols(n) = A;
  for (int i = 0; i < m; ++i) p.A_ub(i, n) = A.row(i).norm();
  p.b_ub = b;
  LpResult r = solve_lp(p);
  if (r.status == LpStatus::unbounded)
    throw Error(errc::unbounded_body, "chebyshev_center: inscribed radius unbounded");
  if (r.status == LpStatus::infeasible)
    throw Error(errc::empty_interior, "chebyshev_center: empty polytope");
  return {r.x.head(n), r.value};
}

namespace {

std::pair<Mat, Vec> facets_2d(const Mat& V) {
  // Andrew monotone chain; edges of the CCW hull give the facets.
  const int m = static_cast<int>(V.cols());
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (V(0, a) != V(0, b)) return V(0, a) < V(0, b);
    return V(1, a) < V(1, b);
  });
  auto cross = [&](int o, int a, int b) {
    return (V(0, a) - V(0, o)) * (V(1, b) - V(1, o)) - (V(1, a) - V(1, o)) * (V(0, b) - V(0, o));
  };
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    size_t start = hull.size();
    auto it_begin = pass == 0 ? idx.begin() : idx.end() - 1;
    for (size_t k = 0; k < idx.size(); ++k) {
      int i = (pass == 0) ? idx[k] : idx[idx.size() - 1 - k];
      while (hull.size() >= start + 2 &&
             cross(hull[hull.size() - 2], hull[hull.size() - 1], i) <= 1e-14) {
        hull.pop_back();
      }
      hull.push_back(i);
    }
    hull.pop_back();
    (void)it_begin;
  }
  const int h = static_cast<int>(hull.size());
  if (h < 3) throw Error(errc::degenerate_input, "facet enumeration: degenerate planar hull");
  Mat A(h, 2);
  Vec b(h);
  for (int k = 0; k < h; ++k) {
    Vec p = V.col(hull[k]), q = V.col(hull[(k + 1) % h]);
    Vec d = q - p;
    Vec nrm(2);
    nrm << d[1], -d[0];  // outward for CCW orientation
    nrm.normalize();
    A.row(k) = nrm;
    b[k] = nrm.dot(p);
  }
  return {A, b};
}

}  // namespace

std::pair<Mat, Vec> facets_from_vertices(const Mat& V) {
  const int n = static_cast<int>(V.rows());
  const int m = static_cast<int>(V.cols());
  if (n == 1) {
    Mat A(2, 1);
    A << 1, -1;
    Vec b(2);
    b << V.row(0).maxCoeff(), -V.row(0).minCoeff();
    return {A, b};
  }
  if (n == 2) return facets_2d(V);
  if (n > 6) throw Error(errc::dimension_too_large, "facet enumeration: supported for n <= 6");
  if (binom_count(m, n) > 6e6)
    throw Error(errc::dimension_too_large, "facet enumeration: too many vertex subsets at desk scale");

  std::vector<Vec> normals;
  std::vector<double> offsets;
  auto add_facet = [&](const Vec& a, double off) {
    for (size_t i = 0; i < normals.size(); ++i) {
      if ((normals[i] - a).lpNorm<Eigen::Infinity>() <= 1e-9 && std::abs(offsets[i] - off) <= 1e-9) return;
    }
    normals.push_back(a);
    offsets.push_back(off);
  };

  for_each_subset(m, n, [&](const std::vector<int>& S) {
    Mat D(n, n - 1);
    for (int j = 1; j < n; ++j) D.col(j - 1) = V.col(S[j]) - V.col(S[0]);
    Eigen::ColPivHouseholderQR<Mat> qr(D);
    qr.setThreshold(1e-9);
    if (qr.rank() != n - 1) return true;  // affinely dependent subset
    Mat Qfull = qr.householderQ();
    Vec a = Qfull.col(n - 1);
    double off = a.dot(V.col(S[0]));
    double lo = 0, hi = 0;
    for (int j = 0; j < m; ++j) {
      double d = a.dot(V.col(j)) - off;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (hi <= 1e-9) add_facet(a, off);
    else if (lo >= -1e-9) add_facet(Vec(-a), -off);
    return true;
  });

  if (static_cast<int>(normals.size()) < n + 1)
    throw Error(errc::degenerate_input, "facet enumeration: not enough facets found");
  Mat A(static_cast<int>(normals.size()), n);
  Vec b(static_cast<int>(normals.size()));
  for (size_t i = 0; i < normals.size(); ++i) {
    A.row(static_cast<int>(i)) = normals[i];
    b[static_cast<int>(i)] = offsets[i];
  }
  return {A, b};
}

Mat vertices_from_facets(const Mat& A, const Vec& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (n > 6) throw Error(errc::dimension_too_large, "vertex enumeration: supported for n <= 6");
  if (m > 64) throw Error(errc::dimension_too_large, "vertex enumeration: supported for <= 64 facets");

  std::vector<Vec> pts;
  for_each_subset(m, n, [&](const std::vector<int>& S) {
    Mat As(n, n);
    Vec bs(n);
    for (int i = 0; i < n; ++i) {
      As.row(i) = A.row(S[i]);
      bs[i] = b[S[i]];
    }
    Eigen::PartialPivLU<Mat> lu(As);
    double det = std::abs(lu.determinant());
    if (det < 1e-10) return true;
    Vec x = lu.solve(bs);
    if (((A * x - b).array() <= 1e-8).all()) {
      for (const Vec& p : pts) {
        if ((p - x).lpNorm<Eigen::Infinity>() <= 1e-8) return true;
      }
      pts.push_back(x);
    }
    return true;
  });

  if (static_cast<int>(pts.size()) < n + 1)
    throw Error(errc::degenerate_input, "vertex enumeration: fewer than n+1 vertices");
  Mat V(n, static_cast<int>(pts.size()));
  for (size_t j = 0; j < pts.size(); ++j) V.col(static_cast<int>(j)) = pts[j];
  return V;
}

void ensure_hform(ConvexBody& K) {
  if (K.has_H) return;
  if (K.kind == BodyKind::vpolytope) {
    auto [A, b] = facets_from_vertices(K.V);
    K.A = A;
    K.b = b;
    K.has_H = true;
    return;
  }
  throw Error(errc::representation_unavailable, "ensure_hform: only polytopes carry halfspace forms");
}

void ensure_vform(ConvexBody& K) {
  if (K.has_V) return;
  if (K.kind == BodyKind::hpolytope) {
    K.V = vertices_from_facets(K.A, K.b);
    K.has_V = true;
    return;
  }
  throw Error(errc::representation_unavailable, "ensure_vform: only polytopes carry vertex forms");
}

// ---------------------------------------------------------------------------
// project / polar / apply

ConvexBody project(const ConvexBody& K, const Subspace& F) {
  if (F.ambient() != K.n)
    throw Error(errc::wrong_dimension, dim_msg("project subspace", F.ambient(), K.n));
  const Mat& U = F.basis;
  switch (K.kind) {
    case BodyKind::vpolytope:
      return make_vpolytope(U.transpose() * K.V);
    case BodyKind::hpolytope: {
      ConvexBody tmp = K;
      ensure_vform(tmp);
      return make_vpolytope(U.transpose() * tmp.V);
    }
    case BodyKind::ballhull:
      return make_ballhull(U.transpose() * K.center, K.radius, U.transpose() * K.apexes);
    case BodyKind::ellipsoid: {
      Mat Qi = K.Q.ldlt().solve(Mat::Identity(K.n, K.n));
      Mat Qp = (U.transpose() * Qi * U).ldlt().solve(Mat::Identity(F.dim(), F.dim()));
      return make_ellipsoid(U.transpose() * K.ec, Qp);
    }
  }
  throw Error(errc::invalid_body, "project: unknown body kind");
}

ConvexBody polar(const ConvexBody& K) {
  if (!origin_strictly_interior(K))
    throw Error(errc::origin_not_interior, "polar: origin must be strictly interior");
  switch (K.kind) {
    case BodyKind::vpolytope:
      return make_hpolytope(K.V.transpose(), Vec::Ones(K.V.cols()));
    case BodyKind::hpolytope: {
      Mat V(K.n, K.A.rows());
      for (int i = 0; i < K.A.rows(); ++i) V.col(i) = K.A.row(i).transpose() / K.b[i];
      return make_vpolytope(V);
    }
    case BodyKind::ellipsoid: {
      if (K.ec.norm() > 1e-12)
        throw Error(errc::representation_unavailable, "polar: only centered ellipsoids supported");
      return make_ellipsoid(Vec::Zero(K.n), K.Q.ldlt().solve(Mat::Identity(K.n, K.n)).eval());
    }
    default:
      throw Error(errc::representation_unavailable, "polar: not available for this representation");
  }
}

ConvexBody apply(const AffineMap& f, const ConvexBody& K) {
  if (f.L.rows() != K.n) throw Error(errc::wrong_dimension, dim_msg("affine map", (int)f.L.rows(), K.n));
  ConvexBody out;
  out.n = K.n;
  out.kind = K.kind;
  Mat Li = f.L.inverse();
  auto map_h = [&](const Mat& A, const Vec& b, Mat* Ao, Vec* bo) {
    Mat R = A * Li;  // rows a_i' = a_i L^{-1}
    Ao->resize(A.rows(), A.cols());
    bo->resize(b.size());
    for (int i = 0; i < A.rows(); ++i) {
      double nrm = R.row(i).norm();
      Ao->row(i) = R.row(i) / nrm;
      (*bo)[i] = (b[i] + R.row(i).dot(f.t)) / nrm;
    }
  };
  switch (K.kind) {
    case BodyKind::vpolytope:
      out.V = (f.L * K.V).colwise() + f.t;
      out.has_V = true;
      if (K.has_H) {
        map_h(K.A, K.b, &out.A, &out.b);
        out.has_H = true;
      }
      break;
    case BodyKind::hpolytope:
      map_h(K.A, K.b, &out.A, &out.b);
      out.has_H = true;
      if (K.has_V) {
        out.V = (f.L * K.V).colwise() + f.t;
        out.has_V = true;
      }
      break;
    case BodyKind::ballhull: {
      Mat G = f.L.transpose() * f.L;
      double alpha2 = G.trace() / K.n;
      if ((G - alpha2 * Mat::Identity(K.n, K.n)).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, alpha2))
        throw Error(errc::representation_unavailable,
                    "affine map: ball hulls support only similarity transforms");
      out.center = f.L * K.center + f.t;
      out.radius = K.radius * std::sqrt(alpha2);
      out.apexes = (f.L * K.apexes).colwise() + f.t;
      break;
    }
    case BodyKind::ellipsoid:
      out.ec = f.L * K.ec + f.t;
      out.Q = Li.transpose() * K.Q * Li;
      break;
  }
  // John certificates survive only under orthogonal maps fixing the origin.
  if (K.cert) {
    Mat G = f.L.transpose() * f.L;
    bool orth = (G - Mat::Identity(K.n, K.n)).cwiseAbs().maxCoeff() <= 1e-12 && f.t.norm() <= 1e-12;
    if (orth) {
      BodyCertificate c = *K.cert;
      if (c.contacts.size() > 0) c.contacts = f.L * c.contacts;
      if (c.asym_directions.size() > 0) c.asym_directions = f.L * c.asym_directions;
      if (c.kball) {
        c.kball->origin = f.L * c.kball->origin;
        c.kball->basis = f.L * c.kball->basis;
      }
      if (c.minkowski_center) c.minkowski_center = Vec(f.L * *c.minkowski_center);
      if (c.enclosing) c.enclosing = std::make_shared<const ConvexBody>(apply(f, *c.enclosing));
      out.cert = std::move(c);
    }
  }
  return out;
}

double unit_ball_volume(int k) {
  return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

}  // namespace geo
