#include "geo/ratios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "geo/asymmetry.hpp"
#include "geo/ellipsoid.hpp"
#include "geo/lp.hpp"
#include "geo/optim.hpp"
#include "geo/radii.hpp"
#include "geo/sampling.hpp"
#include "geo/scalars.hpp"

namespace geo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPenalty = 1e9;  // objective sentinel for infeasible maps

bool is_polytope(const ConvexBody& K) {
  return K.kind == BodyKind::vpolytope || K.kind == BodyKind::hpolytope;
}

int worker_count(int jobs) {
  int t = 0;
  if (const char* env = std::getenv("GEO_THREADS")) t = std::atoi(env);
  if (t < 1) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (t > 8) t = 8;
  return std::min(t, std::max(jobs, 1));
}

// ---------------------------------------------------------------------------
// Symmetral norm: gauge and support of (C - C)/2 in closed form, so diameter
// and width evaluations over thousands of difference vectors stay cheap.
// Euclidean when no gauge body is given; otherwise an H-form polytope or an
// ellipsoid whitener.

struct SymmetralNorm {
  enum class Kind { euclid, poly, ellip } kind = Kind::euclid;
  Mat U;     // poly: unit facet normals of the symmetral
  Vec cofs;  // poly: facet offsets, all positive
  Mat pts;   // poly: vertex columns of the symmetral
  Mat W;     // ellip: SPD whitener, gauge(z) = |W z|
  Mat Winv;  // ellip: support(a) = |W^{-1} a|

  double gauge(const Vec& z) const {
    switch (kind) {
      case Kind::euclid: return z.norm();
      case Kind::ellip: return (W * z).norm();
      case Kind::poly: {
        double g = 0.0;
        for (int i = 0; i < U.rows(); ++i) g = std::max(g, U.row(i).dot(z) / cofs[i]);
        return g;
      }
    }
    return 0.0;
  }

  double support(const Vec& a) const {
    switch (kind) {
      case Kind::euclid: return a.norm();
      case Kind::ellip: return (Winv * a).norm();
      case Kind::poly: return (a.transpose() * pts).maxCoeff();
    }
    return 0.0;
  }
};

Mat pairwise_differences(const Mat& V) {
  const int n = static_cast<int>(V.rows());
  const int m = static_cast<int>(V.cols());
  Mat D(n, m * (m - 1));
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) D.col(k++) = V.col(i) - V.col(j);
  return D;
}

SymmetralNorm make_symmetral(const std::optional<ConvexBody>& C) {
  SymmetralNorm s;
  if (!C) return s;
  if (C->kind == BodyKind::ellipsoid) {
    s.kind = SymmetralNorm::Kind::ellip;
    s.W = sqrtm_spd(C->Q);
    s.Winv = s.W.inverse();
    return s;
  }
  if (!is_polytope(*C))
    throw Error(errc::representation_unavailable,
                "radial functionals need a polytope or an ellipsoid gauge body");
  ConvexBody cc = *C;
  ensure_vform(cc);
  ConvexBody sym = make_vpolytope(Mat(0.5 * pairwise_differences(cc.V)));
  ensure_hform(sym);
  s.kind = SymmetralNorm::Kind::poly;
  s.U = sym.A;
  s.cofs = sym.b;
  s.pts = sym.V;
  return s;
}

// Support of the original (unsymmetrized) gauge body; the Euclidean norm when
// no gauge is set.
double gauge_support(const std::optional<ConvexBody>& C, const Vec& a) {
  return C ? support(*C, a) : a.norm();
}

// ---------------------------------------------------------------------------
// LP kernels for the translative inradius and circumradius.

// Largest rho with rho C + t inside {rows x <= offs}; fills the found t.
double inradius_lp(const Mat& rows, const Vec& offs, const std::optional<ConvexBody>& C,
                   Vec* center) {
  const int m = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  Mat A(m, n + 1);
  for (int j = 0; j < m; ++j) {
    A.row(j).head(n) = rows.row(j);
    A(j, n) = gauge_support(C, rows.row(j).transpose());
  }
  Vec cobj = Vec::Zero(n + 1);
  cobj[n] = 1.0;
  LpResult res = solve_lp(cobj, A, offs, /*maximize=*/true);
  if (res.status != LpStatus::optimal) return -1.0;
  if (center) *center = res.x.head(n);
  return res.x[n];
}

// Smallest rho with the point columns inside rho {Urows x <= cofs} + t.
double circumradius_lp(const Mat& points, const Mat& Urows, const Vec& cofs, Vec* shift) {
  const int mc = static_cast<int>(Urows.rows());
  const int n = static_cast<int>(Urows.cols());
  Mat A(mc, n + 1);
  Vec b(mc);
  for (int k = 0; k < mc; ++k) {
    double h = (Urows.row(k) * points).maxCoeff();
    A.row(k).head(n) = -Urows.row(k);
    A(k, n) = -cofs[k];
    b[k] = -h;
  }
  Vec cobj = Vec::Zero(n + 1);
  cobj[n] = 1.0;
  LpResult res = solve_lp(cobj, A, b, /*maximize=*/false);
  if (res.status != LpStatus::optimal) return -1.0;
  if (shift) *shift = res.x.head(n);
  return res.x[n];
}

// H-form of f(K) from the H-form of K; rows come back unit length.
void transform_hform(const Mat& A0, const Vec& b0, const AffineMap& f, Mat* A, Vec* b) {
  Mat R = A0 * f.L.inverse();
  A->resize(A0.rows(), A0.cols());
  b->resize(b0.size());
  for (int i = 0; i < R.rows(); ++i) {
    double nrm = R.row(i).norm();
    A->row(i) = R.row(i) / nrm;
    (*b)[i] = (b0[i] + R.row(i).dot(f.t)) / nrm;
  }
}

// ---------------------------------------------------------------------------
// Width evaluation. The support-function ratio h_{K-K}(a)/h_sym(a) is
// piecewise monotone between rays of the merged normal fans, so in the plane
// its minimum sits on a facet normal of the difference hull or of the
// symmetral and the sweep is exact. Higher dimensions sample and refine.

struct WidthResult {
  double value = 0.0;
  double grid_value = 0.0;  // pre-refinement minimum (== value when exact)
  Vec direction;
  bool exact = false;
};

double support_of_columns(const Mat& pts, const Vec& a) {
  return (a.transpose() * pts).maxCoeff();
}

// Local minimization of f over unit directions, charted around a0.
Vec refine_direction(const std::function<double(const Vec&)>& f, const Vec& a0, double* best) {
  const int n = static_cast<int>(a0.size());
  Mat Perp = orthonormal_completion(Mat(a0)).rightCols(n - 1);
  auto chart = [&](const Vec& y) {
    Vec a = a0 + Perp * y;
    double nrm = a.norm();
    if (nrm < 1e-12) return kPenalty;
    return f(Vec(a / nrm));
  };
  NmOptions opt;
  opt.max_iter = 600;
  opt.xtol = 1e-12;
  opt.ftol = 1e-14;
  opt.step = 0.15;
  NmResult r = nelder_mead(chart, Vec::Zero(n - 1), opt);
  Vec a = a0 + Perp * r.x;
  a /= a.norm();
  *best = r.f;
  return a;
}

WidthResult width_exact_2d(const Mat& diffs, const SymmetralNorm& sym) {
  // The ellipsoid symmetral whitens to the Euclidean case exactly.
  Mat eff = (sym.kind == SymmetralNorm::Kind::ellip) ? Mat(sym.W * diffs) : diffs;
  ConvexBody hull = make_vpolytope(eff);
  ensure_hform(hull);

  WidthResult out;
  out.exact = true;
  if (sym.kind != SymmetralNorm::Kind::poly) {
    int best = 0;
    hull.b.minCoeff(&best);
    out.value = out.grid_value = hull.b[best];
    Vec a = hull.A.row(best).transpose();
    if (sym.kind == SymmetralNorm::Kind::ellip) a = (sym.W * a).normalized();
    out.direction = a;
    return out;
  }
  double best = kInf;
  Vec bestdir;
  auto consider = [&](const Vec& a) {
    double val = support_of_columns(diffs, a) / sym.support(a);
    if (val < best) {
      best = val;
      bestdir = a;
    }
  };
  for (int i = 0; i < hull.A.rows(); ++i) consider(hull.A.row(i).transpose());
  for (int i = 0; i < sym.U.rows(); ++i) consider(sym.U.row(i).transpose());
  out.value = out.grid_value = best;
  out.direction = bestdir;
  return out;
}

WidthResult width_sampled(const Mat& diffs, const SymmetralNorm& sym, int n) {
  auto ratio = [&](const Vec& a) { return support_of_columns(diffs, a) / sym.support(a); };

  Mat grid;
  if (n == 3) {
    grid = icosphere(5);  // 10242 directions
  } else {
    Rng rng(0x77d7a1ULL + 131ULL * static_cast<std::uint64_t>(n));
    Mat rnd = random_directions(n, 10000, rng);
    grid.resize(n, rnd.cols() + 2 * n);
    grid.leftCols(rnd.cols()) = rnd;
    for (int i = 0; i < n; ++i) {
      grid.col(rnd.cols() + 2 * i) = Vec::Unit(n, i);
      grid.col(rnd.cols() + 2 * i + 1) = -Vec::Unit(n, i);
    }
  }

  Vec vals(grid.cols());
  for (int j = 0; j < grid.cols(); ++j) vals[j] = ratio(grid.col(j));

  // Refine from a handful of angularly separated leaders.
  std::vector<int> order(static_cast<size_t>(grid.cols()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  std::vector<int> starts;
  for (int idx : order) {
    bool close = false;
    for (int s : starts)
      if (std::abs(grid.col(idx).dot(grid.col(s))) > 0.98) close = true;
    if (!close) starts.push_back(idx);
    if (starts.size() >= 6) break;
  }

  WidthResult out;
  out.grid_value = vals[order[0]];
  out.value = kInf;
  for (int s : starts) {
    double f = 0.0;
    Vec a = refine_direction(ratio, grid.col(s), &f);
    if (f < out.value) {
      out.value = f;
      out.direction = a;
    }
  }
  if (out.grid_value < out.value) {  // refinement must not lose the grid winner
    out.value = out.grid_value;
    out.direction = grid.col(order[0]);
  }
  out.exact = false;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// radial_profile

RadialProfile radial_profile(const ConvexBody& K, const std::optional<ConvexBody>& C) {
  if (C && C->n != K.n)
    throw Error(errc::wrong_dimension, "radial_profile: gauge body dimension mismatch");
  RadialProfile P;
  P.gauge_body = C;

  if (K.kind == BodyKind::ellipsoid) {
    if (C)
      throw Error(errc::representation_unavailable,
                  "radial_profile: ellipsoid bodies carry only the Euclidean profile");
    Eigen::SelfAdjointEigenSolver<Mat> es(K.Q);
    const Vec& ev = es.eigenvalues();
    int imin = 0, imax = 0;
    ev.minCoeff(&imin);  // smallest eigenvalue of Q = longest semiaxis
    ev.maxCoeff(&imax);
    P.R = 1.0 / std::sqrt(ev[imin]);
    P.r = 1.0 / std::sqrt(ev[imax]);
    P.D = 2.0 * P.R;
    P.w = 2.0 * P.r;
    P.circumcenter = K.ec;
    P.incenter = K.ec;
    Vec ulong = es.eigenvectors().col(imin);
    P.diameter_a = K.ec + P.R * ulong;
    P.diameter_b = K.ec - P.R * ulong;
    P.width_direction = es.eigenvectors().col(imax);
    P.w_lower = P.w_upper = P.w;
    P.w_exact = true;
    return P;
  }
  if (!is_polytope(K))
    throw Error(errc::representation_unavailable,
                "radial_profile: the body must be a polytope or an ellipsoid");

  ConvexBody KP = K;
  ensure_vform(KP);
  ensure_hform(KP);
  const int n = K.n;
  SymmetralNorm sym = make_symmetral(C);

  // Circumradius.
  if (!C) {
    MinBall mb = min_enclosing_ball(KP.V);
    P.R = mb.radius;
    P.circumcenter = mb.center;
  } else if (is_polytope(*C)) {
    ConvexBody CC = *C;
    ensure_hform(CC);
    Vec t;
    P.R = circumradius_lp(KP.V, CC.A, CC.b, &t);
    if (P.R < 0) throw Error(errc::no_convergence, "radial_profile: circumradius LP failed");
    P.circumcenter = t;
  } else {
    // K ⊂ rho C + t whitens to a minimum enclosing ball; the center maps
    // back through rho C + t = {x : |W(x - t - rho ec)| <= rho}.
    MinBall mb = min_enclosing_ball(Mat(sym.W * KP.V));
    P.R = mb.radius;
    P.circumcenter = sym.Winv * mb.center - P.R * C->ec;
  }

  // Inradius.
  {
    Vec c;
    P.r = inradius_lp(KP.A, KP.b, C, &c);
    if (P.r < 0) throw Error(errc::no_convergence, "radial_profile: inradius LP failed");
    P.incenter = c;
  }

  // Diameter over vertex pairs.
  {
    double best = -1.0;
    for (int i = 0; i < KP.V.cols(); ++i)
      for (int j = i + 1; j < KP.V.cols(); ++j) {
        double val = sym.gauge(Vec(KP.V.col(i) - KP.V.col(j)));
        if (val > best) {
          best = val;
          P.diameter_a = KP.V.col(i);
          P.diameter_b = KP.V.col(j);
        }
      }
    P.D = best;
  }

  // Width.
  Mat diffs = pairwise_differences(KP.V);
  WidthResult wr = (n == 2) ? width_exact_2d(diffs, sym) : width_sampled(diffs, sym, n);
  P.w = wr.value;
  P.w_lower = wr.value;
  P.w_upper = wr.exact ? wr.value : wr.grid_value;
  P.w_exact = wr.exact;
  P.width_direction = wr.direction;
  return P;
}

// ---------------------------------------------------------------------------
// Multistart affine search machinery. The linear part is upper triangular
// with a positive diagonal; an oriented gauge adds rotation angles and
// mirrored restarts, because rotating the image is only redundant when the
// objective is rotation invariant.

namespace {

struct ParamShape {
  int n = 0;
  bool with_rotation = false;
  int count() const { return n * (n + 1) / 2 + n + (with_rotation ? n * (n - 1) / 2 : 0); }
};

Mat rotation_from_angles(int n, const Vec& ang) {
  Mat R = Mat::Identity(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++idx) {
      double cth = std::cos(ang[idx]), sth = std::sin(ang[idx]);
      Mat G = Mat::Identity(n, n);
      G(i, i) = cth;
      G(j, j) = cth;
      G(i, j) = -sth;
      G(j, i) = sth;
      R *= G;
    }
  return R;
}

AffineMap map_from_params(const ParamShape& shape, const Vec& p, bool flip) {
  const int n = shape.n;
  Mat L = Mat::Zero(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i) L(i, i) = std::exp(std::clamp(p[idx++], -6.0, 6.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) L(i, j) = p[idx++];
  Vec t = p.segment(idx, n);
  idx += n;
  if (shape.with_rotation) L *= rotation_from_angles(n, Vec(p.segment(idx, n * (n - 1) / 2)));
  if (flip) L.col(0) *= -1.0;  // right-multiplied mirror covers det < 0
  return make_affine(L, t);
}

struct MultistartBest {
  Vec p;
  bool flipped = false;
  double f = kInf;
  int index = 0;
  int total_iters = 0;
  double start_f = 0.0;  // objective at the unperturbed John start
};

MultistartBest run_multistart(const ParamShape& shape, bool allow_flip, int restarts,
                              std::uint64_t seed,
                              const std::function<double(const Vec&, bool)>& obj,
                              const NmOptions& opt) {
  const int dim = shape.count();
  Rng root(seed ? seed : 1);

  struct Run {
    Vec x;
    double f = kInf;
    int iters = 0;
    bool flip = false;
  };
  std::vector<Run> runs(static_cast<size_t>(restarts));

  auto start_for = [&](int i) {
    Run r;
    r.flip = allow_flip && (i % 2 == 1);
    if (i <= (allow_flip ? 1 : 0)) {
      r.x = Vec::Zero(dim);  // the John start, once per orientation
      return r;
    }
    Rng ri(root.derive(static_cast<std::uint64_t>(i)));
    Vec p(dim);
    int idx = 0;
    for (int k = 0; k < shape.n; ++k) p[idx++] = 0.30 * ri.normal();
    for (int k = 0; k < shape.n * (shape.n - 1) / 2; ++k) p[idx++] = 0.30 * ri.normal();
    for (int k = 0; k < shape.n; ++k) p[idx++] = 0.25 * ri.normal();
    if (shape.with_rotation)
      for (int k = 0; k < shape.n * (shape.n - 1) / 2; ++k) p[idx++] = ri.uniform(-M_PI, M_PI);
    r.x = p;
    return r;
  };

  const int tnum = worker_count(restarts);
  auto work = [&](int tid) {
    for (int i = tid; i < restarts; i += tnum) {
      Run r = start_for(i);
      NmResult nm =
          nelder_mead([&, flip = r.flip](const Vec& x) { return obj(x, flip); }, r.x, opt);
      runs[i].x = nm.x;
      runs[i].f = nm.f;
      runs[i].iters = nm.iters;
      runs[i].flip = r.flip;
    }
  };
  if (tnum == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(tnum));
    for (int t = 0; t < tnum; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  // Index-ordered scan keeps the winner independent of the thread count.
  MultistartBest best;
  best.start_f = obj(Vec::Zero(dim), false);
  for (int i = 0; i < restarts; ++i) {
    best.total_iters += runs[i].iters;
    if (runs[i].f < best.f) {
      best.f = runs[i].f;
      best.p = runs[i].x;
      best.flipped = runs[i].flip;
      best.index = i;
    }
  }
  return best;
}

// Shared search precomputation: the body in John position, both forms, and
// its vertex differences.
struct SearchBody {
  ConvexBody K0;
  AffineMap base;
  Mat diffs;
};

SearchBody john_search_body(const ConvexBody& K, const char* what) {
  if (!is_polytope(K))
    throw Error(errc::representation_unavailable,
                std::string(what) + ": the body must be a polytope");
  NormalizedBody nb = normalize_john(K);
  SearchBody sb;
  sb.K0 = std::move(nb.body);
  sb.base = nb.map;
  ensure_vform(sb.K0);
  ensure_hform(sb.K0);
  sb.diffs = pairwise_differences(sb.K0.V);
  return sb;
}

}  // namespace

// ---------------------------------------------------------------------------
// minimize_Dr_affine

AffineSearchResult minimize_Dr_affine(const ConvexBody& K, const std::optional<ConvexBody>& C,
                                      std::uint64_t seed, int restarts) {
  const int n = K.n;
  if (n > 4) throw Error(errc::dimension_too_large, "minimize_Dr_affine: dimension at most 4");
  if (restarts < 1)
    throw Error(errc::parameter_out_of_range, "minimize_Dr_affine: need at least one restart");
  if (C && C->n != n)
    throw Error(errc::wrong_dimension, "minimize_Dr_affine: gauge body dimension mismatch");
  if (C && !is_polytope(*C) && C->kind != BodyKind::ellipsoid)
    throw Error(errc::representation_unavailable,
                "minimize_Dr_affine: gauge body must be a polytope or an ellipsoid");

  SearchBody sb = john_search_body(K, "minimize_Dr_affine");
  SymmetralNorm sym = make_symmetral(C);
  const Mat A0 = sb.K0.A;
  const Vec b0 = sb.K0.b;
  const Mat diffs = sb.diffs;
  const std::optional<ConvexBody>& gauge = C;

  ParamShape shape{n, C.has_value()};
  auto obj = [&](const Vec& p, bool flip) {
    try {
      AffineMap f = map_from_params(shape, p, flip);
      Mat G = A0 * f.L.inverse();
      Vec offs = b0 + G * f.t;
      double r = inradius_lp(G, offs, gauge, nullptr);
      if (r <= 1e-12) return kPenalty;
      Mat T = f.L * diffs;
      double D = 0.0;
      for (int j = 0; j < T.cols(); ++j) D = std::max(D, sym.gauge(T.col(j)));
      return D / (2.0 * r);
    } catch (const Error&) {
      return kPenalty;
    }
  };

  NmOptions opt;
  opt.max_iter = 1400;
  opt.xtol = 1e-11;
  opt.ftol = 1e-13;
  opt.step = 0.2;
  MultistartBest best =
      run_multistart(shape, /*allow_flip=*/C.has_value(), restarts, seed, obj, opt);

  AffineSearchResult res;
  res.best_map = compose(map_from_params(shape, best.p, best.flipped), sb.base);
  res.best_ratio = best.f;
  res.iterations = best.total_iters;
  res.method = best.index == 0 ? "john-start" : "multistart-local";
  res.john_start_ratio = best.start_f;

  double sK = minkowski_asymmetry(K).value;
  if (!C) {
    // Asymmetry of the John-position body about the origin; computed from the
    // facet ratios directly so a normalization a hair off position still
    // yields the bound instead of a position-check failure.
    double sJ = 1.0;
    for (int i = 0; i < A0.rows(); ++i)
      sJ = std::max(sJ, support(sb.K0, Vec(-A0.row(i).transpose())) / b0[i]);
    res.lower_bound = std::max(sK * std::sqrt((n + 1.0) / (2.0 * n)), (sK + 1.0) / 2.0);
    res.upper_bound = (n == 2) ? planar_diameter_bound(sJ) / 2.0 : std::sqrt(n * (sJ + 1.0) / 2.0);
  } else {
    double sC = minkowski_asymmetry(*C).value;
    res.lower_bound = (sK + 1.0) / (sC + 1.0) * std::max(sC / sK, 1.0);
    res.upper_bound = static_cast<double>(n);
  }
  res.within_bounds =
      res.best_ratio >= res.lower_bound - 1e-6 && res.best_ratio <= res.upper_bound + 1e-6;
  return res;
}

// ---------------------------------------------------------------------------
// maximize_wR_affine

AffineSearchResult maximize_wR_affine(const ConvexBody& K, std::uint64_t seed, int restarts) {
  const int n = K.n;
  if (n > 3)
    throw Error(errc::dimension_too_large,
                "maximize_wR_affine: exact polytope width backs the search only up to dimension 3");
  if (restarts < 1)
    throw Error(errc::parameter_out_of_range, "maximize_wR_affine: need at least one restart");

  SearchBody sb = john_search_body(K, "maximize_wR_affine");
  ConvexBody dh = make_vpolytope(sb.diffs);
  ensure_hform(dh);
  const Mat F = dh.A;   // unit facet normals of the difference hull
  const Vec hF = dh.b;  // their support values
  const Mat V0 = sb.K0.V;

  // Normal fans transform by the inverse transpose, so the width of the image
  // is the exact minimum over the precomputed facet normals.
  ParamShape shape{n, false};
  auto obj = [&](const Vec& p, bool) {
    try {
      AffineMap f = map_from_params(shape, p, false);
      Mat G = F * f.L.inverse();
      double w = kInf;
      for (int l = 0; l < G.rows(); ++l) w = std::min(w, hF[l] / G.row(l).norm());
      if (w <= 1e-12) return kPenalty;
      MinBall mb = min_enclosing_ball(Mat(f.L * V0));
      return 2.0 * mb.radius / w;  // reciprocal objective, minimized
    } catch (const Error&) {
      return kPenalty;
    }
  };

  NmOptions opt;
  opt.max_iter = 1400;
  opt.xtol = 1e-11;
  opt.ftol = 1e-13;
  opt.step = 0.2;
  MultistartBest best = run_multistart(shape, /*allow_flip=*/false, restarts, seed, obj, opt);

  AffineSearchResult res;
  res.best_map = compose(map_from_params(shape, best.p, false), sb.base);
  res.best_ratio = 1.0 / best.f;
  res.iterations = best.total_iters;
  res.method = best.index == 0 ? "john-start" : "multistart-local";
  res.john_start_ratio = 1.0 / best.start_f;

  double s = minkowski_asymmetry(K).value;
  res.lower_bound = 1.0 / std::sqrt(static_cast<double>(n));
  double sandwich = (n % 2 == 1) ? std::sqrt(static_cast<double>(n)) / s
                                 : (n + 1.0) / (s * std::sqrt(n + 2.0));
  res.upper_bound = std::min(sandwich, (s + 1.0) / (2.0 * s));
  res.within_bounds =
      res.best_ratio >= res.lower_bound - 1e-6 && res.best_ratio <= res.upper_bound + 1e-6;
  return res;
}

// ---------------------------------------------------------------------------
// grunbaum_upper_bound

GrunbaumBound grunbaum_upper_bound(const ConvexBody& K, const ConvexBody& C, std::uint64_t seed,
                                   int restarts) {
  const int n = K.n;
  if (n > 3) throw Error(errc::dimension_too_large, "grunbaum_upper_bound: dimension at most 3");
  if (C.n != n) throw Error(errc::wrong_dimension, "grunbaum_upper_bound: dimension mismatch");
  if (!is_polytope(K))
    throw Error(errc::representation_unavailable,
                "grunbaum_upper_bound: the body must be a polytope");
  const bool cpoly = is_polytope(C);
  if (!cpoly && C.kind != BodyKind::ellipsoid)
    throw Error(errc::representation_unavailable,
                "grunbaum_upper_bound: the gauge body must be a polytope or an ellipsoid");
  if (restarts < 1)
    throw Error(errc::parameter_out_of_range, "grunbaum_upper_bound: need at least one restart");

  // Stage one: bring K into a D/r-optimal position relative to C.
  AffineSearchResult dr = minimize_Dr_affine(K, C, seed, restarts);
  ConvexBody KP = K;
  ensure_vform(KP);
  ensure_hform(KP);
  const std::optional<ConvexBody> gauge = C;

  ConvexBody CH = C;  // H-form (polytope gauge)
  Mat WC, WCinv;      // whitener (ellipsoid gauge)
  if (cpoly) {
    ensure_hform(CH);
  } else {
    WC = sqrtm_spd(C.Q);
    WCinv = WC.inverse();
  }

  // Smallest rho with pts ⊂ rho(sign C) + t, and the t attaining it.
  auto circum_pm = [&](const Mat& pts, bool mirrored, Vec* shift) {
    if (cpoly) {
      Mat U = mirrored ? Mat(-CH.A) : CH.A;
      return circumradius_lp(pts, U, CH.b, shift);
    }
    Vec sec = mirrored ? Vec(-C.ec) : C.ec;
    MinBall mb = min_enclosing_ball(Mat(WC * pts));
    if (shift) *shift = WCinv * mb.center - mb.radius * sec;
    return mb.radius;
  };

  // Stage two: refine on the sandwich objective itself.
  ParamShape shape{n, true};
  auto eval = [&](const AffineMap& A, double* r_out, Vec* incenter, double* rp, double* rm,
                  Vec* tp, Vec* tm) {
    Mat rows;
    Vec offs;
    transform_hform(KP.A, KP.b, A, &rows, &offs);
    double r = inradius_lp(rows, offs, gauge, incenter);
    if (r <= 1e-12) return kPenalty;
    Mat AV = (A.L * KP.V).colwise() + A.t;
    double Rp = circum_pm(AV, false, tp);
    double Rm = circum_pm(AV, true, tm);
    if (Rp < 0 || Rm < 0) return kPenalty;
    if (r_out) *r_out = r;
    if (rp) *rp = Rp;
    if (rm) *rm = Rm;
    return std::min(Rp, Rm) / r;
  };
  auto obj = [&](const Vec& p, bool flip) {
    try {
      AffineMap A = compose(map_from_params(shape, p, flip), dr.best_map);
      return eval(A, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr);
    } catch (const Error&) {
      return kPenalty;
    }
  };

  NmOptions opt;
  opt.max_iter = 900;
  opt.xtol = 1e-11;
  opt.ftol = 1e-13;
  opt.step = 0.15;
  MultistartBest best =
      run_multistart(shape, /*allow_flip=*/true, restarts, seed ^ 0x9e37ULL, obj, opt);

  AffineMap Abest = compose(map_from_params(shape, best.p, best.flipped), dr.best_map);
  double r = 0, Rp = 0, Rm = 0;
  Vec incenter, tp, tm;
  if (eval(Abest, &r, &incenter, &Rp, &Rm, &tp, &tm) >= kPenalty)
    throw Error(errc::no_convergence, "grunbaum_upper_bound: sandwich refinement failed");

  GrunbaumBound out;
  out.mirrored = Rm < Rp;
  const double Rbest = out.mirrored ? Rm : Rp;
  const Vec tout = out.mirrored ? tm : tp;
  out.rho = Rbest / r;
  out.witness = make_affine(Mat(Abest.L / r), Vec((Abest.t - incenter) / r));
  out.outer_shift = (tout - incenter) / r;

  // Certify both inclusions by replaying them facet by facet on the witness.
  Mat rowsW;
  Vec offsW;
  transform_hform(KP.A, KP.b, out.witness, &rowsW, &offsW);
  double inner = -kInf;
  for (int j = 0; j < rowsW.rows(); ++j)
    inner = std::max(inner, support(C, Vec(rowsW.row(j).transpose())) - offsW[j]);
  out.inner_slack = inner;

  Mat WV = (out.witness.L * KP.V).colwise() + out.witness.t;
  const double sgn = out.mirrored ? -1.0 : 1.0;
  double outer = -kInf;
  if (cpoly) {
    for (int k = 0; k < CH.A.rows(); ++k) {
      Vec u = sgn * CH.A.row(k).transpose();
      double h = (u.transpose() * WV).maxCoeff();
      outer = std::max(outer, h - out.rho * CH.b[k] - u.dot(out.outer_shift));
    }
  } else {
    for (int j = 0; j < WV.cols(); ++j) {
      Vec z = sgn * (WV.col(j) - out.outer_shift) - out.rho * C.ec;
      outer = std::max(outer, (WC * z).norm() - out.rho);
    }
  }
  out.outer_slack = outer;
  out.certified = out.inner_slack <= 1e-9 && out.outer_slack <= 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// shear_inflation_map

AffineMap shear_inflation_map(const Subspace& U, const Vec& c, double alpha, double mu) {
  const int n = U.ambient();
  const int k = U.dim();
  if (c.size() != n)
    throw Error(errc::wrong_dimension, "shear_inflation_map: offset dimension mismatch");
  if (k < 1 || k >= n)
    throw Error(errc::parameter_out_of_range,
                "shear_inflation_map: the subspace must be proper (1 <= dim < n)");
  if ((U.basis.transpose() * U.basis - Mat::Identity(k, k)).cwiseAbs().maxCoeff() >
      tol::orthonormal)
    throw Error(errc::degenerate_input, "shear_inflation_map: subspace basis is not orthonormal");
  if (!(alpha > 1.0))
    throw Error(errc::parameter_out_of_range,
                "shear_inflation_map: inflation factor must exceed 1");
  if (!(mu > 1.0))
    throw Error(errc::parameter_out_of_range, "shear_inflation_map: disc scale must exceed 1");
  if ((U.basis.transpose() * c).norm() > 1e-9)
    throw Error(errc::parameter_out_of_range,
                "shear_inflation_map: offset must lie in the orthogonal complement");

  const Mat P = U.basis * U.basis.transpose();
  const Mat I = Mat::Identity(n, n);
  AffineMap A = make_affine(Mat(P + alpha * (I - P)), Vec((1.0 - alpha) * c));

  // Verification against the hypothesis body conv((mu (B ∩ U) + c) ∪ B).
  // Its support function is explicit, so the unit ball lies inside the image
  // exactly when m(a) = h_image(a) - 1 >= 0 for every unit direction a, and
  // a direction with m(a) = 0 pins the common boundary point x = a (the
  // supporting hyperplane meets the ball only at a).
  auto m_of = [&](const Vec& a) {
    Vec v = A.L.transpose() * a;
    double hbody = std::max(mu * (P * v).norm() + c.dot(v), v.norm());
    return hbody + a.dot(A.t) - 1.0;
  };

  Mat dirs;
  if (n == 2) {
    dirs = circle_grid(720);
  } else if (n == 3) {
    dirs = icosphere(3);  // 642 directions
  } else {
    Rng rng(0x5eaf1a7eULL + static_cast<std::uint64_t>(n));
    Mat rnd = random_directions(n, 1500, rng);
    dirs.resize(n, rnd.cols() + 2 * n);
    dirs.leftCols(rnd.cols()) = rnd;
    for (int i = 0; i < n; ++i) {
      dirs.col(rnd.cols() + 2 * i) = Vec::Unit(n, i);
      dirs.col(rnd.cols() + 2 * i + 1) = -Vec::Unit(n, i);
    }
  }

  Vec vals(dirs.cols());
  for (int j = 0; j < dirs.cols(); ++j) vals[j] = m_of(dirs.col(j));

  // Near-contact must be resolved against the alpha-dependent inward motion
  // of the non-contact boundary, so the detection band follows alpha.
  const double band = std::clamp((alpha - 1.0) * 1e-3, 1e-12, 1e-9);

  auto check_direction = [&](const Vec& a, double m) {
    if (m < -1e-9)
      throw Error(errc::domain_error,
                  "shear_inflation_map: inflated image fails to cover the unit ball");
    if (m <= band && c.dot(a) <= 0.0)
      throw Error(errc::domain_error,
                  "shear_inflation_map: a shared boundary point violates the offset halfspace");
  };

  for (int j = 0; j < dirs.cols(); ++j) check_direction(dirs.col(j), vals[j]);

  // Descend from angularly separated leaders to catch tangency between
  // sample points.
  std::vector<int> order(static_cast<size_t>(dirs.cols()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  std::vector<int> starts;
  for (int idx : order) {
    bool close = false;
    for (int s : starts)
      if (dirs.col(idx).dot(dirs.col(s)) > 0.95) close = true;
    if (!close) starts.push_back(idx);
    if (starts.size() >= 8) break;
  }
  for (int s : starts) {
    double m = 0.0;
    Vec a = refine_direction(m_of, dirs.col(s), &m);
    check_direction(a, m);
  }
  return A;
}

}  // namespace geo
