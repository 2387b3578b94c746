#include "geo/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "geo/nnls.hpp"
#include "geo/optim.hpp"
#include "geo/sampling.hpp"

namespace geo {

// ---------------------------------------------------------------------------
// Sphere-constrained quadratic maximization (secular equation in eigenbasis)

SphereQuadMax max_quadratic_on_sphere(const Mat& B, const Vec& g) {
  const int n = static_cast<int>(B.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (B + B.transpose()));
  Vec lam = es.eigenvalues();  // ascending
  Mat V = es.eigenvectors();
  Vec gt = V.transpose() * g;
  const double lmax = lam[n - 1];
  const double scale = std::max({1.0, std::abs(lmax), gt.cwiseAbs().maxCoeff()});
  const double top_tol = 1e-12 * scale;

  double gtop2 = 0.0, W2 = 0.0;
  for (int i = 0; i < n; ++i) {
    if (lmax - lam[i] <= top_tol) gtop2 += gt[i] * gt[i];
    else W2 += (gt[i] / (lmax - lam[i])) * (gt[i] / (lmax - lam[i]));
  }

  Vec u = Vec::Zero(n);
  if (gtop2 <= 1e-30 * scale * scale && W2 <= 1.0) {
    // hard case: place the remaining mass in the top eigenspace
    for (int i = 0; i < n; ++i)
      if (lmax - lam[i] > top_tol) u[i] = gt[i] / (lmax - lam[i]);
    u[n - 1] += std::sqrt(std::max(0.0, 1.0 - W2));
  } else {
    // solve sum gt_i^2 / (sigma + (lmax - lam_i))^2 = 1 for sigma > 0
    double hi = gt.norm() * (1.0 + 1e-12) + 1e-300;
    double lo = 0.0;
    auto f = [&](double sig) {
      double s = 0;
      for (int i = 0; i < n; ++i) {
        double den = sig + (lmax - lam[i]);
        s += (gt[i] / den) * (gt[i] / den);
      }
      return s;
    };
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (f(mid) > 1.0 ? lo : hi) = mid;
    }
    double sigma = hi;
    for (int i = 0; i < n; ++i) u[i] = gt[i] / (sigma + (lmax - lam[i]));
    double nu = u.norm();
    if (nu > 0) u /= nu;
  }

  double value = 0.0;
  for (int i = 0; i < n; ++i) value += lam[i] * u[i] * u[i] + 2.0 * gt[i] * u[i];
  return {V * u, value};
}

Mat sqrtm_spd(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
  Vec lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff()))
    throw Error(errc::degenerate_input, "sqrtm: matrix not positive semidefinite");
  Vec s = lam.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

// ---------------------------------------------------------------------------
// MVEE of points (Frank-Wolfe with away steps + active-set Newton polish)

namespace {

Mat lifted(const Mat& P) {
  Mat Q(P.rows() + 1, P.cols());
  Q.topRows(P.rows()) = P;
  Q.row(P.rows()).setOnes();
  return Q;
}

Mat moment_inverse(const Mat& Q, const Vec& w) {
  Mat M = Q * w.asDiagonal() * Q.transpose();
  Eigen::LDLT<Mat> ldlt(M);
  if (ldlt.info() != Eigen::Success)
    throw Error(errc::degenerate_input, "mvee: point set is affinely degenerate");
  Mat I = Mat::Identity(M.rows(), M.cols());
  Mat Minv = ldlt.solve(I);
  if (!Minv.allFinite())
    throw Error(errc::degenerate_input, "mvee: point set is affinely degenerate");
  return Minv;
}

}  // namespace

MveeResult mvee_points(const Mat& P, double eps, int max_iter) {
  const int n = static_cast<int>(P.rows());
  const int m = static_cast<int>(P.cols());
  const double d = n + 1.0;
  if (m < n + 1) throw Error(errc::degenerate_input, "mvee: need at least n+1 points");

  Mat Q = lifted(P);
  Vec w = Vec::Constant(m, 1.0 / m);
  Mat Minv = moment_inverse(Q, w);
  auto full_g = [&]() {
    Mat T = Minv.selfadjointView<Eigen::Lower>() * Q;
    Vec g(m);
    for (int j = 0; j < m; ++j) g[j] = Q.col(j).dot(T.col(j));
    return g;
  };
  Minv = 0.5 * (Minv + Minv.transpose());
  Vec g = full_g();

  int it = 0, since_refresh = 0;
  for (; it < max_iter; ++it) {
    int imax = 0;
    double kp = g.maxCoeff(&imax);
    int imin = -1;
    double km = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      if (w[j] > 1e-12 && g[j] < km) {
        km = g[j];
        imin = j;
      }
    double dp = kp / d - 1.0;
    double dm = 1.0 - km / d;
    if (dp <= eps && dm <= eps) break;

    int j;
    double gamma;
    if (dp >= dm || imin < 0) {
      j = imax;
      gamma = (kp - d) / (d * (kp - 1.0));
    } else {
      j = imin;
      double gmin = -w[j] / (1.0 - w[j]);
      gamma = (km > 1.0 + 1e-14) ? (km - d) / (d * (km - 1.0)) : gmin;
      if (gamma > 0 || gamma < gmin) gamma = gmin;
    }

    Vec Mq = Minv * Q.col(j);
    double qMq = Q.col(j).dot(Mq);
    double c1 = 1.0 / (1.0 - gamma);
    double denom = 1.0 + gamma * c1 * qMq;
    int halved = 0;
    while (std::abs(denom) < 1e-12 && halved < 40) {
      gamma *= 0.5;
      c1 = 1.0 / (1.0 - gamma);
      denom = 1.0 + gamma * c1 * qMq;
      ++halved;
    }
    w *= (1.0 - gamma);
    w[j] += gamma;
    if (w[j] < 0) w[j] = 0;

    double coef = gamma * c1 * c1 / denom;
    Vec s = Q.transpose() * Mq;  // s_j = q_j' Minv q_i
    Minv = c1 * Minv - coef * (Mq * Mq.transpose());
    g = c1 * g - coef * s.cwiseAbs2();
    if (++since_refresh >= 512 || !Minv.allFinite()) {
      Minv = moment_inverse(Q, w);
      g = full_g();
      since_refresh = 0;
    }
  }

  // --- Newton polish on the support set
  Minv = moment_inverse(Q, w);
  g = full_g();
  std::vector<int> S;
  for (int j = 0; j < m; ++j)
    if (w[j] > 1e-10) S.push_back(j);

  auto gap_of = [&](const Vec& gg) { return gg.maxCoeff() - d; };
  Vec best_w = w;
  double best_gap = std::abs(gap_of(g));

  for (int round = 0; round < 60 && !S.empty(); ++round) {
    const int k = static_cast<int>(S.size());
    Mat QS(n + 1, k);
    for (int i = 0; i < k; ++i) QS.col(i) = Q.col(S[i]);
    Mat C = QS.transpose() * (Minv * QS);
    Mat J = Mat::Zero(k + 1, k + 1);
    J.topLeftCorner(k, k) = -C.cwiseAbs2();
    J.block(0, k, k, 1).setOnes();
    J.block(k, 0, 1, k).setOnes();
    Vec rhs(k + 1);
    for (int i = 0; i < k; ++i) rhs[i] = d - g[S[i]];
    double wsum = 0;
    for (int i = 0; i < k; ++i) wsum += w[S[i]];
    rhs[k] = 1.0 - wsum;
    Vec sol = J.colPivHouseholderQr().solve(rhs);

    // step limited to keep weights nonnegative; a blocked step means the
    // blocking point does not belong to the support: drop it and retry
    double alpha = 1.0;
    int blocker = -1;
    for (int i = 0; i < k; ++i)
      if (sol[i] < 0 && -w[S[i]] / sol[i] < alpha) {
        alpha = -w[S[i]] / sol[i];
        blocker = i;
      }
    if (alpha < 1e-3 && blocker >= 0) {
      w[S[blocker]] = 0.0;
      S.erase(S.begin() + blocker);
      Minv = moment_inverse(Q, w);
      g = full_g();
      continue;
    }
    alpha = std::min(1.0, 0.9999 * alpha);
    Vec w_new = w;
    for (int i = 0; i < k; ++i) w_new[S[i]] = std::max(0.0, w[S[i]] + alpha * sol[i]);

    Mat Minv_new;
    try {
      Minv_new = moment_inverse(Q, w_new);
    } catch (const Error&) {
      break;
    }
    w = w_new;
    Minv = Minv_new;
    g = full_g();

    double worst = 0;
    for (int i : S) worst = std::max(worst, std::abs(g[i] - d) * (w[i] > 0 ? 1.0 : 0.0));
    double gap = std::max(std::max(0.0, gap_of(g)), worst);
    if (gap < best_gap) {
      best_gap = gap;
      best_w = w;
    }

    // active-set maintenance
    std::vector<int> S2;
    for (int i : S)
      if (w[i] > 1e-14) S2.push_back(i);
    bool changed = S2.size() != S.size();
    for (int j = 0; j < m; ++j)
      if (w[j] <= 1e-14 && g[j] > d * (1.0 + 1e-12)) {
        if (std::find(S2.begin(), S2.end(), j) == S2.end()) {
          S2.push_back(j);
          w[j] = 1e-12;
          changed = true;
        }
      }
    S.swap(S2);
    if (!changed && gap <= 1e-13 * d) break;
  }

  w = best_w;
  Minv = moment_inverse(Q, w);
  g = full_g();

  MveeResult res;
  res.iterations = it;
  res.gap = gap_of(g);
  res.center = P * w;
  Mat Sw = Mat::Zero(n, n);
  for (int j = 0; j < m; ++j) {
    if (w[j] <= 0) continue;
    Vec dp_ = P.col(j) - res.center;
    Sw += w[j] * dp_ * dp_.transpose();
  }
  Eigen::LDLT<Mat> ldlt(double(n) * Sw);
  res.shape = ldlt.solve(Mat::Identity(n, n));
  res.shape = 0.5 * (res.shape + res.shape.transpose());

  std::vector<int> sup;
  double wmax = w.maxCoeff();
  for (int j = 0; j < m; ++j)
    if (w[j] > tol::decomposition_prune * wmax) sup.push_back(j);
  const int k = static_cast<int>(sup.size());
  res.points.resize(n, k);
  res.weights.resize(k);
  for (int i = 0; i < k; ++i) {
    res.points.col(i) = P.col(sup[i]);
    res.weights[i] = w[sup[i]];
  }
  double wsum = res.weights.sum();
  Mat T = sqrtm_spd(res.shape);
  res.contacts.resize(n, k);
  for (int i = 0; i < k; ++i) {
    Vec u = T * (res.points.col(i) - res.center);
    double nu = u.norm();
    res.contacts.col(i) = nu > 0 ? Vec(u / nu) : u;
  }
  res.lambdas = (double(n) / wsum) * res.weights;
  return res;
}

MveeResult mvee_body(const ConvexBody& K, double eps) {
  switch (K.kind) {
    case BodyKind::vpolytope:
      return mvee_points(K.V, eps);
    case BodyKind::hpolytope: {
      ConvexBody tmp = K;
      ensure_vform(tmp);
      return mvee_points(tmp.V, eps);
    }
    case BodyKind::ellipsoid: {
      MveeResult res;
      res.center = K.ec;
      res.shape = K.Q;
      res.gap = 0.0;
      return res;
    }
    case BodyKind::ballhull: {
      const int n = K.n;
      std::vector<Vec> fixed;  // apexes
      std::vector<Vec> dyn;    // movable points on the sphere part
      for (int j = 0; j < K.apexes.cols(); ++j) fixed.push_back(K.apexes.col(j));
      for (int i = 0; i < n; ++i) {
        dyn.push_back(K.center + K.radius * Vec::Unit(n, i));
        dyn.push_back(K.center - K.radius * Vec::Unit(n, i));
      }
      Rng rng(0xba11);
      for (int i = 0; i < 2 * n; ++i) dyn.push_back(K.center + K.radius * rng.unit_vector(n));

      MveeResult res;
      for (int round = 0; round < 400; ++round) {
        Mat Pm(n, static_cast<int>(fixed.size() + dyn.size()));
        for (size_t j = 0; j < fixed.size(); ++j) Pm.col(static_cast<int>(j)) = fixed[j];
        for (size_t j = 0; j < dyn.size(); ++j)
          Pm.col(static_cast<int>(fixed.size() + j)) = dyn[j];
        res = mvee_points(Pm, std::min(eps, 1e-10));
        Vec dd = K.center - res.center;
        SphereQuadMax sq = max_quadratic_on_sphere(
            K.radius * K.radius * res.shape, K.radius * (res.shape * dd));
        double val = sq.value + dd.dot(res.shape * dd);
        if (val <= 1.0 + 5e-9) {
          res.gap = std::max(res.gap, val - 1.0);
          return res;
        }
        // move the nearest dynamic point to the violating spot rather than
        // accumulating near-duplicate clusters
        Vec cand = K.center + K.radius * sq.u;
        size_t nearest = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < dyn.size(); ++j) {
          double dd2 = (dyn[j] - cand).norm();
          if (dd2 < bestd) {
            bestd = dd2;
            nearest = j;
          }
        }
        if (bestd <= 0.05 * K.radius) dyn[nearest] = cand;
        else dyn.push_back(cand);
      }
      return res;  // best effort; gap field reports the state honestly
    }
  }
  throw Error(errc::invalid_body, "mvee: unknown body kind");
}

// ---------------------------------------------------------------------------
// Maximum-volume inscribed ellipsoid

namespace {

struct SymPacker {
  int n, N1;
  std::vector<std::pair<int, int>> pairs;
  explicit SymPacker(int nn) : n(nn), N1(nn * (nn + 1) / 2) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) pairs.push_back({i, j});
  }
  Mat unpack(const Vec& th) const {
    Mat G(n, n);
    for (int k = 0; k < N1; ++k) {
      auto [i, j] = pairs[k];
      G(i, j) = G(j, i) = th[k];
    }
    return G;
  }
  Vec pack(const Mat& G) const {  // plain entries (residual representation)
    Vec v(N1);
    for (int k = 0; k < N1; ++k) v[k] = G(pairs[k].first, pairs[k].second);
    return v;
  }
  Vec pack_grad(const Mat& M) const {  // directional: off-diagonals doubled
    Vec v(N1);
    for (int k = 0; k < N1; ++k) {
      auto [i, j] = pairs[k];
      v[k] = (i == j) ? M(i, i) : 2.0 * M(i, j);
    }
    return v;
  }
};

struct InscribedProblem {
  Mat A;  // unit rows
  Vec b;
  int n, m;
  SymPacker pk;

  InscribedProblem(const Mat& A_, const Vec& b_)
      : A(A_), b(b_), n(static_cast<int>(A_.cols())), m(static_cast<int>(A_.rows())), pk(n) {}

  bool phi(const Vec& z, double t, double* out) const {
    Mat G = pk.unpack(z.head(pk.N1));
    Vec d = z.tail(n);
    Eigen::LLT<Mat> llt(G);
    if (llt.info() != Eigen::Success) return false;
    double logdet = 0;
    for (int i = 0; i < n; ++i) logdet += std::log(llt.matrixL()(i, i));
    logdet *= 2.0;
    double val = -t * logdet;
    for (int i = 0; i < m; ++i) {
      double s = b[i] - A.row(i).dot(d);
      if (s <= 0) return false;
      double r = s * s - (G * A.row(i).transpose()).squaredNorm();
      if (r <= 0) return false;
      val -= std::log(r);
    }
    *out = val;
    return true;
  }

  Vec grad(const Vec& z, double t) const {
    Mat G = pk.unpack(z.head(pk.N1));
    Vec d = z.tail(n);
    Mat Ginv = G.llt().solve(Mat::Identity(n, n));
    Mat Mg = -t * Ginv;
    Vec dg = Vec::Zero(n);
    for (int i = 0; i < m; ++i) {
      Vec a = A.row(i).transpose();
      double s = b[i] - a.dot(d);
      Vec Ga = G * a;
      double r = s * s - Ga.squaredNorm();
      dg += (2.0 * s / r) * a;
      Mg += (Ga * a.transpose() + a * Ga.transpose()) / r;
    }
    Vec out(pk.N1 + n);
    out.head(pk.N1) = pk.pack_grad(Mg);
    out.tail(n) = dg;
    return out;
  }
};

}  // namespace

InscribedResult inscribed_ellipsoid(const Mat& A_in, const Vec& b_in, double kkt_target) {
  const int n = static_cast<int>(A_in.cols());
  const int m = static_cast<int>(A_in.rows());
  Mat A(m, n);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    double nrm = A_in.row(i).norm();
    if (nrm <= 1e-14) throw Error(errc::degenerate_input, "inscribed ellipsoid: zero normal");
    A.row(i) = A_in.row(i) / nrm;
    b[i] = b_in[i] / nrm;
  }
  InscribedProblem prob(A, b);
  const int N = prob.pk.N1 + n;

  auto [c0, rc] = chebyshev_center(A, b);
  if (!(rc > tol::interior_radius))
    throw Error(errc::empty_interior, "inscribed ellipsoid: polytope has no interior");

  Vec z(N);
  z.head(prob.pk.N1) = prob.pk.pack(Mat(0.9 * rc * Mat::Identity(n, n)));
  z.tail(n) = c0;

  // --- barrier phase
  for (double t = 1.0; t < 2e7; t *= 25.0) {
    for (int iter = 0; iter < 60; ++iter) {
      Vec g = prob.grad(z, t);
      // finite-difference Hessian of the analytic gradient
      Mat H(N, N);
      for (int k = 0; k < N; ++k) {
        double h = 1e-6 * (1.0 + std::abs(z[k]));
        Vec zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        double dummy;
        // keep FD points feasible; shrink h if needed
        int guard = 0;
        while ((!prob.phi(zp, t, &dummy) || !prob.phi(zm, t, &dummy)) && guard < 30) {
          h *= 0.5;
          zp = z;
          zm = z;
          zp[k] += h;
          zm[k] -= h;
          ++guard;
        }
        H.col(k) = (prob.grad(zp, t) - prob.grad(zm, t)) / (2.0 * h);
      }
      H = 0.5 * (H + H.transpose());
      double ridge = 1e-12 * std::max(1.0, H.trace());
      Vec step;
      double decr = 0;
      for (int tries = 0; tries < 8; ++tries) {
        Eigen::LLT<Mat> llt(H + ridge * Mat::Identity(N, N));
        if (llt.info() == Eigen::Success) {
          step = -llt.solve(g);
          decr = -g.dot(step);
          if (decr > 0) break;
        }
        ridge *= 100.0;
      }
      if (!(decr > 0)) break;
      double f0;
      if (!prob.phi(z, t, &f0)) throw Error(errc::no_convergence, "inscribed ellipsoid: infeasible iterate");
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        Vec zc = z + alpha * step;
        double f1;
        if (prob.phi(zc, t, &f1) && f1 <= f0 - 0.25 * alpha * decr) {
          z = zc;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      if (decr < 1e-12 * (1.0 + t)) break;
    }
  }

  Mat G = prob.pk.unpack(z.head(prob.pk.N1));
  Vec d = z.tail(n);

  // --- active set from barrier slacks
  std::vector<int> act;
  Vec slack(m);
  for (int i = 0; i < m; ++i) {
    slack[i] = b[i] - A.row(i).dot(d) - (G * A.row(i).transpose()).norm();
  }
  double sref = std::max(1.0, b.cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i)
    if (slack[i] <= 1e-4 * sref) act.push_back(i);
  if (act.empty()) throw Error(errc::no_convergence, "inscribed ellipsoid: no active facets found");

  // --- KKT polish
  auto kkt = [&](const Vec& x, const std::vector<int>& actv) -> Vec {
    const int k = static_cast<int>(actv.size());
    Mat Gx = prob.pk.unpack(x.head(prob.pk.N1));
    Vec dx = x.segment(prob.pk.N1, n);
    Vec mu = x.tail(k);
    Mat Ginv = Gx.llt().solve(Mat::Identity(n, n));
    Mat R1 = Ginv;
    Vec R2 = Vec::Zero(n);
    Vec R3(k);
    for (int j = 0; j < k; ++j) {
      Vec a = A.row(actv[j]).transpose();
      Vec Ga = Gx * a;
      double nGa = Ga.norm();
      Vec u = Ga / nGa;
      R1 -= mu[j] * 0.5 * (u * a.transpose() + a * u.transpose());
      R2 += mu[j] * a;
      R3[j] = b[actv[j]] - a.dot(dx) - nGa;
    }
    Vec F(prob.pk.N1 + n + k);
    F.head(prob.pk.N1) = prob.pk.pack(R1);
    F.segment(prob.pk.N1, n) = R2;
    F.tail(k) = R3;
    return F;
  };

  double final_res = std::numeric_limits<double>::infinity();
  for (int rounds = 0; rounds < 4; ++rounds) {
    const int k = static_cast<int>(act.size());
    // initialize multipliers via nonnegative least squares on the stationarity system
    Mat Ginv = G.llt().solve(Mat::Identity(n, n));
    Mat Mnn(prob.pk.N1 + n, k);
    Vec rhs(prob.pk.N1 + n);
    rhs.head(prob.pk.N1) = prob.pk.pack(Ginv);
    rhs.tail(n).setZero();
    for (int j = 0; j < k; ++j) {
      Vec a = A.row(act[j]).transpose();
      Vec Ga = G * a;
      Vec u = Ga / Ga.norm();
      Mat sym = 0.5 * (u * a.transpose() + a * u.transpose());
      Mnn.col(j).head(prob.pk.N1) = prob.pk.pack(sym);
      Mnn.col(j).tail(n) = a;
    }
    Vec mu0 = nnls(Mnn, rhs).x;

    const int NX = prob.pk.N1 + n + k;
    Vec x(NX);
    x.head(prob.pk.N1) = prob.pk.pack(G);
    x.segment(prob.pk.N1, n) = d;
    x.tail(k) = mu0;

    Vec F = kkt(x, act);
    double fn = F.lpNorm<Eigen::Infinity>();
    for (int iter = 0; iter < 80 && fn > 1e-14; ++iter) {
      Mat Jm(NX, NX);
      for (int kk = 0; kk < NX; ++kk) {
        double h = 1e-7 * (1.0 + std::abs(x[kk]));
        Vec xp = x, xm = x;
        xp[kk] += h;
        xm[kk] -= h;
        Jm.col(kk) = (kkt(xp, act) - kkt(xm, act)) / (2.0 * h);
      }
      Vec stepv = Jm.colPivHouseholderQr().solve(-F);
      double alpha = 1.0;
      bool ok = false;
      for (int ls = 0; ls < 50; ++ls) {
        Vec xc = x + alpha * stepv;
        // G must stay SPD
        Mat Gc = prob.pk.unpack(xc.head(prob.pk.N1));
        if (Eigen::LLT<Mat>(Gc).info() == Eigen::Success) {
          Vec Fc = kkt(xc, act);
          double fc = Fc.lpNorm<Eigen::Infinity>();
          if (fc < fn) {
            x = xc;
            F = Fc;
            fn = fc;
            ok = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!ok) break;
    }

    G = prob.pk.unpack(x.head(prob.pk.N1));
    d = x.segment(prob.pk.N1, n);
    Vec mu = x.tail(k);
    final_res = fn;

    // active-set corrections
    bool changed = false;
    std::vector<int> act2;
    for (int j = 0; j < k; ++j) {
      if (mu[j] < -1e-10) {
        changed = true;  // drop facet with negative multiplier
      } else {
        act2.push_back(act[j]);
      }
    }
    for (int i = 0; i < m; ++i) {
      double sl = b[i] - A.row(i).dot(d) - (G * A.row(i).transpose()).norm();
      if (sl < -1e-12 && std::find(act2.begin(), act2.end(), i) == act2.end()) {
        act2.push_back(i);
        changed = true;
      }
    }
    if (!changed) {
      act = act2;
      // refresh mu into full-length output later
      InscribedResult out;
      out.G = G;
      out.d = d;
      out.active = act;
      out.mu = Vec::Zero(m);
      for (int j = 0; j < static_cast<int>(act.size()) && j < mu.size(); ++j)
        out.mu[act[j]] = std::max(0.0, mu[j]);
      out.kkt_residual = final_res;
      double ms = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        ms = std::min(ms, b[i] - A.row(i).dot(d) - (G * A.row(i).transpose()).norm());
      out.min_slack = ms;
      if (final_res > kkt_target)
        throw Error(errc::no_convergence, "inscribed ellipsoid: KKT polish stalled above target");
      return out;
    }
    act = act2;
    std::sort(act.begin(), act.end());
  }
  throw Error(errc::no_convergence, "inscribed ellipsoid: active set did not settle");
}

// ---------------------------------------------------------------------------
// Sphere decompositions and position checks

namespace {

// Frobenius-compatible packing of symmetric matrices (off-diagonals * sqrt2).
Vec fro_pack(const Mat& M) {
  const int n = static_cast<int>(M.rows());
  Vec v(n * (n + 1) / 2);
  int k = 0;
  const double s2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v[k++] = (i == j) ? M(i, i) : s2 * M(i, j);
  return v;
}

struct DecompFit {
  Vec lambdas;
  double residual;
};

DecompFit fit_weights(const Mat& U) {
  const int n = static_cast<int>(U.rows());
  const int k = static_cast<int>(U.cols());
  const int N1 = n * (n + 1) / 2;
  Mat B(N1 + n, k);
  for (int j = 0; j < k; ++j) {
    Vec u = U.col(j);
    B.col(j).head(N1) = fro_pack(u * u.transpose());
    B.col(j).tail(n) = u;
  }
  Vec rhs(N1 + n);
  rhs.head(N1) = fro_pack(Mat::Identity(n, n));
  rhs.tail(n).setZero();
  NnlsResult r = nnls(B, rhs);
  return {r.x, r.residual};
}

Mat contact_candidates(const ConvexBody& K, double ctol) {
  std::vector<Vec> cand;
  auto consider = [&](const Vec& u, double h) {
    if (std::abs(h - 1.0) <= ctol && std::abs(u.norm() - 1.0) <= ctol) cand.push_back(u);
  };
  if (K.cert && K.cert->contacts.size() > 0) {
    for (int j = 0; j < K.cert->contacts.cols(); ++j) {
      Vec u = K.cert->contacts.col(j);
      consider(u, support(K, u));
    }
  } else {
    switch (K.kind) {
      case BodyKind::vpolytope:
      case BodyKind::hpolytope: {
        ConvexBody tmp = K;
        ensure_hform(tmp);
        for (int i = 0; i < tmp.A.rows(); ++i)
          if (std::abs(tmp.b[i] - 1.0) <= ctol) cand.push_back(tmp.A.row(i).transpose());
        break;
      }
      case BodyKind::ballhull: {
        Mat D = K.n == 2 ? circle_grid(720)
                         : (K.n == 3 ? icosphere(3) : Mat());
        if (D.size() == 0) {
          Rng rng(0xc0457ULL);
          D = random_directions(K.n, 400 * K.n, rng);
        }
        for (int j = 0; j < D.cols(); ++j) {
          Vec u = D.col(j);
          consider(u, support(K, u));
        }
        break;
      }
      case BodyKind::ellipsoid: {
        for (int i = 0; i < K.n; ++i) {
          consider(Vec(Vec::Unit(K.n, i)), support(K, Vec::Unit(K.n, i)));
          consider(Vec(-Vec::Unit(K.n, i)), support(K, Vec(-Vec::Unit(K.n, i))));
        }
        break;
      }
    }
  }
  Mat U(K.n, static_cast<int>(cand.size()));
  for (size_t j = 0; j < cand.size(); ++j) U.col(static_cast<int>(j)) = cand[j];
  return U;
}

}  // namespace

JohnDecomposition john_decomposition(const ConvexBody& K, double contact_tol) {
  Mat U = contact_candidates(K, contact_tol);
  if (U.cols() < K.n + 1)
    throw Error(errc::not_in_john_position,
                "sphere decomposition: not enough unit contacts on the boundary");
  DecompFit fit = fit_weights(U);

  // prune negligible weights and refit on the support
  double lmax = fit.lambdas.maxCoeff();
  std::vector<int> keep;
  for (int j = 0; j < fit.lambdas.size(); ++j)
    if (fit.lambdas[j] > tol::decomposition_prune * lmax) keep.push_back(j);
  Mat U2(K.n, static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) U2.col(static_cast<int>(j)) = U.col(keep[j]);
  DecompFit fit2 = fit_weights(U2);

  JohnDecomposition out;
  out.contacts = U2;
  out.lambdas = fit2.lambdas;
  out.residual = fit2.residual;
  double cd = 0;
  for (int j = 0; j < U2.cols(); ++j) {
    cd = std::max(cd, std::abs(U2.col(j).norm() - 1.0));
    cd = std::max(cd, std::abs(support(K, U2.col(j)) - 1.0));
  }
  out.contact_defect = cd;
  if (out.residual > tol::john_residual)
    throw Error(errc::not_in_john_position,
                "sphere decomposition: moment residual " + std::to_string(out.residual) +
                    " exceeds tolerance");
  return out;
}

namespace {

PositionReport report_from(const ConvexBody& K, double contact_tol, bool john) {
  PositionReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  try {
    Mat U;
    Vec lam;
    if (john) {
      JohnDecomposition d = john_decomposition(K, contact_tol);
      U = d.contacts;
      lam = d.lambdas;
      rep.contact_defect = d.contact_defect;
    } else {
      // Loewner: contacts are points of K on the unit sphere. With K inside
      // the ball, a unit point u of K is a boundary contact as soon as the
      // support of K at u reaches 1.
      std::vector<Vec> cand;
      if (K.cert && K.cert->contacts.size() > 0) {
        for (int j = 0; j < K.cert->contacts.cols(); ++j) cand.push_back(K.cert->contacts.col(j));
      } else {
        switch (K.kind) {
          case BodyKind::vpolytope: {
            for (int j = 0; j < K.V.cols(); ++j)
              if (std::abs(K.V.col(j).norm() - 1.0) <= contact_tol)
                cand.push_back(K.V.col(j).normalized());
            break;
          }
          case BodyKind::hpolytope: {
            ConvexBody tmp = K;
            ensure_vform(tmp);
            for (int j = 0; j < tmp.V.cols(); ++j)
              if (std::abs(tmp.V.col(j).norm() - 1.0) <= contact_tol)
                cand.push_back(tmp.V.col(j).normalized());
            break;
          }
          case BodyKind::ballhull: {
            for (int j = 0; j < K.apexes.cols(); ++j)
              if (std::abs(K.apexes.col(j).norm() - 1.0) <= contact_tol)
                cand.push_back(K.apexes.col(j).normalized());
            double cn = K.center.norm();
            if (std::abs(cn + K.radius - 1.0) <= contact_tol) {
              if (cn > 1e-12) {
                cand.push_back(((1.0 + K.radius / cn) * K.center).normalized());
              } else {
                for (int i = 0; i < K.n; ++i) {
                  cand.push_back(Vec::Unit(K.n, i));
                  cand.push_back(-Vec::Unit(K.n, i));
                }
              }
            }
            break;
          }
          case BodyKind::ellipsoid: {
            for (int i = 0; i < K.n; ++i) {
              cand.push_back(Vec::Unit(K.n, i));
              cand.push_back(-Vec::Unit(K.n, i));
            }
            break;
          }
        }
      }
      if (static_cast<int>(cand.size()) < K.n + 1)
        throw Error(errc::not_in_loewner_position,
                    "sphere decomposition: not enough unit contacts");
      U.resize(K.n, static_cast<int>(cand.size()));
      for (size_t j = 0; j < cand.size(); ++j) U.col(static_cast<int>(j)) = cand[j];
      DecompFit fit = fit_weights(U);
      double lmax = fit.lambdas.maxCoeff();
      std::vector<int> keep;
      for (int j = 0; j < fit.lambdas.size(); ++j)
        if (fit.lambdas[j] > tol::decomposition_prune * lmax) keep.push_back(j);
      Mat U2(K.n, static_cast<int>(keep.size()));
      for (size_t j = 0; j < keep.size(); ++j) U2.col(static_cast<int>(j)) = U.col(keep[j]);
      DecompFit fit2 = fit_weights(U2);
      U = U2;
      lam = fit2.lambdas;
      double cd = 0;
      for (int j = 0; j < U.cols(); ++j) {
        cd = std::max(cd, std::abs(U.col(j).norm() - 1.0));
        cd = std::max(cd, std::max(0.0, 1.0 - support(K, U.col(j))));
      }
      rep.contact_defect = cd;
    }

    rep.contacts = U;
    rep.lambdas = lam;
    Vec vsum = Vec::Zero(K.n);
    Mat msum = Mat::Zero(K.n, K.n);
    for (int j = 0; j < U.cols(); ++j) {
      vsum += lam[j] * U.col(j);
      msum += lam[j] * U.col(j) * U.col(j).transpose();
    }
    rep.vector_residual = vsum.norm();
    rep.matrix_residual = (msum - Mat::Identity(K.n, K.n)).norm();
    rep.trace_residual = std::abs(lam.sum() - K.n);
  } catch (const Error&) {
    rep.vector_residual = rep.matrix_residual = rep.trace_residual = inf;
    rep.contact_defect = inf;
  }
  rep.containment_defect = john ? unit_ball_in_body_defect(K) : body_in_unit_ball_defect(K);
  rep.in_position = rep.vector_residual <= tol::john_residual &&
                    rep.matrix_residual <= tol::john_residual &&
                    rep.trace_residual <= tol::john_residual &&
                    rep.contact_defect <= contact_tol && rep.containment_defect <= 1e-7;
  return rep;
}

}  // namespace

PositionReport john_verify(const ConvexBody& K, double contact_tol) {
  return report_from(K, contact_tol, true);
}

PositionReport loewner_verify(const ConvexBody& K, double contact_tol) {
  return report_from(K, contact_tol, false);
}

// ---------------------------------------------------------------------------
// Normalization maps

NormalizedBody normalize_john(const ConvexBody& K) {
  switch (K.kind) {
    case BodyKind::vpolytope:
    case BodyKind::hpolytope: {
      ConvexBody K0 = K;
      ensure_hform(K0);
      auto one_pass = [&](const ConvexBody& body) {
        InscribedResult r = inscribed_ellipsoid(body.A, body.b);
        Mat Gi = r.G.llt().solve(Mat::Identity(body.n, body.n));
        return make_affine(Gi, Vec(-(Gi * r.d)));
      };
      AffineMap f1 = one_pass(K0);
      ConvexBody K1 = apply(f1, K0);
      AffineMap f2 = one_pass(K1);
      ConvexBody K2 = apply(f2, K1);
      AffineMap f = compose(f2, f1);
      try {
        JohnDecomposition dec = john_decomposition(K2);
        BodyCertificate cert;
        cert.contacts = dec.contacts;
        cert.weights = dec.lambdas;
        K2.cert = std::move(cert);
      } catch (const Error&) {
        // leave the certificate empty; verification will report honestly
      }
      return {std::move(K2), f};
    }
    case BodyKind::ellipsoid: {
      Mat T = sqrtm_spd(K.Q);
      AffineMap f = make_affine(T, Vec(-(T * K.ec)));
      return {apply(f, K), f};
    }
    case BodyKind::ballhull: {
      PositionReport rep = john_verify(K);
      if (rep.in_position) return {K, identity_map(K.n)};
      throw Error(errc::representation_unavailable,
                  "normalize: ball hulls only admit similarity maps; body is not already in position");
    }
  }
  throw Error(errc::invalid_body, "normalize: unknown body kind");
}

NormalizedBody normalize_loewner(const ConvexBody& K) {
  MveeResult res = mvee_body(K);
  Mat T = sqrtm_spd(res.shape);
  AffineMap f = make_affine(T, Vec(-(T * res.center)));
  return {apply(f, K), f};
}

// ---------------------------------------------------------------------------
// Containment defects (gauge-excess units)

double ball_in_ellipsoid_defect(const Vec& c0, double r, const Vec& c, const Mat& Q) {
  Vec dd = c0 - c;
  SphereQuadMax sq = max_quadratic_on_sphere(r * r * Q, r * (Q * dd));
  double val = sq.value + dd.dot(Q * dd);
  return std::max(0.0, std::sqrt(std::max(0.0, val)) - 1.0);
}

double ellipsoid_in_ball_defect(const Vec& c, const Mat& Q) {
  const int n = static_cast<int>(c.size());
  Mat Qi = Q.ldlt().solve(Mat::Identity(n, n));
  Mat S = sqrtm_spd(0.5 * (Qi + Qi.transpose()));
  SphereQuadMax sq = max_quadratic_on_sphere(Qi, S * c);
  double val = sq.value + c.squaredNorm();
  return std::max(0.0, std::sqrt(std::max(0.0, val)) - 1.0);
}

double unit_ball_in_body_defect(const ConvexBody& K) {
  switch (K.kind) {
    case BodyKind::vpolytope: {
      ConvexBody tmp = K;
      ensure_hform(tmp);
      return std::max(0.0, 1.0 - tmp.b.minCoeff());
    }
    case BodyKind::hpolytope:
      return std::max(0.0, 1.0 - K.b.minCoeff());
    case BodyKind::ballhull: {
      if (K.radius - K.center.norm() >= 1.0) return 0.0;
      Rng rng(0xb0d7ULL);
      double mn = std::numeric_limits<double>::infinity();
      Vec best;
      Mat D = K.n == 2 ? circle_grid(1024)
                       : (K.n == 3 ? icosphere(3) : random_directions(K.n, 600 * K.n, rng));
      for (int j = 0; j < D.cols(); ++j) {
        double h = support(K, D.col(j));
        if (h < mn) {
          mn = h;
          best = D.col(j);
        }
      }
      auto f = [&](const Vec& v) {
        double nv = v.norm();
        return nv < 1e-9 ? 1e300 : support(K, Vec(v / nv));
      };
      NmResult nm = nelder_mead(f, best, {500, 1e-12, 1e-14, 0.15});
      mn = std::min(mn, nm.f);
      return std::max(0.0, 1.0 - mn);
    }
    case BodyKind::ellipsoid:
      return ball_in_ellipsoid_defect(Vec::Zero(K.n), 1.0, K.ec, K.Q);
  }
  return std::numeric_limits<double>::infinity();
}

double body_in_unit_ball_defect(const ConvexBody& K) {
  switch (K.kind) {
    case BodyKind::vpolytope:
      return std::max(0.0, K.V.colwise().norm().maxCoeff() - 1.0);
    case BodyKind::hpolytope: {
      ConvexBody tmp = K;
      ensure_vform(tmp);
      return std::max(0.0, tmp.V.colwise().norm().maxCoeff() - 1.0);
    }
    case BodyKind::ballhull: {
      double worst = K.center.norm() + K.radius;
      if (K.apexes.cols() > 0) worst = std::max(worst, K.apexes.colwise().norm().maxCoeff());
      return std::max(0.0, worst - 1.0);
    }
    case BodyKind::ellipsoid:
      return ellipsoid_in_ball_defect(K.ec, K.Q);
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace geo
