#include "geo/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "geo/scalars.hpp"

namespace geo {

namespace {

constexpr double kParamSlack = 1e-12;

void check_dim(int n, int max_n) {
  if (n < 2) throw Error(errc::parameter_out_of_range, "dimension n must be at least 2");
  if (n > max_n)
    throw Error(errc::dimension_too_large, "construction uses sign enumeration; n too large");
}

void check_k(int n, int k) {
  if (k < 1 || k > n - 1)
    throw Error(errc::parameter_out_of_range, "k must lie in [1, n-1]");
}

double checked_param(double x, double lo, double hi, const char* what) {
  if (x < lo - kParamSlack || x > hi + kParamSlack)
    throw Error(errc::parameter_out_of_range, what);
  return std::clamp(x, lo, hi);
}

double safe_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }

// Real orthonormal rows of the size-m discrete Fourier basis, grouped so that
// any union of whole groups has flat column norms: each group contributes
// (group size)/m to every squared column norm.
struct FourierRows {
  Vec constant;               // all-ones row
  std::vector<Vec> alternating;  // +-1 row, present iff m is even
  std::vector<std::pair<Vec, Vec>> pairs;  // cosine/sine pairs
};

FourierRows fourier_rows(int m) {
  const double pi = std::acos(-1.0);
  FourierRows out;
  out.constant = Vec::Constant(m, 1.0 / std::sqrt(double(m)));
  if (m % 2 == 0) {
    Vec alt(m);
    for (int j = 0; j < m; ++j) alt(j) = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(double(m));
    out.alternating.push_back(alt);
  }
  const int npairs = (m - 1 - int(m % 2 == 0)) / 2;
  for (int f = 1; f <= npairs; ++f) {
    Vec c(m), s(m);
    for (int j = 0; j < m; ++j) {
      c(j) = std::sqrt(2.0 / m) * std::cos(2.0 * pi * f * j / m);
      s(j) = std::sqrt(2.0 / m) * std::sin(2.0 * pi * f * j / m);
    }
    out.pairs.emplace_back(std::move(c), std::move(s));
  }
  return out;
}

Mat stack_rows(const std::vector<Vec>& rows) {
  Mat out(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) out.row(i) = rows[i].transpose();
  return out;
}

// Flat k-frame orthogonal to the all-ones vector in R^{k x m} for m odd and
// k odd, where no Fourier-row subset works. Gauss-Newton on the residual
// system {rows orthonormal, rows perpendicular to ones, column norms flat};
// the solution manifold is smooth, so the iteration converges quadratically.
Mat gauss_newton_flat_frame(int k, int m, double target) {
  const int nvar = k * m;
  const int nres = k * (k + 1) / 2 + k + m;
  const Vec u = Vec::Constant(m, 1.0 / std::sqrt(double(m)));
  Rng rng(0x5eedf1a7u + 1000003ull * m + 97ull * k);
  for (int attempt = 0; attempt < 32; ++attempt) {
    Mat X(k, m);
    for (int i = 0; i < k; ++i) {
      Vec row = rng.normal_vec(m);
      row -= row.dot(u) * u;
      X.row(i) = row.transpose() / row.norm();
    }
    auto residual = [&](const Mat& F) {
      Vec r(nres);
      int idx = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) r(idx++) = F.row(i).dot(F.row(j)) - (i == j ? 1.0 : 0.0);
      for (int i = 0; i < k; ++i) r(idx++) = F.row(i).dot(u);
      for (int j = 0; j < m; ++j) r(idx++) = F.col(j).squaredNorm() - target;
      return r;
    };
    Vec r = residual(X);
    for (int iter = 0; iter < 400 && r.lpNorm<Eigen::Infinity>() > 1e-14; ++iter) {
      Mat Jac = Mat::Zero(nres, nvar);
      int idx = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
          for (int cc = 0; cc < m; ++cc) {
            Jac(idx, i * m + cc) += X(j, cc);
            Jac(idx, j * m + cc) += X(i, cc);
          }
          ++idx;
        }
      for (int i = 0; i < k; ++i) {
        for (int cc = 0; cc < m; ++cc) Jac(idx, i * m + cc) = u(cc);
        ++idx;
      }
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < k; ++i) Jac(idx, i * m + j) = 2.0 * X(i, j);
        ++idx;
      }
      Vec step = Jac.completeOrthogonalDecomposition().solve(-r);
      Mat delta(k, m);  // variables are indexed row-major as i*m + j
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j) delta(i, j) = step(i * m + j);
      double alpha = 1.0;
      for (int h = 0; h < 30; ++h) {
        Mat Xn = X + alpha * delta;
        Vec rn = residual(Xn);
        if (rn.norm() < r.norm()) {
          X = Xn;
          r = rn;
          break;
        }
        alpha *= 0.5;
      }
      if (alpha < 1e-9) break;
    }
    if (r.lpNorm<Eigen::Infinity>() <= 1e-13) return X;
  }
  throw Error(errc::generation_failed, "flat frame solve did not converge");
}

// Merge duplicate generator directions (sign patterns collapse at parameter
// endpoints), summing their decomposition weights.
void add_generator(std::vector<Vec>& dirs, std::vector<double>& weights, const Vec& v,
                   double lambda) {
  for (size_t i = 0; i < dirs.size(); ++i) {
    if ((dirs[i] - v).lpNorm<Eigen::Infinity>() <= 1e-12) {
      weights[i] += lambda;
      return;
    }
  }
  dirs.push_back(v);
  weights.push_back(lambda);
}

Mat cube_vertices(int n, double scale) {
  Mat V(n, std::size_t(1) << n);
  for (int mask = 0; mask < (1 << n); ++mask)
    for (int i = 0; i < n; ++i) V(i, mask) = ((mask >> i) & 1 ? scale : -scale);
  return V;
}

// Unit directions of a regular simplex: m+1 unit vectors in R^m with pairwise
// inner products -1/m.
Mat unit_simplex_dirs(int m) { return john_simplex_vertices(m) / double(m); }

}  // namespace

Mat john_simplex_vertices(int n) {
  if (n < 1) throw Error(errc::parameter_out_of_range, "dimension n must be at least 1");
  const int m = n + 1;
  Mat u = Vec::Constant(m, 1.0 / std::sqrt(double(m)));
  Mat full = orthonormal_completion(u);
  // Rows orthonormal and orthogonal to the all-ones vector; columns scaled to
  // vertex norm n give pairwise inner products -n.
  Mat B = full.rightCols(n).transpose();
  return std::sqrt(n * (n + 1.0)) * B;
}

Mat flat_frame(int n, int k) {
  if (n < 1 || k < 1 || k > n)
    throw Error(errc::parameter_out_of_range, "flat_frame needs 1 <= k <= n");
  FourierRows fr = fourier_rows(n);
  const int npairs = static_cast<int>(fr.pairs.size());
  std::vector<Vec> rows;
  if (k % 2 == 1) {
    rows.push_back(fr.constant);
    for (int f = 0; f < (k - 1) / 2; ++f) {
      rows.push_back(fr.pairs[f].first);
      rows.push_back(fr.pairs[f].second);
    }
  } else if (k / 2 <= npairs) {
    for (int f = 0; f < k / 2; ++f) {
      rows.push_back(fr.pairs[f].first);
      rows.push_back(fr.pairs[f].second);
    }
  } else {  // k = n with n even: every row, including both single rows
    rows.push_back(fr.constant);
    rows.push_back(fr.alternating.front());
    for (int f = 0; f < (k - 2) / 2; ++f) {
      rows.push_back(fr.pairs[f].first);
      rows.push_back(fr.pairs[f].second);
    }
  }
  return stack_rows(rows);
}

Mat flat_rotation(int n, int k) {
  Mat top = flat_frame(n, k);
  FourierRows fr = fourier_rows(n);
  // Append every Fourier row not already used; membership is by construction
  // order, so compare against the selected rows directly.
  std::vector<Vec> all;
  all.push_back(fr.constant);
  for (const Vec& a : fr.alternating) all.push_back(a);
  for (const auto& p : fr.pairs) {
    all.push_back(p.first);
    all.push_back(p.second);
  }
  Mat U(n, n);
  U.topRows(k) = top;
  int have = k;
  for (const Vec& row : all) {
    bool used = false;
    for (int i = 0; i < k && !used; ++i)
      used = (top.row(i).transpose() - row).lpNorm<Eigen::Infinity>() <= 1e-14;
    if (!used) U.row(have++) = row.transpose();
  }
  if (have != n) throw Error(errc::generation_failed, "flat_rotation: completion miscount");
  return U;
}

Mat flat_simplex_basis(int n, int k) {
  if (n < 2 || k < 1 || k > n)
    throw Error(errc::parameter_out_of_range, "flat_simplex_basis needs 1 <= k <= n");
  const int m = n + 1;
  FourierRows fr = fourier_rows(m);
  std::vector<Vec> rows;
  if (k % 2 == 0) {
    for (int f = 0; f < k / 2; ++f) {
      rows.push_back(fr.pairs[f].first);
      rows.push_back(fr.pairs[f].second);
    }
  } else if (m % 2 == 0) {
    rows.push_back(fr.alternating.front());
    for (int f = 0; f < (k - 1) / 2; ++f) {
      rows.push_back(fr.pairs[f].first);
      rows.push_back(fr.pairs[f].second);
    }
  } else if (k == 1 || k == n - 1) {
    // A flat unit vector orthogonal to ones needs +-1/sqrt(m) entries summing
    // to zero, impossible for odd m; the (n-k)-dim complement inherits the
    // obstruction.
    throw Error(errc::generation_failed,
                "no flat simplex frame exists for n even with k in {1, n-1}");
  } else {
    Mat F = gauss_newton_flat_frame(k, m, double(k) / m);
    for (int i = 0; i < k; ++i) rows.push_back(F.row(i));
  }

  // Complete to a full orthonormal basis of the complement of ones.
  Mat cols(m, k + 1);
  cols.col(0) = fr.constant;
  for (int i = 0; i < k; ++i) cols.col(i + 1) = rows[static_cast<size_t>(i)];
  Mat full = orthonormal_completion(cols);
  Mat B(n, m);
  B.topRows(k) = stack_rows(rows);
  B.bottomRows(n - k) = full.rightCols(n - k).transpose();
  return B;
}

ConvexBody regular_body(RegularKind kind, int n, ExtremalPosition position) {
  check_dim(n, 12);
  const bool john = position == ExtremalPosition::john;
  ConvexBody K;
  BodyCertificate cert;
  switch (kind) {
    case RegularKind::simplex: {
      Mat X = john_simplex_vertices(n);
      Mat W = X / double(n);  // unit vertex directions
      K = make_vpolytope(john ? X : W);
      K.A = -W.transpose();
      K.b = Vec::Constant(n + 1, john ? 1.0 : 1.0 / n);
      K.has_H = true;
      cert.contacts = john ? Mat(-W) : W;
      cert.weights = Vec::Constant(n + 1, n / (n + 1.0));
      cert.family = john ? "simplex_john" : "simplex_loewner";
      break;
    }
    case RegularKind::cube: {
      Mat A(2 * n, n);
      A << Mat::Identity(n, n), -Mat::Identity(n, n);
      const double offset = john ? 1.0 : 1.0 / std::sqrt(double(n));
      K = make_hpolytope(A, Vec::Constant(2 * n, offset));
      K.V = cube_vertices(n, offset);
      K.has_V = true;
      if (john) {
        cert.contacts = A.transpose();
        cert.weights = Vec::Constant(2 * n, 0.5);
      } else {
        cert.contacts = K.V;  // all vertices lie on the unit sphere
        cert.weights = Vec::Constant(K.V.cols(), n / std::pow(2.0, n));
      }
      cert.family = john ? "cube_john" : "cube_loewner";
      break;
    }
    case RegularKind::cross_polytope: {
      const double scale = john ? std::sqrt(double(n)) : 1.0;
      Mat V(n, 2 * n);
      V << scale * Mat::Identity(n, n), -scale * Mat::Identity(n, n);
      K = make_vpolytope(V);
      Mat normals = cube_vertices(n, 1.0 / std::sqrt(double(n)));
      K.A = normals.transpose();
      K.b = Vec::Constant(normals.cols(), john ? 1.0 : 1.0 / std::sqrt(double(n)));
      K.has_H = true;
      if (john) {
        cert.contacts = normals;  // facet touch points on the unit sphere
        cert.weights = Vec::Constant(normals.cols(), n / std::pow(2.0, n));
      } else {
        cert.contacts = V;
        cert.weights = Vec::Constant(2 * n, 0.5);
      }
      cert.family = john ? "cross_polytope_john" : "cross_polytope_loewner";
      break;
    }
  }
  K.cert = std::move(cert);
  return K;
}

ConvexBody john_envelope(int n, const std::vector<int>& J, double tau) {
  check_dim(n, 12);
  std::vector<int> idx = J;
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw Error(errc::parameter_out_of_range, "john_envelope: duplicate index in J");
  for (int j : idx)
    if (j < 1 || j > n - 1)
      throw Error(errc::parameter_out_of_range, "john_envelope: J must be a subset of {1..n-1}");
  const int l = static_cast<int>(idx.size());
  const double lo = std::sqrt((n - l) / double((l + 1) * n));
  tau = checked_param(tau, lo, 1.0, "john_envelope: tau outside [sqrt((n-|J|)/((|J|+1)n)), 1]");

  const double t2 = tau * tau;
  const double lam_a = n / ((n * t2 + 1.0) * std::pow(2.0, l));
  const double lam_b = n * n * t2 / ((n * t2 + 1.0) * std::pow(2.0, n - 1));
  const double coef_a = l > 0 ? safe_sqrt((1.0 - t2) / l) : 0.0;
  const double coef_bj = l > 0 ? safe_sqrt(((l + 1.0) * n * t2 + l - n) / (l * n * n * t2)) : 0.0;
  const double coef_bo = std::sqrt(n * t2 + 1.0) / (n * tau);
  std::vector<bool> in_J(n, false);
  for (int j : idx) in_J[j - 1] = true;

  std::vector<Vec> dirs;
  std::vector<double> weights;
  for (int mask = 0; mask < (1 << l); ++mask) {
    Vec a = Vec::Zero(n);
    for (int i = 0; i < l; ++i) a(idx[i] - 1) = ((mask >> i) & 1 ? 1.0 : -1.0) * coef_a;
    a(n - 1) = tau;
    if (std::abs(a.norm() - 1.0) > 1e-9)
      throw Error(errc::domain_error, "john_envelope: generator not unit");
    add_generator(dirs, weights, a, lam_a);
  }
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    Vec v(n);
    for (int j = 0; j < n - 1; ++j)
      v(j) = ((mask >> j) & 1 ? 1.0 : -1.0) * (in_J[j] ? coef_bj : coef_bo);
    v(n - 1) = -1.0 / (n * tau);
    if (std::abs(v.norm() - 1.0) > 1e-9)
      throw Error(errc::domain_error, "john_envelope: generator not unit");
    add_generator(dirs, weights, v, lam_b);
  }

  Mat A(dirs.size(), n);
  Mat contacts(n, dirs.size());
  Vec w(dirs.size());
  for (size_t i = 0; i < dirs.size(); ++i) {
    A.row(i) = dirs[i].transpose();
    contacts.col(i) = dirs[i];
    w(i) = weights[i];
  }
  ConvexBody K = make_hpolytope(A, Vec::Ones(A.rows()));
  BodyCertificate cert;
  cert.contacts = std::move(contacts);
  cert.weights = std::move(w);
  cert.family = "john_envelope";
  cert.param_tau = tau;
  K.cert = std::move(cert);
  return K;
}

ConvexBody outer_family(int n, int k, double t) {
  check_dim(n, 10);
  check_k(n, k);
  t = checked_param(t, 0.0, 2.0, "outer_family: t outside [0, 2]");
  const bool simplex_leg = !(n % 2 == 0 && (k == 1 || k == n - 1));
  if (t > 1.0 + kParamSlack && !simplex_leg)
    throw Error(errc::parameter_out_of_range,
                "outer_family: simplex leg unavailable for n even with k in {1, n-1}");

  Mat U = flat_rotation(n, k);
  Mat crossV(n, 2 * n);
  crossV << U, -U;  // columns are the cross-polytope vertices
  Mat cubeV = cube_vertices(n, 1.0 / std::sqrt(double(n)));

  std::vector<std::pair<double, const Mat*>> parts;
  Mat simplexV;
  BodyCertificate cert;
  if (t <= 0.5) {
    parts = {{1.0, &crossV}, {2.0 * t, &cubeV}};
    cert.contacts = crossV;
    cert.weights = Vec::Constant(crossV.cols(), 0.5);
  } else if (t <= 1.5) {
    if (t <= 1.0) {
      parts = {{2.0 * (1.0 - t), &crossV}, {1.0, &cubeV}};
    } else {
      simplexV = std::sqrt((n + 1.0) / n) * flat_simplex_basis(n, k);
      parts = {{1.0, &cubeV}, {2.0 * (t - 1.0), &simplexV}};
    }
    cert.contacts = cubeV;
    cert.weights = Vec::Constant(cubeV.cols(), n / std::pow(2.0, n));
  } else {
    simplexV = std::sqrt((n + 1.0) / n) * flat_simplex_basis(n, k);
    parts = {{2.0 * (2.0 - t), &cubeV}, {1.0, &simplexV}};
    cert.contacts = simplexV;
    cert.weights = Vec::Constant(simplexV.cols(), n / (n + 1.0));
  }

  int cols = 0;
  for (const auto& [scale, M] : parts)
    if (scale > 1e-14) cols += static_cast<int>(M->cols());
  Mat V(n, cols);
  int at = 0;
  for (const auto& [scale, M] : parts) {
    if (scale <= 1e-14) continue;
    V.middleCols(at, M->cols()) = scale * (*M);
    at += static_cast<int>(M->cols());
  }
  ConvexBody K = make_vpolytope(V);
  cert.family = "outer_family";
  cert.param_t = t;
  cert.param_k = k;
  K.cert = std::move(cert);
  return K;
}

ConvexBody high_asym_body(int n, int k, double s) {
  check_dim(n, 64);
  check_k(n, k);
  s = checked_param(s, 1.0, double(n), "high_asym_body: s outside [1, n]");
  Mat X = john_simplex_vertices(n);
  Mat W = X / double(n);
  const int m = n + 1;
  Mat A(2 * m, n);
  A.topRows(m) = -W.transpose();
  A.bottomRows(m) = W.transpose();
  Vec b(2 * m);
  b.head(m).setOnes();
  b.tail(m).setConstant(s);
  ConvexBody K = make_hpolytope(A, b);

  BodyCertificate cert;
  cert.contacts = -W;
  cert.weights = Vec::Constant(m, n / double(m));
  cert.john_asymmetry = s;
  cert.family = "high_asym";
  cert.param_s = s;
  cert.param_k = k;
  if (s >= critical_asymmetry(n, k) - 1e-9) {
    // Inscribed ball of the k-face spanned by the first k+1 vertices.
    Vec c = X.leftCols(k + 1).rowwise().mean();
    Mat span(n, k);
    for (int j = 0; j < k; ++j) span.col(j) = X.col(j) - c;
    Eigen::HouseholderQR<Mat> qr(span);
    KBall ball;
    ball.origin = c;
    ball.basis = qr.householderQ() * Mat::Identity(n, k);
    ball.radius = std::sqrt(n * (n + 1.0) / (k * (k + 1.0)));
    cert.kball = ball;
  }
  K.cert = std::move(cert);
  return K;
}

namespace {

// Shared shape of the two spiked-hull families: unit ball plus 4k spikes, an
// inscribed k-ball at the spike center, and an enclosing certified polytope.
ConvexBody spiked_hull(int n, int k, double s, double rho, double center_height,
                       std::vector<int> J, double tau, const char* family) {
  Vec c = Vec::Zero(n);
  c(n - 1) = center_height;
  Mat apex(n, 4 * k);
  for (int j = 0; j < k; ++j) {
    Vec spike = Vec::Zero(n);
    spike(j) = rho;
    apex.col(4 * j + 0) = c + spike;
    apex.col(4 * j + 1) = c - spike;
    apex.col(4 * j + 2) = (-c + spike) / s;
    apex.col(4 * j + 3) = (-c - spike) / s;
  }
  ConvexBody K = make_ballhull(Vec::Zero(n), 1.0, apex);
  auto enclosing = std::make_shared<ConvexBody>(john_envelope(n, J, tau));
  BodyCertificate cert;
  cert.contacts = enclosing->cert->contacts;
  cert.weights = enclosing->cert->weights;
  cert.enclosing = enclosing;
  KBall ball;
  ball.origin = c;
  ball.basis = Mat::Identity(n, n).leftCols(k);
  ball.radius = rho / std::sqrt(double(k));
  cert.kball = ball;
  cert.john_asymmetry = s;
  cert.family = family;
  cert.param_s = s;
  cert.param_k = k;
  cert.param_tau = tau;
  K.cert = std::move(cert);
  return K;
}

}  // namespace

ConvexBody mid_asym_body(int n, int k, double s) {
  check_dim(n, 12);
  check_k(n, k);
  s = checked_param(s, 1.0 + 2.0 / n, critical_asymmetry(n, k),
                    "mid_asym_body: s outside [1+2/n, critical_asymmetry]");
  const double rho = std::sqrt(n * (s + 1.0) / 2.0);
  const double height = std::sqrt(n * (s - 1.0) / 2.0);
  std::vector<int> J;
  for (int j = k + 1; j <= n - 1; ++j) J.push_back(j);
  return spiked_hull(n, k, s, rho, height, std::move(J),
                     std::sqrt(2.0 / (n * (s - 1.0))), "mid_asym");
}

ConvexBody small_asym_body(int n, int k, double s) {
  check_dim(n, 12);
  check_k(n, k);
  s = checked_param(s, 1.0, 1.0 + 2.0 / n, "small_asym_body: s outside [1, 1+2/n]");
  const double mu = mu_scalar(n, k, s);
  const double rho = std::sqrt(mu);
  std::vector<int> J;
  for (int j = 1; j <= k; ++j) J.push_back(j);
  return spiked_hull(n, k, s, rho, safe_sqrt(mu - n), std::move(J), tau_scalar(n, k, mu),
                     "small_asym");
}

ConvexBody asym_body(int n, int k, double s) {
  check_dim(n, 12);
  check_k(n, k);
  s = checked_param(s, 1.0, double(n), "asym_body: s outside [1, n]");
  if (s <= 1.0 + 2.0 / n) return small_asym_body(n, k, s);
  if (s <= critical_asymmetry(n, k)) return mid_asym_body(n, k, s);
  return high_asym_body(n, k, s);
}

ConvexBody rounding_body(int n, double s) {
  check_dim(n, 12);
  s = checked_param(s, 1.0, double(n), "rounding_body: s outside [1, n]");
  Mat apex = Mat::Zero(n, 2);
  apex(n - 1, 0) = -std::sqrt(n * s);
  apex(n - 1, 1) = std::sqrt(n / s);  // absorbed into the ball at s = n
  ConvexBody K = make_ballhull(Vec::Zero(n), 1.0, apex);

  std::vector<int> J;
  for (int j = 1; j <= n - 1; ++j) J.push_back(j);
  auto enclosing = std::make_shared<ConvexBody>(john_envelope(n, J, std::sqrt(s / n)));
  BodyCertificate cert;
  cert.contacts = enclosing->cert->contacts;
  cert.weights = enclosing->cert->weights;
  cert.enclosing = enclosing;
  cert.john_asymmetry = s;
  cert.minkowski_value = 2.0 * s / (s + 1.0);
  Vec center = Vec::Zero(n);
  center(n - 1) = -std::sqrt(n * s) * (s - 1.0) / (3.0 * s + 1.0);
  cert.minkowski_center = center;
  // Equality directions of the central-symmetry inclusion: the spike
  // direction plus a latitude circle sampled at regular-simplex spread.
  const double h = 1.0 / std::sqrt(n * s);
  Mat equator = unit_simplex_dirs(n - 1);
  Mat dirs(n, n + 1);
  dirs.col(0) = Vec::Zero(n);
  dirs(n - 1, 0) = -1.0;
  for (int i = 0; i <= n - 1; ++i) {
    Vec d = Vec::Zero(n);
    d.head(n - 1) = std::sqrt(1.0 - h * h) * equator.col(i);
    d(n - 1) = h;
    dirs.col(i + 1) = d;
  }
  cert.asym_directions = std::move(dirs);
  cert.family = "rounding";
  cert.param_s = s;
  K.cert = std::move(cert);
  return K;
}

}  // namespace geo
