#include "geo/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "geo/constructions.hpp"
#include "geo/ellipsoid.hpp"
#include "geo/lp.hpp"
#include "geo/optim.hpp"
#include "geo/sampling.hpp"

namespace geo {
namespace {

constexpr double kBindTol = 1e-8;   // relative slack below which an LP row counts as binding
constexpr double kEqualTol = 1e-7;  // relative tolerance for support-equality directions
constexpr int kSpanMax = 160;       // cap on directions fed to the positive-span LP

Mat hcat(const Mat& M, const Mat& N) {
  if (M.cols() == 0) return N;
  if (N.cols() == 0) return M;
  Mat out(M.rows(), M.cols() + N.cols());
  out.leftCols(M.cols()) = M;
  out.rightCols(N.cols()) = N;
  return out;
}

// Coarse grids for paths where every direction becomes an LP row; the dense
// simplex tableau makes multi-thousand-row programs too expensive.
Mat coarse_directions(int n) {
  if (n == 2) return circle_grid(512);
  if (n == 3) return icosphere(2);
  Rng rng(0x00a57a11u + 131u * static_cast<unsigned>(n));
  Mat D = random_directions(n, 256, rng);
  return hcat(D, Mat(-D));  // symmetric pairs keep the covering LP bounded
}

// Dense grids for direct support evaluation (closed-form, no LP per direction).
Mat sweep_directions(int n) {
  if (n == 2) return circle_grid(4096);
  if (n == 3) return icosphere(5);
  Rng rng(0x00a57a12u + 131u * static_cast<unsigned>(n));
  return random_directions(n, 2000, rng);
}

// Copy with both facet and vertex data available so supports are row maxima.
ConvexBody with_both_forms(const ConvexBody& K) {
  ConvexBody body = K;
  try {
    if (!body.has_H) ensure_hform(body);
    if (!body.has_V) ensure_vform(body);
  } catch (const Error& e) {
    if (e.code() == errc::dimension_too_large)
      throw Error(errc::representation_unavailable,
                  "asymmetry: facet/vertex enumeration exceeds the supported size");
    throw;
  }
  return body;
}

// min rho s.t. a'z - h_K(a) rho <= -h_K(-a) over the given direction columns.
// Feasible (z, rho) certify -(K - c) within rho (K - c) for c = z / (1 + rho)
// as far as these directions can see; with the full facet set this is exact.
struct CoverLp {
  double rho = 1.0;
  Vec center;
  Mat binding;  // direction columns whose rows are tight at the optimum
};

CoverLp solve_cover_lp(const ConvexBody& K, const Mat& dirs, const char* what) {
  const int n = K.n;
  const int m = static_cast<int>(dirs.cols());
  Mat A(m, n + 1);
  Vec b(m);
  Vec hp(m), hm(m);
  for (int j = 0; j < m; ++j) {
    Vec a = dirs.col(j);
    const double len = a.norm();
    a /= len;
    hp[j] = support(K, a);
    hm[j] = support(K, -a);
    A.row(j).head(n) = a.transpose();
    A(j, n) = -hp[j];
    b[j] = -hm[j];
  }
  LpProblem lp;
  lp.c = Vec::Zero(n + 1);
  lp.c[n] = 1.0;
  lp.A_ub = A;
  lp.b_ub = b;
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::optimal)
    throw Error(errc::generation_failed, std::string(what) + ": covering LP did not solve");

  CoverLp out;
  out.rho = res.x[n];
  out.center = res.x.head(n) / (1.0 + out.rho);
  std::vector<int> tight;
  for (int j = 0; j < m; ++j) {
    const double slack = b[j] - A.row(j).dot(res.x);
    const double scale = std::max({1.0, std::abs(hp[j]) * std::abs(out.rho), std::abs(hm[j])});
    if (slack <= kBindTol * scale) tight.push_back(j);
  }
  out.binding.resize(n, static_cast<int>(tight.size()));
  for (size_t i = 0; i < tight.size(); ++i)
    out.binding.col(static_cast<int>(i)) = dirs.col(tight[i]).normalized();
  return out;
}

Mat axis_directions(int n) {
  Mat D(n, 2 * n);
  D.setZero();
  for (int i = 0; i < n; ++i) {
    D(i, 2 * i) = 1.0;
    D(i, 2 * i + 1) = -1.0;
  }
  return D;
}

Mat normalized_apex_pairs(const ConvexBody& K) {
  const int m = static_cast<int>(K.apexes.cols());
  Mat D(K.n, 2 * m);
  int used = 0;
  for (int j = 0; j < m; ++j) {
    const double len = K.apexes.col(j).norm();
    if (len < 1e-12) continue;
    D.col(used++) = K.apexes.col(j) / len;
    D.col(used++) = -K.apexes.col(j) / len;
  }
  return D.leftCols(used);
}

// True when the unit columns of D positively span R^n: D must have full rank
// and admit a convex combination of zero with uniformly positive weights.
bool positively_spans(const Mat& D) {
  const int n = static_cast<int>(D.rows());
  int m = static_cast<int>(D.cols());
  if (m < n + 1) return false;
  Mat S = D;
  if (m > kSpanMax) {
    // Farthest-point subsample: equality sets can be a dense cap plus a few
    // isolated directions, and those isolated ones decide the span.
    std::vector<int> picked;
    picked.reserve(kSpanMax);
    picked.push_back(0);
    std::vector<double> score(m);  // max cosine against the picked set
    for (int j = 0; j < m; ++j) score[j] = D.col(j).dot(D.col(0));
    while (static_cast<int>(picked.size()) < kSpanMax) {
      int best = 0;
      for (int j = 1; j < m; ++j)
        if (score[j] < score[best]) best = j;
      if (score[best] >= 1.0 - 1e-12) break;  // only duplicates remain
      picked.push_back(best);
      for (int j = 0; j < m; ++j) score[j] = std::max(score[j], D.col(j).dot(D.col(best)));
    }
    S.resize(n, static_cast<int>(picked.size()));
    for (size_t i = 0; i < picked.size(); ++i) S.col(static_cast<int>(i)) = D.col(picked[i]);
    m = static_cast<int>(S.cols());
  }
  Eigen::ColPivHouseholderQR<Mat> qr(S);
  qr.setThreshold(1e-9);
  if (qr.rank() < n) return false;

  // max t  s.t.  S lambda = 0, sum lambda = 1, t <= lambda_i
  LpProblem lp;
  lp.c = Vec::Zero(m + 1);
  lp.c[m] = 1.0;
  lp.maximize = true;
  lp.A_eq.resize(n + 1, m + 1);
  lp.A_eq.setZero();
  lp.A_eq.block(0, 0, n, m) = S;
  lp.A_eq.row(n).head(m).setOnes();
  lp.b_eq = Vec::Zero(n + 1);
  lp.b_eq[n] = 1.0;
  lp.A_ub.resize(m, m + 1);
  lp.A_ub.setZero();
  for (int i = 0; i < m; ++i) {
    lp.A_ub(i, i) = -1.0;
    lp.A_ub(i, m) = 1.0;
  }
  lp.b_ub = Vec::Zero(m);
  LpResult res = solve_lp(lp);
  return res.status == LpStatus::optimal && res.value > 1e-9;
}

}  // namespace

AsymmetryReport minkowski_asymmetry(const ConvexBody& K) {
  const int n = K.n;
  AsymmetryReport report;

  if (K.kind == BodyKind::ellipsoid) {
    report.value = 1.0;
    report.witness_center = K.ec;
    report.binding_directions = axis_directions(n);
    report.method = "exact-LP";
    return report;
  }

  if (K.kind == BodyKind::ballhull) {
    if (K.cert && K.cert->minkowski_value && K.cert->minkowski_center) {
      report.value = *K.cert->minkowski_value;
      report.witness_center = *K.cert->minkowski_center;
      report.binding_directions = K.cert->asym_directions;
      report.method = "certificate";
      return report;
    }
    Mat dirs = hcat(coarse_directions(n), axis_directions(n));
    dirs = hcat(dirs, normalized_apex_pairs(K));
    if (K.cert) {
      dirs = hcat(dirs, K.cert->contacts);
      dirs = hcat(dirs, K.cert->asym_directions);
    }
    CoverLp lp = solve_cover_lp(K, dirs, "minkowski_asymmetry");
    report.value = lp.rho;
    report.witness_center = lp.center;
    report.binding_directions = lp.binding;
    report.method = "sampled-lower-bound";
    return report;
  }

  // Polytopes: checking the covering on the facet normals of K is exact
  // because rho (K - c) has the same outward normals.
  ConvexBody body = with_both_forms(K);
  CoverLp lp = solve_cover_lp(body, body.A.transpose(), "minkowski_asymmetry");
  report.value = lp.rho;
  report.witness_center = lp.center;
  report.binding_directions = lp.binding;
  report.method = "exact-LP";
  return report;
}

AsymmetryReport john_asymmetry(const ConvexBody& K) {
  const int n = K.n;
  PositionReport pos = john_verify(K);
  if (!pos.in_position)
    throw Error(errc::not_in_john_position,
                "john_asymmetry: the John ellipsoid of the body is not the unit ball");

  AsymmetryReport report;
  report.witness_center = Vec::Zero(n);

  switch (K.kind) {
    case BodyKind::ellipsoid: {
      report.value = 1.0;
      report.binding_directions = axis_directions(n);
      report.method = "exact-LP";
      return report;
    }
    case BodyKind::vpolytope:
    case BodyKind::hpolytope: {
      // -K within s K holds iff every reflected vertex has gauge at most s,
      // equivalently every facet ratio h(-a) / b is at most s.
      double best = 1.0;
      std::vector<int> arg_vertices;
      if (K.has_V) {
        for (int j = 0; j < K.V.cols(); ++j) {
          const double g = gauge(K, Vec(-K.V.col(j)));
          if (g > best + kEqualTol) arg_vertices.clear();
          if (g >= best - kEqualTol) arg_vertices.push_back(j);
          best = std::max(best, g);
        }
      }
      std::vector<int> arg_facets;
      if (K.has_H) {
        for (int j = 0; j < K.A.rows(); ++j) {
          const double ratio = support(K, Vec(-K.A.row(j).transpose())) / K.b[j];
          if (ratio > best + kEqualTol) arg_facets.clear();
          if (ratio >= best - kEqualTol) arg_facets.push_back(j);
          best = std::max(best, ratio);
        }
      }
      report.value = best;
      if (!arg_facets.empty()) {
        report.binding_directions.resize(n, static_cast<int>(arg_facets.size()));
        for (size_t i = 0; i < arg_facets.size(); ++i)
          report.binding_directions.col(static_cast<int>(i)) = K.A.row(arg_facets[i]).transpose();
      } else {
        report.binding_directions.resize(n, static_cast<int>(arg_vertices.size()));
        for (size_t i = 0; i < arg_vertices.size(); ++i)
          report.binding_directions.col(static_cast<int>(i)) = -K.V.col(arg_vertices[i]).normalized();
      }
      report.method = "exact-LP";
      return report;
    }
    case BodyKind::ballhull: {
      // For a hull of the unit ball and apexes, -K within s K reduces to the
      // reflected apexes: the ball part is symmetric and already inside K.
      double best = 1.0;
      std::vector<int> arg_apexes;
      if (K.center.norm() <= 1e-12) {
        for (int j = 0; j < K.apexes.cols(); ++j) {
          const double g = gauge(K, Vec(-K.apexes.col(j)));
          if (g > best + kEqualTol) arg_apexes.clear();
          if (g >= best - kEqualTol) arg_apexes.push_back(j);
          best = std::max(best, g);
        }
      }
      if (K.cert && K.cert->contacts.cols() > 0) {
        for (int j = 0; j < K.cert->contacts.cols(); ++j) {
          const Vec u = K.cert->contacts.col(j);
          best = std::max(best, support(K, Vec(-u)) / support(K, u));
        }
      }
      if (n <= 3) {  // closed-form supports make a dense cross-check cheap
        const Mat sweep = sweep_directions(n);
        int arg = -1;
        for (int j = 0; j < sweep.cols(); ++j) {
          const Vec a = sweep.col(j);
          const double ratio = support(K, Vec(-a)) / support(K, a);
          if (ratio > best) arg = j;
          best = std::max(best, ratio);
        }
        if (n == 2 && arg >= 0) {
          const double theta = std::atan2(sweep(1, arg), sweep(0, arg));
          const double step = 2.0 * M_PI / sweep.cols();
          auto neg_ratio = [&](double t) {
            Vec a(2);
            a << std::cos(t), std::sin(t);
            return -support(K, Vec(-a)) / support(K, a);
          };
          const double refined = golden_min(neg_ratio, theta - step, theta + step);
          best = std::max(best, -neg_ratio(refined));
        }
        report.sweep_checked = true;
      }
      report.value = best;
      if (K.cert && K.cert->asym_directions.cols() > 0) {
        report.binding_directions = K.cert->asym_directions;
      } else {
        report.binding_directions.resize(n, static_cast<int>(arg_apexes.size()));
        for (size_t i = 0; i < arg_apexes.size(); ++i)
          report.binding_directions.col(static_cast<int>(i)) = -K.apexes.col(arg_apexes[i]).normalized();
      }
      report.method = "certificate";
      return report;
    }
  }
  throw Error(errc::representation_unavailable, "john_asymmetry: unknown body kind");
}

CenterCheck verify_minkowski_center(const ConvexBody& K, const Vec& c, double s) {
  const int n = K.n;
  if (c.size() != n)
    throw Error(errc::parameter_out_of_range, "verify_minkowski_center: center dimension mismatch");
  if (s < 1.0 - 1e-9)
    throw Error(errc::parameter_out_of_range, "verify_minkowski_center: requires s >= 1");

  ConvexBody body = K;
  if (body.kind == BodyKind::hpolytope && !body.has_V) body = with_both_forms(K);

  Mat dirs = hcat(sweep_directions(n), axis_directions(n));
  if (body.kind == BodyKind::ballhull) dirs = hcat(dirs, normalized_apex_pairs(body));
  if (body.has_H) dirs = hcat(dirs, Mat(body.A.transpose()));
  if (body.cert) {
    dirs = hcat(dirs, body.cert->asym_directions);
    dirs = hcat(dirs, body.cert->contacts);
  }

  CenterCheck check;
  std::vector<int> equal_cols;
  for (int j = 0; j < dirs.cols(); ++j) {
    Vec a = dirs.col(j);
    const double len = a.norm();
    if (len < 1e-12) continue;
    a /= len;
    ++check.directions_tested;
    const double hp = support(body, a) - a.dot(c);
    const double hm = support(body, Vec(-a)) + a.dot(c);
    const double scale = std::max({1.0, std::abs(hp), s * std::abs(hm)});
    const double rel = (hp - s * hm) / scale;
    check.max_violation = std::max(check.max_violation, rel);
    if (std::abs(rel) <= kEqualTol) equal_cols.push_back(j);
  }

  check.equality_directions.resize(n, static_cast<int>(equal_cols.size()));
  for (size_t i = 0; i < equal_cols.size(); ++i)
    check.equality_directions.col(static_cast<int>(i)) = dirs.col(equal_cols[i]).normalized();
  check.origin_interior =
      equal_cols.empty() ? false : positively_spans(check.equality_directions);
  check.pass = check.max_violation <= kEqualTol && check.origin_interior;
  return check;
}

GapScan asymmetry_gap_scan(int n, const std::vector<double>& s_grid) {
  if (n < 2) throw Error(errc::parameter_out_of_range, "asymmetry_gap_scan: requires n >= 2");
  if (n > 6) throw Error(errc::dimension_too_large, "asymmetry_gap_scan: supported up to n = 6");
  GapScan scan;
  scan.rows.reserve(s_grid.size());
  for (double s : s_grid) {
    const ConvexBody K = rounding_body(n, s);
    GapRow row;
    row.s = s;
    row.john = john_asymmetry(K).value;
    row.minkowski = minkowski_asymmetry(K).value;
    row.ratio = row.john / row.minkowski;
    scan.rows.push_back(row);
    scan.max_ratio = std::max(scan.max_ratio, row.ratio);
  }
  return scan;
}

}  // namespace geo
