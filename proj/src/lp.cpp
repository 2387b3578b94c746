#include "geo/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace geo {
namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;
constexpr double kCostTol = 1e-11;

// Dense tableau simplex on the standard-form problem produced below.
// Dantzig pricing with a switch to Bland's rule after a stall budget.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_(rows + 1, cols + 1), basis_(rows) {
    t_.setZero();
  }

  double& at(int i, int j) { return t_(i, j); }
  double& rhs(int i) { return t_(i, n_); }
  double& cost(int j) { return t_(m_, j); }
  double& obj() { return t_(m_, n_); }
  int basis(int i) const { return basis_[i]; }
  void set_basis(int i, int j) { basis_[i] = j; }

  // Returns false on unboundedness.
  bool iterate(int iter_cap) {
    int iter = 0;
    const int bland_after = 5000;
    while (iter++ < iter_cap) {
      int enter = -1;
      if (iter < bland_after) {
        double best = -kCostTol;
        for (int j = 0; j < n_; ++j) {
          if (t_(m_, j) < best) { best = t_(m_, j); enter = j; }
        }
      } else {
        for (int j = 0; j < n_; ++j) {
          if (t_(m_, j) < -kCostTol) { enter = j; break; }
        }
      }
      if (enter < 0) return true;  // optimal

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        double a = t_(i, enter);
        if (a > kPivotTol) {
          double ratio = t_(i, n_) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
    throw Error(errc::no_convergence, "simplex: iteration cap exceeded");
  }

  void pivot(int row, int col) {
    double p = t_(row, col);
    t_.row(row) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  int m_, n_;
  Mat t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  const int nv = static_cast<int>(p.c.size());
  const int mu = static_cast<int>(p.A_ub.rows());
  const int me = static_cast<int>(p.A_eq.rows());
  const int m = mu + me;

  Vec c = p.maximize ? Vec(-p.c) : p.c;

  // Standard form: x = xp - xm, slack s >= 0 on <= rows (sign-adjusted so the
  // right-hand side is nonnegative), artificials where no identity column is
  // available. Column layout: [xp | xm | slacks | artificials].
  Mat A(m, nv);
  Vec b(m);
  std::vector<int> slack_sign(m, 0);  // +1 slack, -1 surplus, 0 none (eq row)
  for (int i = 0; i < mu; ++i) {
    A.row(i) = p.A_ub.row(i);
    b[i] = p.b_ub[i];
    slack_sign[i] = 1;
  }
  for (int i = 0; i < me; ++i) {
    A.row(mu + i) = p.A_eq.row(i);
    b[mu + i] = p.b_eq[i];
  }
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
      slack_sign[i] = -slack_sign[i];
    }
  }

  int n_slack = mu;
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i) {
    if (slack_sign[i] != 1) art_rows.push_back(i);  // surplus and eq rows need artificials
  }
  int n_art = static_cast<int>(art_rows.size());
  int ncols = 2 * nv + n_slack + n_art;

  Tableau tab(m, ncols);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nv; ++j) {
      tab.at(i, j) = A(i, j);
      tab.at(i, nv + j) = -A(i, j);
    }
    tab.rhs(i) = b[i];
  }
  int scol = 2 * nv;
  for (int i = 0; i < mu; ++i) tab.at(i, scol + i) = slack_sign[i];
  int acol = 2 * nv + n_slack;
  {
    int k = 0;
    for (int i : art_rows) tab.at(i, acol + k++) = 1.0;
  }

  // Initial basis: slack columns where slack_sign=+1, artificials elsewhere.
  {
    int k = 0;
    for (int i = 0; i < m; ++i) {
      if (slack_sign[i] == 1) {
        tab.set_basis(i, scol + i);
      } else {
        tab.set_basis(i, acol + k++);
      }
    }
  }

  const int iter_cap = 50000 + 200 * (m + ncols);

  // Phase 1: minimize sum of artificials.
  if (n_art > 0) {
    for (int k = 0; k < n_art; ++k) tab.cost(acol + k) = 1.0;
    for (int i : art_rows) tab.t_.row(m) -= tab.t_.row(i);
    if (!tab.iterate(iter_cap)) {
      throw Error(errc::no_convergence, "simplex: phase 1 unbounded (internal)");
    }
    if (-tab.obj() > kFeasTol) return {LpStatus::infeasible, Vec(), 0.0};
    // Drive remaining artificials out of the basis if possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis(i) >= acol) {
        int enter = -1;
        for (int j = 0; j < acol; ++j) {
          if (std::abs(tab.at(i, j)) > 1e-7) { enter = j; break; }
        }
        if (enter >= 0) tab.pivot(i, enter);
        // else: redundant row; its artificial stays basic at value ~0.
      }
    }
  }

  // Phase 2: original objective. Artificial columns are frozen out by making
  // them prohibitively expensive to re-enter.
  tab.t_.row(m).setZero();
  for (int j = 0; j < nv; ++j) {
    tab.cost(j) = c[j];
    tab.cost(nv + j) = -c[j];
  }
  for (int k = 0; k < n_art; ++k) tab.cost(acol + k) = 1e30;
  for (int i = 0; i < m; ++i) {
    int bj = tab.basis(i);
    double cb = tab.cost(bj);
    if (cb != 0.0) tab.t_.row(m) -= cb * tab.t_.row(i);
  }
  if (!tab.iterate(iter_cap)) return {LpStatus::unbounded, Vec(), 0.0};

  Vec xfull = Vec::Zero(ncols);
  for (int i = 0; i < m; ++i) {
    if (tab.basis(i) < ncols) xfull[tab.basis(i)] = tab.rhs(i);
  }
  Vec x(nv);
  for (int j = 0; j < nv; ++j) x[j] = xfull[j] - xfull[nv + j];
  double value = p.c.dot(x);
  return {LpStatus::optimal, x, value};
}

LpResult solve_lp(const Vec& c, const Mat& A_ub, const Vec& b_ub, bool maximize) {
  LpProblem p;
  p.c = c;
  p.A_ub = A_ub;
  p.b_ub = b_ub;
  p.A_eq = Mat(0, c.size());
  p.b_eq = Vec(0);
  p.maximize = maximize;
  return solve_lp(p);
}

}  // namespace geo
