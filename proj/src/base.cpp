#include "geo/base.hpp"

#include <cmath>

namespace geo {

const char* errc_name(errc c) {
  switch (c) {
    case errc::degenerate_input: return "DegenerateInput";
    case errc::origin_not_interior: return "OriginNotInterior";
    case errc::unbounded_body: return "UnboundedBody";
    case errc::empty_interior: return "EmptyInterior";
    case errc::wrong_dimension: return "WrongDimension";
    case errc::dimension_too_large: return "DimensionTooLarge";
    case errc::representation_unavailable: return "RepresentationUnavailable";
    case errc::not_in_john_position: return "NotInJohnPosition";
    case errc::not_in_loewner_position: return "NotInLoewnerPosition";
    case errc::parameter_out_of_range: return "ParameterOutOfRange";
    case errc::domain_error: return "DomainError";
    case errc::containment_violated: return "ContainmentViolated";
    case errc::generation_failed: return "GenerationFailed";
    case errc::no_convergence: return "NoConvergence";
    case errc::invalid_body: return "InvalidBody";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

std::uint64_t Rng::next_u64() {
  // xorshift-star step over mt19937_64 would be overkill; splitmix64 keeps the
  // stream portable and is plenty for test-case generation.
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return (next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do { u1 = uniform(); } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Vec Rng::normal_vec(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vec Rng::unit_vector(int n) {
  while (true) {
    Vec v = normal_vec(n);
    double nv = v.norm();
    if (nv > 1e-12) return v / nv;
  }
}

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::uint64_t Rng::derive(std::uint64_t salt) const {
  std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 0x632be59bd9b4e019ULL));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Mat orthonormal_completion(const Mat& basis) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  Mat full(n, n);
  full.leftCols(k) = basis;
  int have = k;
  // Gram-Schmidt against coordinate candidates; robust enough at n <= 8.
  for (int j = 0; j < n && have < n; ++j) {
    Vec cand = Vec::Zero(n);
    cand[j] = 1.0;
    for (int i = 0; i < have; ++i) cand -= full.col(i).dot(cand) * full.col(i);
    // re-orthogonalize once for stability
    for (int i = 0; i < have; ++i) cand -= full.col(i).dot(cand) * full.col(i);
    double nc = cand.norm();
    if (nc > 1e-8) full.col(have++) = cand / nc;
  }
  if (have < n) throw Error(errc::degenerate_input, "orthonormal_completion: basis not extendable");
  return full;
}

bool is_orthonormal(const Mat& basis, double eps) {
  Mat g = basis.transpose() * basis;
  return (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= eps;
}

}  // namespace geo
