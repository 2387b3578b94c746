#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace geo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error taxonomy. Every throwing precondition names one of these so the CLI
// can map failures to exit codes and callers can branch on the cause.
enum class errc {
  degenerate_input,
  origin_not_interior,
  unbounded_body,
  empty_interior,
  wrong_dimension,
  dimension_too_large,
  representation_unavailable,
  not_in_john_position,
  not_in_loewner_position,
  parameter_out_of_range,
  domain_error,
  containment_violated,
  generation_failed,
  no_convergence,
  invalid_body,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

const char* errc_name(errc c);

// Central tolerances. Values are part of the library contract; tests pin them.
namespace tol {
inline constexpr double vertex_dedup = 1e-12;        // duplicate vertex merge
inline constexpr double interior_radius = 1e-9;      // "strictly interior" slack
inline constexpr double contact = 1e-6;              // contact identification
inline constexpr double john_residual = 1e-6;        // john_verify pass level
inline constexpr double decomposition_prune = 1e-10; // drop tiny John weights
inline constexpr double orthonormal = 1e-10;         // subspace basis check
inline constexpr double affine_det = 1e-12;          // invertibility floor
inline constexpr double mvee_eps = 1e-9;             // default MVEE duality gap
inline constexpr double newton_kkt = 1e-8;           // inscribed ellipsoid KKT
inline constexpr double bound_pass = 1e-7;           // bound-report slack level
}  // namespace tol

// Deterministic RNG: splitmix64 core + hand-rolled transforms so streams do
// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // standard normal (Box-Muller)
  Vec normal_vec(int n);
  Vec unit_vector(int n);                // uniform on the sphere
  int uniform_int(int lo, int hi);       // inclusive bounds

  // Derive an independent child stream (splitmix-style), for per-case seeds.
  std::uint64_t derive(std::uint64_t salt) const;

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Set of frequently needed helpers.
Mat orthonormal_completion(const Mat& basis);  // extend n×k orthonormal columns to n×n
bool is_orthonormal(const Mat& basis, double eps = tol::orthonormal);

}  // namespace geo
