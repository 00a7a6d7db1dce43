#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monoplay/linalg.hpp"

namespace monoplay {

enum class OperatorKind { kLinear, kBilinear, kPerturbedBilinear, kQuadraticMin };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

// F(z) = A z + b + epsilon * |z|^2 z, with smoothness constants certified on
// the ball B(0, domain_radius). Immutable once built; construct through the
// make_* factories below.
class MonotoneOperator {
 public:
  OperatorKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(b_.size()); }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }
  double epsilon() const { return epsilon_; }
  double ell() const { return ell_; }
  double lambda() const { return lambda_; }
  double domain_radius() const { return domain_radius_; }
  // Radius D of the per-player balls the instance was declared against.
  double D() const { return D_; }
  const std::optional<Vec>& equilibrium() const { return equilibrium_; }

  bool is_affine() const { return kind_ != OperatorKind::kPerturbedBilinear; }

  // Per-player block sizes: two halves for min-max kinds, one block otherwise.
  std::vector<int> player_dims() const;

  Vec eval(const Vec& z) const;
  Mat jacobian(const Vec& z) const;

  friend MonotoneOperator make_linear(const Mat&, const Vec&, double, bool);
  friend MonotoneOperator make_bilinear(const Mat&, const Vec&, const Vec&, double);
  friend MonotoneOperator make_perturbed_bilinear(const Mat&, const Vec&, const Vec&, double,
                                                  double);
  friend MonotoneOperator make_quadratic_min(const Mat&, const Vec&, double);

 private:
  MonotoneOperator() = default;
  void check_dim(const Vec& z) const;

  OperatorKind kind_ = OperatorKind::kLinear;
  Mat A_;
  Vec b_;
  double epsilon_ = 0.0;
  double ell_ = 0.0;
  double lambda_ = 0.0;
  double domain_radius_ = 0.0;
  double D_ = 0.0;
  std::optional<Vec> equilibrium_;
};

// General affine F(z) = A z + b. With validate, rejects A whose symmetric part is
// not PSD and equilibria outside B(0, D).
MonotoneOperator make_linear(const Mat& A, const Vec& b, double D, bool validate = true);

// Min-max gradient of f(x, y) = x^T M y + b1^T x + b2^T y.
MonotoneOperator make_bilinear(const Mat& M, const Vec& b1, const Vec& b2, double D);

// Bilinear plus epsilon * |z|^2 z; ell and lambda are certified on B(0, 3D).
MonotoneOperator make_perturbed_bilinear(const Mat& M, const Vec& b1, const Vec& b2,
                                         double epsilon, double D);

// Gradient of f(x) = 0.5 x^T S x + b^T x with S symmetric positive definite.
MonotoneOperator make_quadratic_min(const Mat& S, const Vec& b, double D);

// f(x) - f(x*) = 0.5 (Sx + b)^T S^{-1} (Sx + b); quadratic-min kind only.
double suboptimality(const MonotoneOperator& op, const Vec& x);

struct SmoothnessReport {
  bool monotone = true;
  double min_inner = 0.0;  // smallest sampled <F(z)-F(z'), z-z'>
  double ell_hat = 0.0;
  double lambda_hat = 0.0;
  bool ell_violated = false;
  bool lambda_violated = false;
  // Only meaningful for affine kinds: smallest eigenvalue of (A + A^T)/2.
  std::optional<double> sym_part_min_eig;
};

// Seeded sampling of pairs in B(0, domain_radius).
SmoothnessReport check_monotone_and_smooth(const MonotoneOperator& op, int num_samples,
                                           std::uint64_t seed, double tol);

// K-player game whose concatenated own-gradients equal op.eval.
struct GameSpec {
  std::vector<int> dims;
  std::vector<std::function<double(const Vec&)>> costs;
  MonotoneOperator op;
  // True when every f_k is affine in the player's own block.
  bool own_affine = false;

  int players() const { return static_cast<int>(dims.size()); }
};

// Rebuilds the game behind a bilinear, perturbed-bilinear or quadratic-min
// operator. Throws UnsupportedInstance for the general linear kind.
GameSpec game_for(const MonotoneOperator& op);

// Splits z into per-player blocks according to dims.
std::vector<Vec> split_blocks(const Vec& z, const std::vector<int>& dims);

}  // namespace monoplay
