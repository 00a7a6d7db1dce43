#include "monoplay/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "monoplay/errors.hpp"

namespace monoplay {

namespace {

void require_positive_radius(double D) {
  if (!(D > 0.0) || !std::isfinite(D)) throw ConfigError("radius D must be positive and finite");
}

Mat bilinear_matrix(const Mat& M) {
  const Eigen::Index m = M.rows();
  Mat A = Mat::Zero(2 * m, 2 * m);
  A.topRightCorner(m, m) = M;
  A.bottomLeftCorner(m, m) = -M.transpose();
  return A;
}

bool blocks_within(const Vec& z, const std::vector<int>& dims, double D) {
  for (const Vec& blk : split_blocks(z, dims))
    if (blk.norm() > D * (1.0 + 1e-12)) return false;
  return true;
}

}  // namespace

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kLinear: return "linear";
    case OperatorKind::kBilinear: return "bilinear";
    case OperatorKind::kPerturbedBilinear: return "perturbed-bilinear";
    case OperatorKind::kQuadraticMin: return "quadratic-min";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  if (name == "linear") return OperatorKind::kLinear;
  if (name == "bilinear") return OperatorKind::kBilinear;
  if (name == "perturbed-bilinear") return OperatorKind::kPerturbedBilinear;
  if (name == "quadratic-min") return OperatorKind::kQuadraticMin;
  throw ConfigError("unknown operator kind '" + name + "'");
}

std::vector<int> MonotoneOperator::player_dims() const {
  if (kind_ == OperatorKind::kBilinear || kind_ == OperatorKind::kPerturbedBilinear)
    return {dim() / 2, dim() / 2};
  return {dim()};
}

void MonotoneOperator::check_dim(const Vec& z) const {
  if (z.size() != b_.size())
    throw ContractViolation("dimension mismatch: operator has n = " + std::to_string(b_.size()) +
                            ", got " + std::to_string(z.size()));
}

Vec MonotoneOperator::eval(const Vec& z) const {
  check_dim(z);
  Vec out = A_ * z + b_;
  if (epsilon_ != 0.0) out += (epsilon_ * z.squaredNorm()) * z;
  return out;
}

Mat MonotoneOperator::jacobian(const Vec& z) const {
  check_dim(z);
  if (epsilon_ == 0.0) return A_;
  Mat J = A_;
  J.diagonal().array() += epsilon_ * z.squaredNorm();
  J.noalias() += (2.0 * epsilon_) * z * z.transpose();
  return J;
}

MonotoneOperator make_linear(const Mat& A, const Vec& b, double D, bool validate) {
  if (A.rows() != A.cols()) throw ContractViolation("A must be square");
  if (A.rows() != b.size()) throw ContractViolation("A and b dimensions differ");
  require_positive_radius(D);
  MonotoneOperator op;
  op.kind_ = OperatorKind::kLinear;
  op.A_ = A;
  op.b_ = b;
  op.ell_ = spectral_norm(A);
  op.D_ = D;
  op.domain_radius_ = 3.0 * D;
  if (validate) {
    const double floor = -1e-12 * std::max(1.0, op.ell_);
    if (min_symmetric_eigenvalue(A) < floor)
      throw ConfigError("linear operator is not monotone: A + A^T has a negative eigenvalue");
  }
  Eigen::FullPivLU<Mat> lu(A);
  if (lu.isInvertible()) {
    Vec z = lu.solve(-b);
    if (validate && z.norm() > D * (1.0 + 1e-12))
      throw ConfigError("equilibrium lies outside B(0, D)");
    op.equilibrium_ = std::move(z);
  }
  return op;
}

MonotoneOperator make_bilinear(const Mat& M, const Vec& b1, const Vec& b2, double D) {
  if (M.rows() != M.cols()) throw ContractViolation("M must be square");
  if (b1.size() != M.rows() || b2.size() != M.rows())
    throw ContractViolation("b1, b2 must match the size of M");
  require_positive_radius(D);
  const Eigen::Index m = M.rows();
  MonotoneOperator op;
  op.kind_ = OperatorKind::kBilinear;
  op.A_ = bilinear_matrix(M);
  op.b_.resize(2 * m);
  op.b_ << b1, -b2;
  op.ell_ = spectral_norm(M);
  op.D_ = D;
  op.domain_radius_ = 3.0 * D;
  Eigen::FullPivLU<Mat> lu(op.A_);
  if (lu.isInvertible()) {
    Vec z = lu.solve(-op.b_);
    if (!blocks_within(z, op.player_dims(), D))
      throw ConfigError("equilibrium -A^{-1} b lies outside the D-ball product");
    op.equilibrium_ = std::move(z);
  }
  return op;
}

MonotoneOperator make_perturbed_bilinear(const Mat& M, const Vec& b1, const Vec& b2,
                                         double epsilon, double D) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be >= 0");
  MonotoneOperator op = make_bilinear(M, b1, b2, D);
  if (epsilon == 0.0) return op;
  const double R = 3.0 * D;
  op.kind_ = OperatorKind::kPerturbedBilinear;
  op.epsilon_ = epsilon;
  op.ell_ = spectral_norm(M) + 3.0 * epsilon * R * R;
  op.lambda_ = 6.0 * epsilon * R;
  if (op.b_.isZero(0.0)) {
    op.equilibrium_ = Vec::Zero(op.dim());
    return op;
  }
  op.equilibrium_.reset();
  Eigen::FullPivLU<Mat> lu(op.A_);
  if (!lu.isInvertible()) return op;
  Vec z = lu.solve(-op.b_);
  for (int iter = 0; iter < 100; ++iter) {
    const Vec r = op.eval(z);
    if (r.norm() < 1e-13 * (1.0 + op.b_.norm())) break;
    z -= op.jacobian(z).fullPivLu().solve(r);
  }
  if (op.eval(z).norm() < 1e-12 * (1.0 + op.b_.norm()) &&
      blocks_within(z, op.player_dims(), D))
    op.equilibrium_ = std::move(z);
  return op;
}

MonotoneOperator make_quadratic_min(const Mat& S, const Vec& b, double D) {
  if (S.rows() != S.cols()) throw ContractViolation("S must be square");
  if (S.rows() != b.size()) throw ContractViolation("S and b dimensions differ");
  require_positive_radius(D);
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConfigError("S must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(S, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) <= 0.0) throw ConfigError("S must be positive definite");
  MonotoneOperator op;
  op.kind_ = OperatorKind::kQuadraticMin;
  op.A_ = S;
  op.b_ = b;
  op.ell_ = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  op.D_ = D;
  op.domain_radius_ = 3.0 * D;
  Vec x = S.llt().solve(-b);
  if (x.norm() > D * (1.0 + 1e-12)) throw ConfigError("minimizer -S^{-1} b lies outside B(0, D)");
  op.equilibrium_ = std::move(x);
  return op;
}

double suboptimality(const MonotoneOperator& op, const Vec& x) {
  if (op.kind() != OperatorKind::kQuadraticMin)
    throw ContractViolation("suboptimality is defined for quadratic-min operators only");
  const Vec g = op.eval(x);
  return 0.5 * g.dot(op.A().llt().solve(g));
}

SmoothnessReport check_monotone_and_smooth(const MonotoneOperator& op, int num_samples,
                                           std::uint64_t seed, double tol) {
  if (num_samples < 2) throw ContractViolation("num_samples must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = op.dim();
  const double R = op.domain_radius();
  auto sample = [&]() {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    const double radius = R * std::pow(unif(rng), 1.0 / n);
    return Vec(v.normalized() * radius);
  };

  SmoothnessReport rep;
  rep.min_inner = std::numeric_limits<double>::infinity();
  for (int s = 0; s < num_samples; ++s) {
    const Vec z = sample();
    const Vec zp = sample();
    const Vec dz = z - zp;
    const double dist = dz.norm();
    if (dist == 0.0) continue;
    const Vec dF = op.eval(z) - op.eval(zp);
    const double inner = dF.dot(dz);
    rep.min_inner = std::min(rep.min_inner, inner);
    if (inner < -tol) rep.monotone = false;
    rep.ell_hat = std::max(rep.ell_hat, dF.norm() / dist);
    rep.lambda_hat =
        std::max(rep.lambda_hat, spectral_norm(op.jacobian(z) - op.jacobian(zp)) / dist);
  }
  if (op.is_affine()) {
    rep.sym_part_min_eig = min_symmetric_eigenvalue(op.A());
    if (*rep.sym_part_min_eig < -tol) rep.monotone = false;
  }
  rep.ell_violated = rep.ell_hat > op.ell() * (1.0 + tol);
  rep.lambda_violated = rep.lambda_hat > op.lambda() * (1.0 + tol);
  return rep;
}

std::vector<Vec> split_blocks(const Vec& z, const std::vector<int>& dims) {
  std::vector<Vec> out;
  Eigen::Index offset = 0;
  for (int d : dims) {
    if (offset + d > z.size()) throw ContractViolation("block sizes exceed vector length");
    out.emplace_back(z.segment(offset, d));
    offset += d;
  }
  if (offset != z.size()) throw ContractViolation("block sizes do not cover the vector");
  return out;
}

GameSpec game_for(const MonotoneOperator& op) {
  switch (op.kind()) {
    case OperatorKind::kBilinear:
    case OperatorKind::kPerturbedBilinear: {
      const int m = op.dim() / 2;
      const Mat M = op.A().topRightCorner(m, m);
      const Vec b1 = op.b().head(m);
      const Vec b2 = -op.b().tail(m);
      const double eps = op.epsilon();
      auto f1 = [M, b1, eps, m](const Vec& z) {
        const Vec x = z.head(m);
        const Vec y = z.tail(m);
        const double xx = x.squaredNorm();
        return x.dot(M * y) + b1.dot(x) + eps * (0.25 * xx * xx + 0.5 * y.squaredNorm() * xx);
      };
      auto f2 = [M, b2, eps, m](const Vec& z) {
        const Vec x = z.head(m);
        const Vec y = z.tail(m);
        const double yy = y.squaredNorm();
        return -x.dot(M * y) - b2.dot(y) + eps * (0.25 * yy * yy + 0.5 * x.squaredNorm() * yy);
      };
      return GameSpec{{m, m}, {f1, f2}, op, eps == 0.0};
    }
    case OperatorKind::kQuadraticMin: {
      const Mat S = op.A();
      const Vec b = op.b();
      auto f = [S, b](const Vec& x) { return 0.5 * x.dot(S * x) + b.dot(x); };
      return GameSpec{{op.dim()}, {f}, op, false};
    }
    case OperatorKind::kLinear:
      break;
  }
  throw UnsupportedInstance("general linear operators carry no canonical game");
}

}  // namespace monoplay
