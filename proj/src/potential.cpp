#include "monoplay/potential.hpp"

#include <cmath>

#include "monoplay/errors.hpp"

namespace monoplay {

namespace {

constexpr double kMaxCondition = 1e12;

std::pair<double, double> extreme_singular_values(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  return {s(0), s(s.size() - 1)};
}

}  // namespace

std::pair<Mat, Mat> alpha_avg_jacobians(const MonotoneOperator& op, const Vec& w_t,
                                        const Vec& F_zt, const Vec& F_ztm1, double eta,
                                        int quad_order) {
  if (quad_order < 1 || quad_order > 16) throw ContractViolation("quadrature order must be 1..16");
  if (op.is_affine()) return {op.A(), op.A()};
  const QuadratureRule rule = gauss_legendre_unit(quad_order);
  const Eigen::Index n = op.dim();
  Mat A = Mat::Zero(n, n);
  Mat B = Mat::Zero(n, n);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double a = rule.nodes[i];
    A += rule.weights[i] * op.jacobian(w_t - (1.0 - a) * eta * F_zt);
    B += rule.weights[i] * op.jacobian(w_t - (1.0 - a) * eta * F_ztm1);
  }
  return {A, B};
}

PotentialTrace backward_C(const MonotoneOperator& op, const Trace& trace, int quad_order) {
  if (trace.algorithm != Algorithm::kOG && trace.algorithm != Algorithm::kOGPeg)
    throw ContractViolation("backward_C needs an OG trace");
  if (trace.p != 2 || trace.last_t() < 1) throw ContractViolation("OG trace with T >= 1 expected");
  if (trace.dim() != op.dim()) throw ContractViolation("trace and operator dimensions differ");

  PotentialTrace pt;
  pt.base = trace;
  pt.eta = trace.eta;
  pt.T = trace.last_t();
  pt.quad_order = quad_order;
  pt.L0 = pt.eta * op.ell();
  pt.Lambda0 = pt.eta * op.lambda();
  const double eta = pt.eta;
  const int T = pt.T;
  const Eigen::Index n = op.dim();
  const Mat I = Mat::Identity(n, n);

  pt.w.reserve(T + 1);
  for (int t = 0; t <= T; ++t) {
    if (trace.algorithm == Algorithm::kOGPeg)
      pt.w.push_back(trace.aux_at(t));
    else
      pt.w.push_back(trace.z(t) + eta * trace.grad(t - 1));
  }

  pt.A_seq.resize(T + 1);
  pt.B_seq.resize(T + 1);
  for (int t = 0; t <= T; ++t) {
    auto [A, B] = alpha_avg_jacobians(op, pt.w[t], trace.grad(t), trace.grad(t - 1), eta,
                                      quad_order);
    pt.A_seq[t] = std::move(A);
    pt.B_seq[t] = std::move(B);
  }

  pt.C_seq.assign(T + 2, Mat::Zero(n, n));
  pt.M_seq.resize(T + 1);
  pt.N_seq.resize(T + 1);
  pt.D_seq.resize(T + 1);
  pt.step_norms.resize(T + 1);
  pt.inv_step_norms.resize(T + 1);
  for (int t = T; t >= 0; --t) {
    const Mat& A = pt.A_seq[t];
    const Mat& B = pt.B_seq[t];
    const Mat& C = pt.C_seq[t + 1];
    const Mat X = eta * A - C;
    Mat M = I - X;
    Eigen::PartialPivLU<Mat> lu(M);
    const double rc = lu.rcond();
    if (!(rc * kMaxCondition >= 1.0)) throw SingularityError(t, "M^t is numerically singular");
    Mat N = eta * X * B;
    // C^{t-1} = (M^t)^{-1} N^t, solved column by column
    Mat Cprev(n, n);
    for (Eigen::Index j = 0; j < n; ++j) Cprev.col(j) = lu.solve(N.col(j));
    Mat Dt(n, n);
    const Mat XXB = X * X * (eta * B);
    for (Eigen::Index j = 0; j < n; ++j) Dt.col(j) = lu.solve(XXB.col(j));
    Dt -= eta * C * B;
    const auto [smax, smin] = extreme_singular_values(M);
    pt.step_norms[t] = smax;
    pt.inv_step_norms[t] = 1.0 / smin;
    pt.C_seq[t] = std::move(Cprev);
    pt.M_seq[t] = std::move(M);
    pt.N_seq[t] = std::move(N);
    pt.D_seq[t] = std::move(Dt);
  }

  pt.Fw.reserve(T + 1);
  pt.Ftilde_seq.reserve(T + 1);
  for (int t = 0; t <= T; ++t) {
    pt.Fw.push_back(op.eval(pt.w[t]));
    pt.Ftilde_seq.push_back(pt.Fw[t] + pt.C(t - 1) * trace.grad(t - 1));
  }
  return pt;
}

Mat closed_form_C_linear(const Mat& A, double eta, double series_tol) {
  if (A.rows() != A.cols()) throw ContractViolation("A must be square");
  if (!(series_tol > 0.0)) throw ContractViolation("series tolerance must be positive");
  if (!(spectral_norm(2.0 * eta * A) < 1.0))
    throw NumericError("binomial series for the square root does not converge: |2 eta A| >= 1");
  const Eigen::Index n = A.rows();
  const Mat X = -4.0 * eta * eta * A * A;
  Mat root = Mat::Identity(n, n);
  Mat power = Mat::Identity(n, n);
  double binom = 1.0;
  for (int k = 1; k <= 100000; ++k) {
    binom *= (0.5 - (k - 1)) / k;
    power = power * X;
    const Mat term = ((k % 2 == 0) ? binom : -binom) * power;
    root += term;
    if (term.norm() < series_tol) return 0.5 * (root - Mat::Identity(n, n));
  }
  throw NumericError("binomial series did not reach the requested tolerance");
}

IdentityReport verify_potential_identity(const PotentialTrace& pt, double tol) {
  IdentityReport rep;
  rep.residuals.reserve(pt.T);
  for (int t = 0; t < pt.T; ++t) {
    const Vec& Ft = pt.Ftilde(t);
    const Vec& Fnext = pt.Ftilde(t + 1);
    const double r = (Fnext - pt.M(t) * Ft).norm() / (1.0 + Ft.norm());
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
    if (Fnext.norm() > pt.step_norms[t] * Ft.norm() * (1.0 + 1e-10) + tol)
      rep.step_inequality_holds = false;
  }
  rep.holds = rep.max_residual <= tol;
  for (int t = 0; t <= pt.T; ++t) {
    const double fw = pt.Fw[t].norm();
    const double rhs = pt.Ftilde(t).norm() + 2.0 * pt.L0 * pt.L0 * pt.base.grad_norm(t - 1);
    if (fw > rhs * (1.0 + 1e-10) + tol) rep.fw_consistency_holds = false;
  }
  return rep;
}

Lemma5Report lemma5_report(const PotentialTrace& pt, double ell) {
  Lemma5Report rep;
  const double L0 = pt.eta * ell;
  rep.vacuous = !(L0 <= std::sqrt(1.0 / 200.0) && pt.eta * ell <= 2.0 / 3.0);
  const double slack = 1.0 + 1e-12;
  rep.steps.reserve(pt.T + 1);
  for (int t = 0; t <= pt.T; ++t) {
    Lemma5Step s;
    s.c_small = spectral_norm(pt.C(t)) <= 2.0 * L0 * L0 * slack;
    s.inverse_ok = pt.inv_step_norms[t] <= std::sqrt(2.0) * slack;
    s.diff_small = spectral_norm(pt.eta * pt.A(t) - pt.C(t)) <= 2.0 * L0 * slack;
    s.step_ok = pt.step_norms[t] <= (1.0 + 2.0 * L0) * slack;
    if (!s.all() && rep.first_failure < 0) rep.first_failure = t;
    rep.steps.push_back(s);
  }
  rep.holds = rep.first_failure < 0;
  return rep;
}

DIdentityReport d_matrix_identity_check(const PotentialTrace& pt, double tol) {
  DIdentityReport rep;
  const Eigen::Index n = pt.A(0).rows();
  const Mat I = Mat::Identity(n, n);
  for (int t = 1; t <= pt.T; ++t) {
    const Mat lhs = I - pt.eta * pt.A(t - 1) + pt.C(t - 1);
    const Mat rhs = I - pt.eta * pt.A(t - 1) + pt.eta * pt.eta * pt.A(t) * pt.B(t) + pt.D(t);
    const double r = spectral_norm(lhs - rhs);
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
  }
  rep.holds = rep.max_residual <= tol;
  return rep;
}

FootnoteCase footnote_counterexample(double eta, double delta) {
  const MonotoneOperator op = make_linear(Mat::Identity(1, 1), Vec::Zero(1), std::abs(delta) + 1.0);
  const Trace tr = run_og(op, Vec::Zero(1), Vec::Constant(1, delta), eta, 1);
  FootnoteCase fc;
  fc.pair_norm = std::hypot(tr.grad_norm(1), tr.grad_norm(0));
  fc.threshold = std::abs(delta) * std::sqrt(2.0 - 4.0 * eta);
  return fc;
}

}  // namespace monoplay
