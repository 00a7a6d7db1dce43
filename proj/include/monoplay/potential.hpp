#pragma once

#include <utility>
#include <vector>

#include "monoplay/dynamics.hpp"
#include "monoplay/linalg.hpp"
#include "monoplay/operators.hpp"

namespace monoplay {

// Forward OG run plus every matrix of the backward construction. Sequences indexed
// by t = 0..T unless noted; use the accessors.
struct PotentialTrace {
  Trace base;             // OG iterates
  std::vector<Vec> w;     // w^t = z^t + eta F(z^{t-1}), t = 0..T
  std::vector<Vec> Fw;    // F(w^t)
  double eta = 0.0;
  int T = 0;
  int quad_order = 2;
  std::vector<Mat> A_seq, B_seq;
  std::vector<Mat> C_seq;  // C^{-1}, C^0, ..., C^T
  std::vector<Mat> M_seq, N_seq, D_seq;
  std::vector<Vec> Ftilde_seq;
  std::vector<double> step_norms;     // |M^t|
  std::vector<double> inv_step_norms; // |(M^t)^{-1}|
  double L0 = 0.0;
  double Lambda0 = 0.0;

  const Mat& A(int t) const { return A_seq.at(t); }
  const Mat& B(int t) const { return B_seq.at(t); }
  const Mat& C(int t) const { return C_seq.at(t + 1); }
  const Mat& M(int t) const { return M_seq.at(t); }
  const Mat& N(int t) const { return N_seq.at(t); }
  const Mat& D(int t) const { return D_seq.at(t); }
  const Vec& Ftilde(int t) const { return Ftilde_seq.at(t); }
};

// A^t = int_0^1 dF(w^t - (1-a) eta F(z^t)) da and B^t likewise with F(z^{t-1}),
// by Gauss-Legendre quadrature on [0, 1].
std::pair<Mat, Mat> alpha_avg_jacobians(const MonotoneOperator& op, const Vec& w_t,
                                        const Vec& F_zt, const Vec& F_ztm1, double eta,
                                        int quad_order);

// Trace must come from run_og or run_og_peg. C^T = 0 and C^{t-1} = (M^t)^{-1} N^t.
// Throws SingularityError when some M^t has condition estimate above 1e12.
PotentialTrace backward_C(const MonotoneOperator& op, const Trace& trace, int quad_order = 2);

// ((I + (2 eta A)^2)^{1/2} - I)/2 through the binomial series of sqrt(I - X),
// X = -4 eta^2 A^2. Requires |2 eta A| < 1.
Mat closed_form_C_linear(const Mat& A, double eta, double series_tol = 1e-14);

struct IdentityReport {
  std::vector<double> residuals;  // r_t for t = 0..T-1
  double max_residual = 0.0;
  bool holds = true;
  // |Ft^{t+1}| <= |M^t| |Ft^t| (1 + 1e-10) at every step
  bool step_inequality_holds = true;
  // |F(w^t)| <= |Ft^t| + 2 L0^2 |F(z^{t-1})| at every step
  bool fw_consistency_holds = true;
};

IdentityReport verify_potential_identity(const PotentialTrace& pt, double tol);

struct Lemma5Step {
  bool c_small = true;      // |C^t| <= 2 L0^2
  bool inverse_ok = true;   // |(M^t)^{-1}| <= sqrt 2
  bool diff_small = true;   // |eta A^t - C^t| <= 2 L0
  bool step_ok = true;      // |M^t| <= 1 + 2 L0
  bool all() const { return c_small && inverse_ok && diff_small && step_ok; }
};

struct Lemma5Report {
  bool vacuous = false;
  bool holds = true;
  std::vector<Lemma5Step> steps;  // t = 0..T
  int first_failure = -1;
};

Lemma5Report lemma5_report(const PotentialTrace& pt, double ell);

// |(I - eta A^{t-1} + C^{t-1}) - (I - eta A^{t-1} + eta^2 A^t B^t + D^t)| for t = 1..T.
struct DIdentityReport {
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool holds = true;
};

DIdentityReport d_matrix_identity_check(const PotentialTrace& pt, double tol);

// One OG step on F(z) = z from z^{t-1} = 0, z^t = delta: the pair of gradient
// norms after the step versus delta sqrt(2 - 4 eta).
struct FootnoteCase {
  double pair_norm = 0.0;
  double threshold = 0.0;
  bool exceeds() const { return pair_norm > threshold; }
};

FootnoteCase footnote_counterexample(double eta, double delta);

}  // namespace monoplay
