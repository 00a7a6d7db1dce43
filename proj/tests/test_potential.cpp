#include "doctest.h"

#include <cmath>

#include "monoplay/errors.hpp"
#include "monoplay/potential.hpp"

using namespace monoplay;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Mat linear_A() {
  Mat A(4, 4);
  A << 0.2, 1, 0, 0, -1, 0.2, 0, 0, 0, 0, 0.1, 0.5, 0, 0, -0.5, 0.1;
  return A;
}

MonotoneOperator linear_op() { return make_linear(linear_A(), Vec::Zero(4), 1.0); }

MonotoneOperator perturbed_op() {
  return make_perturbed_bilinear(Mat::Identity(2, 2), vec({0.2, 0}), vec({0, 0.1}), 0.01, 1.0);
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("averaged Jacobians of an affine operator equal A") {
  const MonotoneOperator op = linear_op();
  for (int order : {1, 2, 5}) {
    auto [A, B] = alpha_avg_jacobians(op, vec({1, 2, 3, 4}), vec({1, 0, 0, 0}), vec({0, 1, 0, 0}), 0.1, order);
    CHECK(A == op.A());
    CHECK(B == op.A());
  }
}

TEST_CASE("two-point quadrature is exact for the perturbed family") {
  const MonotoneOperator op = perturbed_op();
  const Trace tr = run_og_peg(op, vec({1, 0, 0, 1}), vec({0.8, 0.1, 0, 1}), 0.01, 20);
  for (int t = 0; t <= 20; ++t) {
    const Vec& w = tr.aux_at(t);
    auto [A2, B2] = alpha_avg_jacobians(op, w, tr.grad(t), tr.grad(t - 1), 0.01, 2);
    auto [A6, B6] = alpha_avg_jacobians(op, w, tr.grad(t), tr.grad(t - 1), 0.01, 6);
    CHECK((A2 - A6).norm() <= 1e-12);
    CHECK((B2 - B6).norm() <= 1e-12);
    const Vec lhs = op.eval(w - 0.01 * tr.grad(t));
    const Vec rhs = op.eval(w) - 0.01 * A2 * tr.grad(t);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1 + op.eval(w).norm()));
  }
}

TEST_CASE("closed-form C for a rotation") {
  Mat A(2, 2);
  A << 0, 1, -1, 0;
  const Mat C = closed_form_C_linear(A, 0.1);
  const double c = (std::sqrt(0.96) - 1) / 2;
  CHECK(std::abs(c + 0.0101021) <= 1e-7);
  CHECK((C - c * Mat::Identity(2, 2)).norm() <= 1e-14);
  CHECK((C * C + C + 0.01 * Mat::Identity(2, 2)).norm() <= 1e-14);
  CHECK((C * C + C - 0.01 * A * A).norm() <= 1e-14);
  CHECK(closed_form_C_linear(Mat::Zero(3, 3), 0.5).norm() == 0.0);
  CHECK_THROWS_AS(closed_form_C_linear(A, 0.5), NumericError);
}

TEST_CASE("closed-form C matches a matrix square-root oracle") {
  // scipy.linalg.sqrtm((I + (2 eta A)^2)) at eta = 0.05
  Mat expect = Mat::Zero(4, 4);
  expect(0, 0) = -0.00240477324542598;
  expect(0, 1) = 0.00100483279001913;
  expect(1, 0) = -0.00100483279001913;
  expect(1, 1) = -0.00240477324542593;
  expect(2, 2) = -0.00060029770699177;
  expect(2, 3) = 0.000250300509644;
  expect(3, 2) = -0.000250300509644;
  expect(3, 3) = -0.00060029770699166;
  const Mat C = closed_form_C_linear(linear_A(), 0.05);
  CHECK((C - expect).norm() <= 1e-15);
  CHECK(spectral_norm(C * C + C - 0.0025 * linear_A() * linear_A()) <= 1e-10);
  CHECK(spectral_norm(C * linear_A() - linear_A() * C) <= 1e-10);
}

TEST_CASE("backward recursion on a linear instance") {
  const MonotoneOperator op = linear_op();
  const double eta = 1.0 / (150 * op.ell());
  const int T = 300;
  const Trace tr = run_og(op, vec({1, 0, 0.5, 0.5}), vec({1, 0, 0.5, 0.5}), eta, T);
  const PotentialTrace pt = backward_C(op, tr);
  CHECK(pt.C(T).norm() == 0.0);
  CHECK(pt.C_seq.size() == static_cast<std::size_t>(T + 2));
  const Mat Cc = closed_form_C_linear(op.A(), eta);
  for (int t = 0; t <= T - 50; ++t) CHECK(spectral_norm(pt.C(t) - Cc) <= 1e-6);
  for (int t = 0; t <= T; ++t) CHECK(spectral_norm(pt.C(t)) <= 2 * pt.L0 * pt.L0);

  const IdentityReport id = verify_potential_identity(pt, 1e-10);
  CHECK(id.holds);
  CHECK(id.max_residual <= 1e-10);
  CHECK(id.step_inequality_holds);
  CHECK(id.fw_consistency_holds);

  const Lemma5Report l5 = lemma5_report(pt, op.ell());
  CHECK_FALSE(l5.vacuous);
  CHECK(l5.holds);
  CHECK(spectral_norm(eta * pt.A(T) - pt.C(T)) == doctest::Approx(eta * op.ell()));

  const DIdentityReport di = d_matrix_identity_check(pt, 1e-10);
  CHECK(di.holds);
  const Mat I = Mat::Identity(4, 4);
  const Mat reduced = (I - eta * pt.A(T)).inverse() * (eta * pt.A(T)) * (eta * pt.A(T)) * eta * pt.B(T);
  CHECK((pt.D(T) - reduced).norm() <= 1e-15);
}

TEST_CASE("backward recursion on the perturbed family") {
  const MonotoneOperator op = perturbed_op();
  const double eta = 0.003;
  const Trace tr = run_og_peg(op, vec({1, 0, 0, 1}), vec({1, 0, 0, 1}), eta, 500);
  const PotentialTrace pt = backward_C(op, tr, 2);
  const IdentityReport id = verify_potential_identity(pt, 1e-8);
  CHECK(id.holds);
  CHECK(id.step_inequality_holds);
  CHECK(id.fw_consistency_holds);
  CHECK(lemma5_report(pt, op.ell()).holds);
  CHECK(d_matrix_identity_check(pt, 1e-8).holds);
}

TEST_CASE("potential of an equilibrium start vanishes") {
  const MonotoneOperator op = perturbed_op();
  const Vec zs = *op.equilibrium();
  const PotentialTrace pt = backward_C(op, run_og(op, zs, zs, 0.003, 30));
  for (int t = 0; t <= 30; ++t) CHECK(pt.Ftilde(t).norm() <= 1e-12);
  for (double r : verify_potential_identity(pt, 1e-8).residuals) CHECK(r <= 1e-12);
}

TEST_CASE("norm checks are vacuous for large steps") {
  const MonotoneOperator op = linear_op();
  const Trace tr = run_og(op, vec({1, 0, 0, 0}), vec({1, 0, 0, 0}), 0.5 / op.ell(), 10);
  CHECK(lemma5_report(backward_C(op, tr), op.ell()).vacuous);
}

TEST_CASE("singular step matrices are reported with their step") {
  const MonotoneOperator op = make_linear(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const Trace tr = run_og(op, vec({1, 0}), vec({1, 0}), 1.0, 5);
  try {
    backward_C(op, tr);
    FAIL("expected a singular step");
  } catch (const SingularityError& e) {
    CHECK(e.index() == 5);
  }
}

TEST_CASE("one-step growth of the naive pair potential") {
  for (double eta : {0.01, 0.1, 0.3}) {
    const FootnoteCase fc = footnote_counterexample(eta, 0.7);
    CHECK(fc.exceeds());
    CHECK(fc.pair_norm == doctest::Approx(0.7 * std::sqrt((1 - 2 * eta) * (1 - 2 * eta) + 1)));
  }
}

}
