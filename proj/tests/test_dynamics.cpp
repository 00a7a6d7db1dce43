#include "doctest.h"

#include <cmath>
#include <random>

#include "monoplay/dynamics.hpp"
#include "monoplay/errors.hpp"

using namespace monoplay;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

MonotoneOperator unit_bilinear() {
  return make_bilinear(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1), 1.0);
}

MonotoneOperator random_linear(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nrm;
  Mat G(n, n), K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      G(i, j) = nrm(rng);
      K(i, j) = nrm(rng);
    }
  Mat A = 0.1 * G * G.transpose() + (K - K.transpose()) + 0.1 * Mat::Identity(n, n);
  Vec b(n);
  for (int i = 0; i < n; ++i) b(i) = 0.1 * nrm(rng);
  return make_linear(A, b, 100.0);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("single OG step by hand") {
  const Trace tr = run_og(unit_bilinear(), vec({1, 0}), vec({1, 0}), 0.1, 1);
  CHECK(tr.first_t() == -1);
  CHECK(tr.last_t() == 1);
  CHECK((tr.z(1) - vec({1, 0.1})).norm() <= 1e-15);
}

TEST_CASE("OG iterates match a numpy reference run") {
  Mat M(2, 2);
  M << 2, 1, 0, 1;
  const MonotoneOperator op = make_bilinear(M, vec({0.5, 0}), vec({0, 0.25}), 1.0);
  const Trace tr = run_og(op, vec({1, -1, 0.5, 0}), vec({1, -1, 0.5, 0}), 0.1, 3);
  CHECK((tr.z(3) - vec({0.36749999999999994, -1.0065, 0.916, -0.01799999999999998})).norm() <= 1e-14);
}

TEST_CASE("OG update is reproduced bit for bit from the cached gradients") {
  std::mt19937_64 rng(1);
  const MonotoneOperator op = random_linear(rng, 4);
  const Trace tr = run_og(op, vec({1, 2, 3, 4}), vec({0, 1, 0, 1}), 0.01, 50);
  for (int t = 0; t < 50; ++t) {
    CHECK(tr.grad(t) == op.eval(tr.z(t)));
    const Vec next = tr.z(t) - 2.0 * 0.01 * tr.grad(t) + 0.01 * tr.grad(t - 1);
    CHECK(next == tr.z(t + 1));
  }
}

TEST_CASE("starting at the equilibrium gives a constant trace") {
  Mat M(2, 2);
  M << 2, 1, 0, 1;
  const MonotoneOperator op = make_bilinear(M, vec({0.5, 0}), vec({0, 0.25}), 1.0);
  const Vec zs = *op.equilibrium();
  for (const Trace& tr : {run_og(op, zs, zs, 0.1, 20), run_og_peg(op, zs, zs, 0.1, 20), run_gd(op, zs, 0.1, 20),
                          run_eg(op, zs, 0.1, 20)}) {
    for (int t = tr.first_t(); t <= tr.last_t(); ++t) CHECK((tr.z(t) - zs).norm() <= 1e-15);
  }
  const Trace peg = run_og_peg(op, zs, zs, 0.1, 20);
  for (int t = 0; t <= 20; ++t) CHECK((peg.aux_at(t) - zs).norm() <= 1e-15);
}

TEST_CASE("PEG form reproduces OG") {
  const Trace og = run_og(unit_bilinear(), vec({1, 0}), vec({1, 0}), 0.1, 1);
  const Trace peg = run_og_peg(unit_bilinear(), vec({1, 0}), vec({1, 0}), 0.1, 1);
  CHECK((og.z(1) - peg.z(1)).norm() <= 1e-12);

  std::mt19937_64 rng(2);
  for (int k = 0; k < 3; ++k) {
    const MonotoneOperator op = random_linear(rng, 4);
    const Trace a = run_og(op, vec({1, 0, 0, 1}), vec({0.5, 0.5, 0, 1}), 0.02, 100);
    const Trace b = run_og_peg(op, vec({1, 0, 0, 1}), vec({0.5, 0.5, 0, 1}), 0.02, 100);
    double diff = 0.0, scale = 0.0;
    for (int t = 0; t <= 100; ++t) {
      diff = std::max(diff, (a.z(t) - b.z(t)).norm());
      scale = std::max(scale, 1 + a.z(t).norm());
    }
    CHECK(diff <= 1e-10 * scale);
  }
  const MonotoneOperator pert =
      make_perturbed_bilinear(Mat::Identity(2, 2), Vec::Zero(2), Vec::Zero(2), 0.05, 1.0);
  const Trace a = run_og(pert, vec({1, 0, 0, 1}), vec({1, 0, 0, 1}), 0.01, 300);
  const Trace b = run_og_peg(pert, vec({1, 0, 0, 1}), vec({1, 0, 0, 1}), 0.01, 300);
  for (int t = 0; t <= 300; ++t) CHECK((a.z(t) - b.z(t)).norm() <= 1e-10 * (1 + a.z(t).norm()));
}

TEST_CASE("extragradient") {
  const Trace one = run_eg(unit_bilinear(), vec({1, 0}), 0.1, 1);
  CHECK((one.z(0) - vec({1, 0.1})).norm() <= 1e-15);
  CHECK(one.aux_at(0) == vec({1, 0}));

  const Trace tr = run_eg(unit_bilinear(), vec({1, 0}), 0.1, 1000);
  for (int t = 1; t <= 1000; ++t) CHECK(tr.grad_norm(t) < tr.grad_norm(t - 1));

  const Trace proj = run_eg(unit_bilinear(), vec({5, 5}), 0.1, 10, 1.0);
  for (int t = 0; t <= 10; ++t) {
    CHECK(std::abs(proj.z(t)(0)) <= 1.0 + 1e-15);
    CHECK(std::abs(proj.z(t)(1)) <= 1.0 + 1e-15);
  }
}

TEST_CASE("block projection") {
  const Vec p = project_blocks(vec({3, 4, 0.1, 0}), {2, 2}, 1.0);
  CHECK((p - vec({0.6, 0.8, 0.1, 0})).norm() <= 1e-15);
}

TEST_CASE("OG coefficient mapping") {
  const SCLICoefficients c = og_as_scli(0.1);
  CHECK(c.p() == 2);
  CHECK(c.alpha == std::vector<double>{0.1, -0.2});
  CHECK(c.beta == std::vector<double>{0.0, 1.0});
  CHECK(c.gamma == 0.0);
  CHECK(c.delta == -0.1);
  CHECK(c.consistent());
  SCLICoefficients bad{{0.1}, {0.5}, 0.0, 0.0};
  CHECK_FALSE(bad.consistent());
  SCLICoefficients mismatch{{0.1, 0.2}, {1.0}, 0.0, 0.0};
  CHECK_THROWS_AS(mismatch.validate(), ContractViolation);
}

TEST_CASE("SCLI runner embeds OG") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 5; ++k) {
    const MonotoneOperator op = random_linear(rng, 4);
    const Vec zm1 = vec({1, -1, 0.5, 0.2});
    const Vec z0 = vec({0.3, 0.1, -0.4, 1});
    const Trace og = run_og(op, zm1, z0, 0.03, 200);
    const Trace sc = run_scli(op, og_as_scli(0.03), {zm1, z0}, 200);
    for (int t = -1; t <= 200; ++t) CHECK((og.z(t) - sc.z(t)).norm() <= 1e-12 * (1 + og.z(t).norm()));
  }
}

TEST_CASE("trivial SCLI coefficients freeze the iterate") {
  std::mt19937_64 rng(4);
  const MonotoneOperator op = random_linear(rng, 3);
  const SCLICoefficients c{{0, 0, 0}, {0, 0, 1}, 0, 0};
  const Vec z0 = vec({1, 2, 3});
  const Trace tr = run_scli(op, c, {vec({0, 0, 0}), vec({5, 5, 5}), z0}, 30);
  for (int t = 0; t <= 30; ++t) CHECK(tr.z(t) == z0);
}

TEST_CASE("gradient descent on the identity decays geometrically") {
  const MonotoneOperator op = make_quadratic_min(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const Trace tr = run_scli(op, gd_as_scli(0.1), {vec({1, 0})}, 50);
  const Trace gd = run_gd(op, vec({1, 0}), 0.1, 50);
  for (int t = 0; t <= 50; ++t) {
    CHECK(std::abs(tr.z(t)(0) - std::pow(0.9, t)) <= 1e-15);
    CHECK(tr.z(t)(1) == 0.0);
    CHECK((gd.z(t) - tr.z(t)).norm() <= 1e-15);
  }
}

TEST_CASE("SCLI runner rejects nonlinear operators") {
  const MonotoneOperator pert =
      make_perturbed_bilinear(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1), 0.1, 1.0);
  CHECK_THROWS_AS(run_scli(pert, og_as_scli(0.1), {vec({1, 0}), vec({1, 0})}, 3), ContractViolation);
  CHECK_THROWS_AS(run_scli(unit_bilinear(), og_as_scli(0.1), {vec({1, 0})}, 3), ContractViolation);
  CHECK_THROWS_AS(run_og(unit_bilinear(), vec({1, 0}), vec({1, 0}), -0.1, 3), ContractViolation);
  CHECK_THROWS_AS(run_og(unit_bilinear(), vec({1, 0}), vec({1, 0}), 0.1, 0), ContractViolation);
}

TEST_CASE("divergent runs stop with the first bad index") {
  const SCLICoefficients expand{{0.0}, {2.0}, 0.0, 0.0};
  try {
    run_scli(unit_bilinear(), expand, {vec({1, 0})}, 100);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.index() == 41);  // 2^41 > 1e12 * (1 + |z^0|)
  }
  // gradient descent on a rotation expands by sqrt(1 + eta^2) per step
  CHECK_THROWS_AS(run_gd(unit_bilinear(), vec({1, 0}), 10.0, 100), DivergenceError);
}

TEST_CASE("EG as an online learner against the alternating adversary") {
  const RegretRun r10 = eg_regret_demo(10, 0.1);
  CHECK(r10.regret.back() == 5.0);
  CHECK(r10.cumulative_loss == 0.0);
  const RegretRun r11 = eg_regret_demo(11, 0.1);
  CHECK(r11.regret.back() == 6.0);
  CHECK(r11.cumulative_loss == 0.0);
  for (int t = 1; t <= 11; ++t) CHECK(r11.regret[t - 1] == std::ceil(t / 2.0));
}

TEST_CASE("OG regret") {
  const std::vector<Vec> zeros(50, Vec::Zero(3));
  const OGRegretResult z = og_regret_run(zeros, 1.0, StepSchedule::kInverseSqrt, 1.0);
  for (double r : z.regret) CHECK(r == 0.0);

  // constant gradient: best fixed action is -D g/|g|, regret stays bounded
  const Vec g = vec({0.6, 0.8});
  const OGRegretResult c = og_regret_run([&](int, const Vec&) { return g; }, 2, 1.0, 4000,
                                         StepSchedule::kInverseSqrt, 1.0);
  const double late = c.regret[3999];
  CHECK(late < 5.0);
  CHECK(std::abs(c.regret[3999] - c.regret[1999]) < 0.5);
  for (const Vec& v : c.actions) CHECK(v.norm() <= 1.0 + 1e-15);

  const OGRegretResult alt = og_regret_run(alternating_adversary(), 1, 1.0, 1000,
                                           StepSchedule::kInverseSqrt, 1.0);
  CHECK(alt.regret.back() / 1000.0 <= 0.1);
}

}
