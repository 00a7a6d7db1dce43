#include "doctest.h"

#include <cmath>
#include <random>

#include "monoplay/diagnostics.hpp"
#include "monoplay/errors.hpp"

using namespace monoplay;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

MonotoneOperator nu_bilinear(double nu, int n) {
  return make_bilinear(nu * Mat::Identity(n / 2, n / 2), Vec::Zero(n / 2), Vec::Zero(n / 2), 1.0);
}

const Trace& reference_run() {
  static const Trace tr = run_og(nu_bilinear(1.0, 4), vec({1, 0, 1, 0}), vec({1, 0, 1, 0}), 1.0 / 150, 10000);
  return tr;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("gradient gap") {
  const MonotoneOperator op = nu_bilinear(1.0, 2);
  CHECK(grad_gap(op, Vec::Zero(2)) == 0.0);
  CHECK(grad_gap(op, vec({1, 0})) == 1.0);
  const Vec z = vec({0.3, -0.7});
  CHECK(grad_gap(op, 2 * z) == doctest::Approx(2 * grad_gap(op, z)).epsilon(1e-15));
}

TEST_CASE("total gap of a bilinear game") {
  const MonotoneOperator op = nu_bilinear(1.0, 2);
  const GameSpec game = game_for(op);
  CHECK(total_gap_bilinear(game, vec({1, 0}), {Vec::Zero(1), Vec::Zero(1)}, 1.0) == doctest::Approx(1.0));
  CHECK(total_gap_bilinear(game, Vec::Zero(2), {Vec::Zero(1), Vec::Zero(1)}, 1.0) == 0.0);

  const MonotoneOperator pert =
      make_perturbed_bilinear(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1), 0.1, 1.0);
  CHECK_THROWS_AS(total_gap_bilinear(game_for(pert), vec({1, 0}), {Vec::Zero(1), Vec::Zero(1)}, 1.0),
                  UnsupportedInstance);
}

TEST_CASE("total gap never exceeds the gradient-gap bound") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nrm;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat M(2, 2);
  M << 1.0, 0.4, -0.3, 0.8;
  const MonotoneOperator op = make_bilinear(M, vec({0.1, -0.2}), vec({0.05, 0.1}), 1.0);
  const GameSpec game = game_for(op);
  const Vec zs = *op.equilibrium();
  auto ball_point = [&](const Vec& center, double radius) {
    Vec d(center.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = nrm(rng);
    return Vec(center + d.normalized() * radius * unif(rng));
  };
  const double D = 1.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<Vec> centers{ball_point(zs.head(2), D), ball_point(zs.tail(2), D)};
    Vec z(4);
    z << ball_point(centers[0], D), ball_point(centers[1], D);
    const double gap = total_gap_bilinear(game, z, centers, D);
    const double bound = total_gap_bound(op, z, centers, D);
    CHECK(gap >= -1e-12);
    CHECK(gap <= bound + 1e-9);
    CHECK(bound <= 2 * D * std::sqrt(2.0) * grad_gap(op, z) * (1 + 1e-15));
  }
}

TEST_CASE("gap reports use the initial blocks as default centers") {
  const MonotoneOperator op = nu_bilinear(1.0, 4);
  const Trace tr = run_og(op, vec({1, 0, 0, 1}), vec({1, 0, 0, 1}), 0.05, 100);
  const auto reps = gap_reports(op, tr);
  REQUIRE(reps.size() == 101);
  CHECK(reps[0].total_gap);
  // at t = 0 every player deviates from its own position: gap = 3D |g_k| summed
  CHECK(*reps[0].total_gap == doctest::Approx(3.0 * 2.0).epsilon(1e-14));
  for (const GapReport& r : reps) {
    REQUIRE(r.total_gap);
    REQUIRE(r.dist_to_eq);
    CHECK(*r.total_gap <= r.total_gap_bound + 1e-9);
    CHECK(r.grad_gap >= 0.0);
    CHECK(*r.dist_to_eq >= 0.0);
  }
  const MonotoneOperator quad = make_quadratic_min(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const auto qr = gap_reports(quad, run_gd(quad, vec({1, 0}), 0.1, 5));
  CHECK_FALSE(qr[0].total_gap);
}

TEST_CASE("zero gradient gap iff at the equilibrium for invertible linear maps") {
  Mat A(2, 2);
  A << 0.5, 1, -1, 0.2;
  const MonotoneOperator op = make_linear(A, vec({0.1, 0.2}), 1.0);
  CHECK(grad_gap(op, *op.equilibrium()) <= 1e-15);
  CHECK(grad_gap(op, *op.equilibrium() + vec({1e-3, 0})) > 0.0);
}

TEST_CASE("best iterate") {
  const MonotoneOperator op = nu_bilinear(1.0, 2);
  const Trace still = run_og(op, Vec::Zero(2), Vec::Zero(2), 0.1, 20);
  const BestIterate b = best_iterate(still);
  CHECK(b.value == 0.0);
  CHECK(b.t == 0);
  CHECK_THROWS_AS(best_iterate(still, 7), ContractViolation);

  const Trace& tr = reference_run();
  const double eta = 1.0 / 150;
  const BestIterate one = best_iterate(tr, 1);
  CHECK(one.value <= 4.0 / (eta * std::sqrt(1e4) * std::sqrt(1 - 10 * eta * eta)));
  const BestIterate three = best_iterate(tr, 3);
  CHECK(three.value <= 6.0 / (eta * std::sqrt(1e4 / 3) * std::sqrt(1 - 10 * eta * eta)));
  CHECK(lemma1_check(tr, 1.0, eta, 1.0, 1).holds);
  CHECK(lemma1_check(tr, 1.0, eta, 1.0, 3).holds);
  CHECK(best_iterate_bound(1.0, 1.0, 1.0, 100) == std::numeric_limits<double>::infinity());
}

TEST_CASE("best iterate value never increases with T") {
  const Trace& tr = reference_run();
  double prev = std::numeric_limits<double>::infinity();
  double running = std::numeric_limits<double>::infinity();
  for (int T = 1; T <= 2000; ++T) {
    running = std::min(running, tr.grad_norm(T - 1));
    CHECK(running <= prev);
    prev = running;
  }
  CHECK(running == best_iterate(run_og(nu_bilinear(1.0, 4), vec({1, 0, 1, 0}), vec({1, 0, 1, 0}), 1.0 / 150, 2000)).value);
}

TEST_CASE("last-iterate bound check") {
  const MonotoneOperator op = nu_bilinear(1.0, 2);
  const Trace still = run_og(op, Vec::Zero(2), Vec::Zero(2), 1.0 / 150, 20);
  const BoundCheck eq = theorem1_check(still, 1.0, 1.0 / 150, 1.0, 0.0);
  CHECK(eq.holds);
  CHECK(eq.margin == 0.0);
  CHECK_FALSE(eq.vacuous);

  const BoundCheck ref = theorem1_check(reference_run(), 1.0, 1.0 / 150, 1.0, 0.0);
  CHECK(ref.holds);
  CHECK_FALSE(ref.vacuous);
  CHECK(ref.margin < 1.0);

  const Trace fast = run_og(op, vec({1, 0}), vec({1, 0}), 1.0, 10);
  CHECK(theorem1_check(fast, 1.0, 1.0, 1.0, 0.0).vacuous);

  const MonotoneOperator pert =
      make_perturbed_bilinear(Mat::Identity(1, 1), Vec::Zero(1), Vec::Zero(1), 0.01, 1.0);
  CHECK(theorem1_check(still, 1.0, 1.0 / 150, pert.ell(), pert.lambda()).vacuous);
}

TEST_CASE("short-term growth along OG traces") {
  const GrowthCheck g = short_term_growth_check(reference_run(), 1.0 / 150, 1.0);
  CHECK(g.holds);
  CHECK(g.violations == 0);
  const MonotoneOperator pert =
      make_perturbed_bilinear(Mat::Identity(2, 2), vec({0.1, 0}), Vec::Zero(2), 0.01, 1.0);
  const Trace tr = run_og(pert, vec({1, 0, 0, -1}), vec({0.5, 0, 0, -1}), 0.003, 2000);
  CHECK(short_term_growth_check(tr, 0.003, pert.ell()).holds);
  // a made-up trace whose gradient jumps violates the growth law
  Trace fake;
  fake.p = 2;
  fake.eta = 0.01;
  for (double v : {1.0, 1.0, 1.0, 50.0}) {
    fake.points.push_back(Vec::Constant(1, v));
    fake.grads.push_back(Vec::Constant(1, v));
  }
  const GrowthCheck bad = short_term_growth_check(fake, 0.01, 1.0);
  CHECK_FALSE(bad.holds);
  CHECK(bad.first_violation == 0);
}

TEST_CASE("bounded iterates") {
  const IterateBoundCheck b = bounded_iterates_check(reference_run(), Vec::Zero(4));
  CHECK(b.holds);
  CHECK_FALSE(b.inits_differ);
  CHECK(b.reference == doctest::Approx(2 * std::sqrt(2.0)));

  const MonotoneOperator op = nu_bilinear(1.0, 2);
  const Trace tr = run_og(op, vec({3, 0}), vec({1, 0}), 0.05, 500);
  const IterateBoundCheck d = bounded_iterates_check(tr, Vec::Zero(2));
  CHECK(d.inits_differ);
  CHECK(d.reference == doctest::Approx(6.0));
  CHECK_FALSE(d.finding);
}

TEST_CASE("averaged iterates converge at rate 1/T") {
  const MonotoneOperator op = nu_bilinear(1.0, 4);
  const Series zero = averaged_iterate_gap(run_og(op, Vec::Zero(4), Vec::Zero(4), 0.1, 10), op);
  for (double y : zero.y) CHECK(y == 0.0);

  const Trace tr = run_og(op, vec({1, 0, 1, 0}), vec({1, 0, 1, 0}), 0.1, 10000);
  const Series s = averaged_iterate_gap(tr, op);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < s.x.size(); ++i)
    if (s.x[i] >= 100) {
      x.push_back(s.x[i]);
      y.push_back(s.y[i]);
    }
  const RateFit fit = rate_fit(x, y, 0.0);
  CHECK(fit.slope <= -0.9);
}

TEST_CASE("rate fit") {
  std::vector<double> x, half, inv;
  for (int T = 10; T <= 10000; T *= 2) {
    x.push_back(T);
    half.push_back(3.0 / std::sqrt(T));
    inv.push_back(2.0 / T);
  }
  const RateFit a = rate_fit(x, half);
  CHECK(std::abs(a.slope + 0.5) <= 1e-12);
  CHECK(std::abs(a.intercept - std::log(3.0)) <= 1e-10);
  CHECK(a.r2 == doctest::Approx(1.0));
  CHECK(std::abs(rate_fit(x, inv).slope + 1.0) <= 1e-12);

  std::vector<double> y = inv;
  y[5] = 0.0;
  y[6] = -1.0;
  const RateFit b = rate_fit(x, y, 0.0);
  CHECK(b.excluded == 2);
  CHECK(b.warnings.size() == 1);
  CHECK(std::abs(b.slope + 1.0) <= 1e-12);

  const std::vector<double> short_x{1, 2, 3, 4}, short_y{1, 0, -1, 0.5};
  CHECK_THROWS_AS(rate_fit(short_x, short_y, 0.0), NumericError);
  const std::vector<double> few{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> fy(10, 1.0);
  CHECK(rate_fit(few, fy).used == 9);
}

}
