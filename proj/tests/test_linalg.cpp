#include "doctest.h"

#include <cmath>

#include "monoplay/errors.hpp"
#include "monoplay/linalg.hpp"

using namespace monoplay;

TEST_SUITE("linalg") {

TEST_CASE("spectral radius of small matrices") {
  Mat rot(2, 2);
  rot << 0, 1, -1, 0;
  CHECK(std::abs(spectral_radius(rot) - 1.0) <= 1e-12);

  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = -0.7;
  CHECK(std::abs(spectral_radius(diag) - 0.7) <= 1e-12);

  const Mat comp = poly_companion({-1.0, 0.0, 1.0});
  CHECK(std::abs(spectral_radius(comp) - 1.0) <= 1e-12);
}

TEST_CASE("balancing keeps the spectrum of a badly scaled matrix") {
  Mat m(3, 3);
  m << 1, 1e6, 0, 1e-6, 2, 1e4, 0, 1e-4, 3;
  const Mat b = balance(m);
  auto ev_m = eigenvalues(m);
  auto ev_b = eigenvalues(b);
  auto key = [](const std::complex<double>& a, const std::complex<double>& c) {
    return a.real() < c.real();
  };
  std::sort(ev_m.begin(), ev_m.end(), key);
  std::sort(ev_b.begin(), ev_b.end(), key);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(ev_m[i] - ev_b[i]) <= 1e-9);
  CHECK(b.norm() < m.norm());
}

TEST_CASE("spectral norm and symmetric part") {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 1.0;
  CHECK(std::abs(spectral_norm(m) - 2.0) <= 1e-14);
  Mat skew(2, 2);
  skew << 0, 3, -3, 0;
  CHECK(std::abs(min_symmetric_eigenvalue(skew)) <= 1e-15);
}

TEST_CASE("polynomial arithmetic") {
  const Poly a{1.0, 2.0};        // 1 + 2x
  const Poly b{-1.0, 0.0, 1.0};  // x^2 - 1
  const Poly prod = poly_mul(a, b);
  REQUIRE(prod.size() == 4);
  CHECK(prod[0] == -1.0);
  CHECK(prod[1] == -2.0);
  CHECK(prod[2] == 1.0);
  CHECK(prod[3] == 2.0);
  CHECK(poly_eval(prod, 2.0) == doctest::Approx(15.0));
  CHECK(poly_trim({1.0, 0.0, 0.0}).size() == 1);
  CHECK(poly_add(a, b) == Poly{0.0, 2.0, 1.0});
  CHECK(poly_scale(a, -2.0) == Poly{-2.0, -4.0});
}

TEST_CASE("polynomial roots") {
  const auto roots = poly_roots({0.25, 0.0, 1.0});
  REQUIRE(roots.size() == 2);
  for (const auto& r : roots) CHECK(std::abs(std::abs(r) - 0.5) <= 1e-14);
  // numpy.roots([1, -0.3, 0.2, 0.5]) largest modulus
  double rho = 0.0;
  for (const auto& r : poly_roots({0.5, 0.2, -0.3, 1.0})) rho = std::max(rho, std::abs(r));
  CHECK(std::abs(rho - 0.8889318047757051) <= 1e-12);
  CHECK_THROWS_AS(poly_companion({0.0, 0.0}), ContractViolation);
  CHECK_THROWS_AS(poly_companion({3.0}), ContractViolation);
}

TEST_CASE("Gauss-Legendre rule on [0,1]") {
  const QuadratureRule r = gauss_legendre_unit(3);
  REQUIRE(r.nodes.size() == 3);
  // numpy.polynomial.legendre.leggauss(3) mapped to [0, 1]
  CHECK(std::abs(r.nodes[0] - 0.1127016653792583) <= 1e-15);
  CHECK(std::abs(r.nodes[1] - 0.5) <= 1e-15);
  CHECK(std::abs(r.nodes[2] - 0.8872983346207417) <= 1e-15);
  CHECK(std::abs(r.weights[0] - 0.27777777777777785) <= 1e-15);
  CHECK(std::abs(r.weights[1] - 0.4444444444444444) <= 1e-15);
  for (int order = 1; order <= 16; ++order) {
    const QuadratureRule q = gauss_legendre_unit(order);
    const int deg = 2 * order - 1;
    double integral = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) integral += q.weights[i] * std::pow(q.nodes[i], deg);
    CHECK(std::abs(integral - 1.0 / (deg + 1)) <= 1e-13);
  }
}

}
