#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace monoplay {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Polynomial coefficients, lowest degree first: c[0] + c[1] z + ...
using Poly = std::vector<double>;

double spectral_norm(const Mat& m);

// Parlett-Reinsch diagonal similarity; returns the balanced copy.
Mat balance(const Mat& m);

// Eigenvalues of a general real square matrix (balanced first).
std::vector<std::complex<double>> eigenvalues(const Mat& m);

// max |eigenvalue|; throws NumericError if the QR iteration fails.
double spectral_radius(const Mat& m);

// Smallest eigenvalue of the symmetric part (A + A^T)/2.
double min_symmetric_eigenvalue(const Mat& m);

Poly poly_trim(Poly p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double s);
double poly_eval(const Poly& p, double x);

// Companion matrix of the monic normalization of p (degree >= 1).
Mat poly_companion(const Poly& p);
std::vector<std::complex<double>> poly_roots(const Poly& p);

// Gauss-Legendre rule mapped onto [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre_unit(int order);

}  // namespace monoplay
