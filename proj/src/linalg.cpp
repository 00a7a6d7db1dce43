#include "monoplay/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "monoplay/errors.hpp"

namespace monoplay {

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 16 && m.cols() <= 16) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat balance(const Mat& m) {
  if (m.rows() != m.cols()) throw ContractViolation("balance: matrix must be square");
  Mat a = m;
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

std::vector<std::complex<double>> eigenvalues(const Mat& m) {
  if (m.rows() != m.cols()) throw ContractViolation("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw ContractViolation("eigenvalues: non-finite entries");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Mat> solver(balance(m), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const Mat& m) {
  double rho = 0.0;
  for (const auto& lam : eigenvalues(m)) rho = std::max(rho, std::abs(lam));
  return rho;
}

double min_symmetric_eigenvalue(const Mat& m) {
  if (m.rows() != m.cols()) throw ContractViolation("matrix must be square");
  if (m.rows() == 0) return 0.0;
  Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly poly_scale(const Poly& a, double s) {
  Poly out = a;
  for (double& c : out) c *= s;
  return out;
}

double poly_eval(const Poly& p, double x) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Mat poly_companion(const Poly& p) {
  const Poly t = poly_trim(p);
  if (t.empty()) throw ContractViolation("zero polynomial has no roots");
  const std::size_t deg = t.size() - 1;
  if (deg == 0) throw ContractViolation("constant polynomial has no roots");
  const double lead = t.back();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 0; i + 1 < deg; ++i) c(i, i + 1) = 1.0;
  for (std::size_t j = 0; j < deg; ++j) c(deg - 1, j) = -t[j] / lead;
  return c;
}

std::vector<std::complex<double>> poly_roots(const Poly& p) {
  return eigenvalues(poly_companion(p));
}

QuadratureRule gauss_legendre_unit(int order) {
  if (order < 1) throw ContractViolation("quadrature order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (x * p1 - p2) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace monoplay
