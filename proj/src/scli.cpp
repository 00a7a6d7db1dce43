#include "monoplay/scli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <thread>

#include "monoplay/errors.hpp"

namespace monoplay {

namespace {

constexpr int kHardInstanceGrid = 10000;
constexpr double kDivergentRadius = 1.0 + 1e-9;
constexpr double kGolden = 0.6180339887498949;

double golden_max(const std::function<double(double)>& f, double a, double b, double& best_x) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    best_x = x1;
    return f1;
  }
  best_x = x2;
  return f2;
}

Mat bilinear_A(double nu, int n) {
  const int h = n / 2;
  Mat A = Mat::Zero(n, n);
  A.topRightCorner(h, h) = nu * Mat::Identity(h, h);
  A.bottomLeftCorner(h, h) = -nu * Mat::Identity(h, h);
  return A;
}

MonotoneOperator hard_operator(ProblemClass problem, double nu, int n, double D, double b_entry) {
  if (problem == ProblemClass::kMinMax) {
    const int h = n / 2;
    const Vec b = Vec::Constant(h, b_entry);
    return make_bilinear(nu * Mat::Identity(h, h), b, b, D);
  }
  return make_quadratic_min(nu * Mat::Identity(n, n), Vec::Constant(n, b_entry), D);
}

// Top right singular vector of C^T, split into p blocks and scaled so the
// largest per-player block norm equals D.
std::vector<Vec> singular_inits(const Mat& C, int T, int p, int n,
                                const std::vector<int>& player_dims, double D) {
  const ScaledPower pw = scaled_power(C, T);
  Eigen::JacobiSVD<Mat> svd(pw.P, Eigen::ComputeFullV);
  const Vec v = svd.matrixV().col(0);
  std::vector<Vec> inits;
  double largest = 0.0;
  for (int j = 0; j < p; ++j) {
    inits.push_back(v.segment(static_cast<Eigen::Index>(j) * n, n));
    for (const Vec& blk : split_blocks(inits.back(), player_dims))
      largest = std::max(largest, blk.norm());
  }
  for (Vec& z : inits) z *= D / largest;
  return inits;
}

HardInstance build_instance(const SCLICoefficients& coeffs, double ell, double D, int T, int n,
                            ProblemClass problem) {
  coeffs.validate();
  if (!(ell > 0.0) || !(D > 0.0)) throw ContractViolation("ell and D must be positive");
  if (T < 1) throw ContractViolation("T must be >= 1");
  if (n < 1 || (problem == ProblemClass::kMinMax && n % 2 != 0))
    throw ContractViolation("min-max hard instances need an even dimension");

  const int p = coeffs.p();
  const PolyPair pair = PolyPair::from_coefficients(coeffs);
  HardInstance inst;
  inst.problem = problem;
  inst.window_hi = ell;
  SweepFamily family;
  if (problem == ProblemClass::kMinMax) {
    inst.window_lo = ell / (2.0 * std::sqrt(static_cast<double>(T)));
    family = SweepFamily::kMinMax;
  } else {
    inst.window_lo = ell / (4.0 * T);
    family = SweepFamily::kConvexMin;
  }
  const int blocks = problem == ProblemClass::kMinMax ? n / 2 : n;
  const double b_entry = ell * D / std::sqrt(static_cast<double>(blocks));
  const double sum_alpha = std::accumulate(coeffs.alpha.begin(), coeffs.alpha.end(), 0.0);
  const double sum_beta = std::accumulate(coeffs.beta.begin(), coeffs.beta.end(), 0.0);

  const bool frozen = std::abs(sum_beta - 1.0) <= 1e-12 && std::abs(sum_alpha) <= 1e-12;
  const bool ignores_b = coeffs.gamma == 0.0 && coeffs.delta == 0.0;
  if (frozen || ignores_b) {
    inst.kase = LowerBoundCase::kStationary;
    inst.nu = ell;
    if (frozen) {
      inst.op = hard_operator(problem, ell, n, D, 0.0);
      Vec z = Vec::Zero(n);
      for (int k = 0; k < (problem == ProblemClass::kMinMax ? 2 : 1); ++k)
        z(k * (n / (problem == ProblemClass::kMinMax ? 2 : 1))) = D;
      inst.inits.assign(p, z);
      inst.description = "coefficients leave every point fixed when b = 0; gradient gap stays constant";
    } else {
      inst.op = hard_operator(problem, ell, n, D, b_entry);
      inst.inits.assign(p, Vec::Zero(n));
      inst.description = "iteration ignores b; iterates stay at 0 while F(0) = b";
    }
    inst.rho = spectral_radius(build_companion(coeffs, inst.op->A()).C_of_A);
    return inst;
  }

  const SweepResult sweep = radius_sweep(pair, inst.window_lo, inst.window_hi, kHardInstanceGrid,
                                         family);
  if (sweep.sup > kDivergentRadius) {
    inst.kase = LowerBoundCase::kDivergent;
    inst.description = "spectral radius exceeds 1 inside the window; iterates diverge";
  } else if (!coeffs.consistent()) {
    inst.kase = LowerBoundCase::kInconsistent;
    inst.nu = ell;
    inst.op = hard_operator(problem, ell, n, D, b_entry);
    inst.inits.assign(p, Vec::Zero(n));
    inst.rho = spectral_radius(build_companion(coeffs, inst.op->A()).C_of_A);
    inst.description = "sum of beta differs from 1; iterates settle away from the equilibrium";
    return inst;
  } else {
    inst.kase = LowerBoundCase::kHardInstance;
    inst.description = "spectral hard instance";
  }
  inst.nu = sweep.argmax;
  inst.rho = sweep.sup;
  inst.op = hard_operator(problem, inst.nu, n, D, 0.0);
  const Mat C = build_companion(coeffs, inst.op->A()).C_of_A;
  inst.inits = singular_inits(C, T, p, n, inst.op->player_dims(), D);
  return inst;
}

}  // namespace

PolyPair PolyPair::from_coefficients(const SCLICoefficients& coeffs) {
  coeffs.validate();
  const int p = coeffs.p();
  PolyPair pair;
  pair.q.assign(p + 1, 0.0);
  pair.q[p] = 1.0;
  for (int j = 0; j < p; ++j) pair.q[j] = -coeffs.beta[j];
  pair.r = coeffs.alpha;
  return pair;
}

double poly_radius(const Poly& poly) {
  const auto roots = poly_roots(poly);
  double rho = 0.0;
  for (const auto& z : roots) rho = std::max(rho, std::abs(z));
  return rho;
}

Poly family_poly(const PolyPair& pair, double nu, SweepFamily family) {
  if (family == SweepFamily::kConvexMin) return poly_add(pair.q, poly_scale(pair.r, -nu));
  return poly_add(poly_mul(pair.q, pair.q), poly_scale(poly_mul(pair.r, pair.r), nu * nu));
}

int sweep_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("MONOTONE_PLAY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, hw));
  }
  return hw;
}

SweepResult radius_sweep(const PolyPair& pair, double lo, double hi, int grid_points,
                         SweepFamily family) {
  if (!(lo > 0.0 && lo < hi)) throw ContractViolation("sweep needs 0 < lo < hi");
  if (grid_points < 2) throw ContractViolation("sweep needs at least 2 grid points");
  auto rho_at = [&](double nu) { return poly_radius(family_poly(pair, nu, family)); };

  SweepResult res;
  res.nu.resize(grid_points);
  res.rho.resize(grid_points);
  const double step = (hi - lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) res.nu[i] = (i == grid_points - 1) ? hi : lo + i * step;

  const int workers = std::min(sweep_threads(), grid_points);
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) res.rho[i] = rho_at(res.nu[i]);
  };
  if (workers <= 1) {
    work(0, grid_points);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (grid_points + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(grid_points, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  const auto it = std::max_element(res.rho.begin(), res.rho.end());
  const int k = static_cast<int>(it - res.rho.begin());
  res.sup = *it;
  res.argmax = res.nu[k];
  const double a = res.nu[std::max(0, k - 1)];
  const double b = res.nu[std::min(grid_points - 1, k + 1)];
  double x = res.argmax;
  const double refined = golden_max(rho_at, a, b, x);
  if (refined > res.sup) {
    res.sup = refined;
    res.argmax = x;
  }
  return res;
}

double conjecture_bound(double mu, double ell) {
  if (!(mu > 0.0 && mu < ell)) throw ContractViolation("need 0 < mu < ell");
  const double k = std::sqrt(ell / mu);
  return (k - 1.0) / (k + 1.0);
}

PolyPair agd_polys(double mu, double ell) {
  if (!(mu > 0.0 && mu < ell)) throw ContractViolation("need 0 < mu < ell");
  const double a = (std::sqrt(ell) - std::sqrt(mu)) / (std::sqrt(ell) + std::sqrt(mu));
  PolyPair pair;
  pair.q = {a, -(1.0 + a), 1.0};
  pair.r = {a / ell, -(1.0 + a) / ell};
  return pair;
}

SCLICoefficients random_consistent_coefficients(std::mt19937_64& rng, int p) {
  if (p < 1) throw ContractViolation("p must be >= 1");
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  SCLICoefficients c;
  for (int j = 0; j < p; ++j) c.alpha.push_back(unif(rng));
  double s = 0.0;
  do {
    c.beta.clear();
    for (int j = 0; j < p; ++j) c.beta.push_back(unif(rng));
    s = std::accumulate(c.beta.begin(), c.beta.end(), 0.0);
  } while (std::abs(s) < 1e-3);
  for (double& b : c.beta) b /= s;
  c.gamma = unif(rng);
  c.delta = unif(rng);
  return c;
}

CompanionSystem build_companion(const SCLICoefficients& coeffs, const Mat& A) {
  coeffs.validate();
  if (A.rows() != A.cols()) throw ContractViolation("A must be square");
  const int p = coeffs.p();
  const Eigen::Index n = A.rows();
  const Mat I = Mat::Identity(n, n);
  CompanionSystem sys;
  sys.coeffs = coeffs;
  sys.C_of_A = Mat::Zero(p * n, p * n);
  for (int j = 0; j + 1 < p; ++j) sys.C_of_A.block(j * n, (j + 1) * n, n, n) = I;
  for (int j = 0; j < p; ++j)
    sys.C_of_A.block((p - 1) * n, j * n, n, n) = coeffs.alpha[j] * A + coeffs.beta[j] * I;
  sys.U = Mat::Zero(p * n, n);
  sys.U.bottomRows(n) = I;
  sys.N_of_A = coeffs.gamma * A + coeffs.delta * I;
  return sys;
}

double characteristic_identity_gap(const SCLICoefficients& coeffs, double nu, int n) {
  if (n < 2 || n % 2 != 0) throw ContractViolation("bilinear dimension must be even");
  CompanionSystem sys = build_companion(coeffs, bilinear_A(nu, n));
  sys.nu = nu;
  const double direct = spectral_radius(sys.C_of_A);
  const double via_poly =
      poly_radius(family_poly(PolyPair::from_coefficients(coeffs), nu, SweepFamily::kMinMax));
  return std::abs(direct - via_poly);
}

ScaledPower scaled_power(const Mat& C, int T) {
  if (C.rows() != C.cols()) throw ContractViolation("matrix must be square");
  if (T < 0) throw ContractViolation("power must be nonnegative");
  ScaledPower out;
  out.P = Mat::Identity(C.rows(), C.cols());
  for (int k = 0; k < T; ++k) {
    out.P = C * out.P;
    const double s = out.P.norm();
    if (!(s > 0.0) || !std::isfinite(s)) break;
    out.P /= s;
    out.log_scale += std::log(s);
  }
  return out;
}

std::string to_string(LowerBoundCase c) {
  switch (c) {
    case LowerBoundCase::kStationary: return "stationary";
    case LowerBoundCase::kDivergent: return "divergent";
    case LowerBoundCase::kInconsistent: return "inconsistent";
    case LowerBoundCase::kHardInstance: return "hard-instance";
  }
  return "unknown";
}

std::string case_label(LowerBoundCase c) {
  switch (c) {
    case LowerBoundCase::kStationary: return "1";
    case LowerBoundCase::kDivergent: return "2";
    case LowerBoundCase::kInconsistent: return "3a";
    case LowerBoundCase::kHardInstance: return "3b";
  }
  return "?";
}

HardInstance hard_instance_minmax(const SCLICoefficients& coeffs, double ell, double D, int T,
                                  int n) {
  return build_instance(coeffs, ell, D, T, n, ProblemClass::kMinMax);
}

HardInstance hard_instance_convexmin(const SCLICoefficients& coeffs, double ell, double D, int T,
                                     int n) {
  return build_instance(coeffs, ell, D, T, n, ProblemClass::kConvexMin);
}

LowerBoundTable lowerbound_experiment(const SCLICoefficients& coeffs, double ell, double D,
                                      const std::vector<int>& T_list, int n,
                                      ProblemClass problem) {
  if (T_list.empty()) throw ContractViolation("T_list is empty");
  if (!std::is_sorted(T_list.begin(), T_list.end()))
    throw ContractViolation("T_list must be ascending");
  LowerBoundTable table;
  table.problem = problem;
  const int p = coeffs.p();
  for (int T : T_list) {
    const HardInstance inst = build_instance(coeffs, ell, D, T, n, problem);
    table.kase = inst.kase;
    LowerBoundRow row;
    row.T = T;
    row.nu = inst.nu;
    row.window_norm_sq = std::numeric_limits<double>::quiet_NaN();
    const MonotoneOperator& op = *inst.op;
    try {
      if (problem == ProblemClass::kMinMax) {
        const Trace tr = run_scli(op, coeffs, inst.inits, T + p - 1);
        for (int t = T; t <= T + p - 1; ++t) row.measured = std::max(row.measured, tr.grad_norm(t));
        row.ratio = row.measured / (ell * D / std::sqrt(static_cast<double>(T)));
      } else {
        const Trace tr = run_scli(op, coeffs, inst.inits, T);
        for (int t = T - p + 1; t <= T; ++t) {
          const double sub = suboptimality(op, tr.z(t));
          row.measured = std::max(row.measured, sub);
          row.window_sum += sub;
        }
        row.ratio = row.measured / (ell * D * D / T);
        if (op.b().isZero(0.0)) {
          const Mat C = build_companion(coeffs, op.A()).C_of_A;
          Vec w(static_cast<Eigen::Index>(p) * n);
          for (int j = 0; j < p; ++j) w.segment(static_cast<Eigen::Index>(j) * n, n) = inst.inits[j];
          for (int k = 0; k < T; ++k) w = C * w;
          row.window_norm_sq = 0.5 * inst.nu * w.squaredNorm();
        }
      }
    } catch (const DivergenceError&) {
      row.diverged = true;
      row.measured = std::numeric_limits<double>::infinity();
      row.ratio = std::numeric_limits<double>::infinity();
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace monoplay
