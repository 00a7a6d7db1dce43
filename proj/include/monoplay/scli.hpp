#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "monoplay/dynamics.hpp"
#include "monoplay/linalg.hpp"
#include "monoplay/operators.hpp"

namespace monoplay {

// q(x) = x^p - sum_j beta_j x^j and r(x) = sum_j alpha_j x^j.
struct PolyPair {
  Poly q;
  Poly r;

  int p() const { return static_cast<int>(q.size()) - 1; }
  static PolyPair from_coefficients(const SCLICoefficients& coeffs);
};

// Largest root modulus; the polynomial must have degree >= 1.
double poly_radius(const Poly& poly);

enum class SweepFamily {
  kConvexMin,  // rho(q - nu r)
  kMinMax,     // max root modulus of q^2 + nu^2 r^2
};

Poly family_poly(const PolyPair& pair, double nu, SweepFamily family);

struct SweepResult {
  double sup = 0.0;
  double argmax = 0.0;
  std::vector<double> nu;
  std::vector<double> rho;
};

// Uniform grid over [lo, hi] followed by a golden-section refinement around the
// grid argmax. Grid evaluation fans out over up to MONOTONE_PLAY_THREADS threads.
SweepResult radius_sweep(const PolyPair& pair, double lo, double hi, int grid_points,
                         SweepFamily family = SweepFamily::kConvexMin);

// Worker count for sweeps: MONOTONE_PLAY_THREADS when set, else hardware threads.
int sweep_threads();

double conjecture_bound(double mu, double ell);

// Monic q(z) = (z - a)(z - 1), r(z) = (-(1 + a) z + a)/ell, a = (sqrt ell - sqrt mu)/(sqrt ell + sqrt mu).
PolyPair agd_polys(double mu, double ell);

// Consistent random coefficients: entries uniform in [-1, 1], beta rescaled to sum 1.
SCLICoefficients random_consistent_coefficients(std::mt19937_64& rng, int p);

struct CompanionSystem {
  Mat C_of_A;  // pn x pn
  Mat U;       // pn x n, selects the newest block
  Mat N_of_A;  // n x n
  double nu = std::numeric_limits<double>::quiet_NaN();
  SCLICoefficients coeffs;
};

CompanionSystem build_companion(const SCLICoefficients& coeffs, const Mat& A);

// |rho(C(A)) - maxroot(q^2 + nu^2 r^2)| for the bilinear A with M = nu I.
double characteristic_identity_gap(const SCLICoefficients& coeffs, double nu, int n);

// Matrix power with the running Frobenius scale factored out: P * exp(log_scale) = C^T.
struct ScaledPower {
  Mat P;
  double log_scale = 0.0;
};

ScaledPower scaled_power(const Mat& C, int T);

enum class LowerBoundCase {
  kStationary,     // case 1: iterates never move, gradient gap stays constant
  kDivergent,      // case 2: spectral radius above one somewhere in the window
  kInconsistent,   // case 3a: fixed point is not the equilibrium
  kHardInstance,   // case 3b
};

std::string to_string(LowerBoundCase c);
// "1", "2", "3a", "3b"
std::string case_label(LowerBoundCase c);

enum class ProblemClass { kMinMax, kConvexMin };

struct HardInstance {
  LowerBoundCase kase = LowerBoundCase::kHardInstance;
  ProblemClass problem = ProblemClass::kMinMax;
  std::optional<MonotoneOperator> op;
  std::vector<Vec> inits;  // oldest first
  double nu = 0.0;
  double rho = 0.0;          // spectral radius at nu
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::string description;
};

// Bilinear M = nu I, b = 0, nu maximizing rho(q^2 + nu^2 r^2) over [ell/(2 sqrt T), ell],
// inits from the top right singular vector of C(A)^T scaled so the largest
// per-player block norm equals D. Other cases return the matching witness.
HardInstance hard_instance_minmax(const SCLICoefficients& coeffs, double ell, double D, int T,
                                  int n);

// Quadratic S = nu I, b = 0, nu maximizing rho(q - nu r) over [ell/(4T), ell].
HardInstance hard_instance_convexmin(const SCLICoefficients& coeffs, double ell, double D, int T,
                                     int n);

struct LowerBoundRow {
  int T = 0;
  double nu = 0.0;
  // min-max: max |F(z^T')| over T' in T..T+p-1.
  // convex-min: max suboptimality over T' in T-p+1..T.
  double measured = 0.0;
  double ratio = 0.0;  // measured / (ell D / sqrt T) or measured / (ell D^2 / T)
  bool diverged = false;
  // convex-min only: window sum of suboptimalities and (nu/2)|C(S)^T w^0|^2
  double window_sum = 0.0;
  double window_norm_sq = 0.0;
};

struct LowerBoundTable {
  ProblemClass problem = ProblemClass::kMinMax;
  LowerBoundCase kase = LowerBoundCase::kHardInstance;
  std::vector<LowerBoundRow> rows;
};

LowerBoundTable lowerbound_experiment(const SCLICoefficients& coeffs, double ell, double D,
                                      const std::vector<int>& T_list, int n,
                                      ProblemClass problem = ProblemClass::kMinMax);

}  // namespace monoplay
