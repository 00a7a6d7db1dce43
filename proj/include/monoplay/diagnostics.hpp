#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monoplay/dynamics.hpp"
#include "monoplay/linalg.hpp"
#include "monoplay/operators.hpp"

namespace monoplay {

struct GapReport {
  int t = 0;
  double grad_gap = 0.0;
  std::optional<double> total_gap;
  double total_gap_bound = 0.0;
  std::optional<double> dist_to_eq;
};

double grad_gap(const MonotoneOperator& op, const Vec& z);

// Exact total gap against the deviation sets B(centers[k], radius). Only for games
// whose costs are affine in the player's own block.
double total_gap_bilinear(const GameSpec& game, const Vec& z, const std::vector<Vec>& centers,
                          double radius);

// D sqrt(K) |F(z)| where D is the diameter of the deviation sets enlarged to contain z.
double total_gap_bound(const MonotoneOperator& op, const Vec& z, const std::vector<Vec>& centers,
                       double radius);

// One report per t = 0..T. Default deviation sets are B(z_k^0, 3D).
std::vector<GapReport> gap_reports(const MonotoneOperator& op, const Trace& trace,
                                   std::optional<std::vector<Vec>> centers = std::nullopt,
                                   std::optional<double> radius = std::nullopt);

struct BestIterate {
  int t = 0;
  double value = 0.0;
};

// S = 1: min over 0 <= t <= T-1 of |F(z^t)|. S > 1: min over t of the largest
// gradient norm in the window t..t+S-1 (windows inside 0..T-1); needs S < T/3.
BestIterate best_iterate(const Trace& trace, int S = 1);

// 4D/(eta sqrt(T) sqrt(1 - 10 eta^2 ell^2)) for S = 1 and the window form
// 6D/(eta sqrt(T/S) sqrt(...)) otherwise. Infinite when 10 eta^2 ell^2 >= 1.
double best_iterate_bound(double D, double eta, double ell, int T, int S = 1);

struct BoundCheck {
  bool holds = true;
  bool vacuous = false;
  double margin = 0.0;  // largest observed value / bound
  int worst_t = 0;
};

BoundCheck lemma1_check(const Trace& trace, double D, double eta, double ell, int S = 1);

// |F(z^T)| <= 60D/(eta sqrt(T)) for every T >= 1. Vacuous unless
// eta <= min(1/(150 ell), 1/(1711 D Lambda)).
BoundCheck theorem1_check(const Trace& trace, double D, double eta, double ell, double lambda);

struct GrowthCheck {
  bool holds = true;
  int violations = 0;
  int first_violation = -1;
  double worst_log_excess = 0.0;  // max over (t, s) of log(|F(z^{t+s})| / (delta_t (1+3 eta ell)^s))
};

// With delta_t = max(|F(z^t)|, |F(z^{t-1})|): |F(z^{t+s})| <= delta_t (1 + 3 eta ell)^s.
GrowthCheck short_term_growth_check(const Trace& trace, double eta, double ell,
                                    double rel_tol = 1e-10);

struct IterateBoundCheck {
  bool holds = true;
  bool inits_differ = false;
  // Set when the bound fails for a run whose inits differ, which the cited
  // argument does not cover.
  bool finding = false;
  double reference = 0.0;  // 2 |z^0 - z*| (or the max over both inits)
  double max_dist = 0.0;
};

IterateBoundCheck bounded_iterates_check(const Trace& trace, const Vec& z_star,
                                         double rel_tol = 1e-6);

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

// x = T, y = |F(zbar^T)| with zbar^T = (1/T) sum_{t=1..T} z^t.
Series averaged_iterate_gap(const Trace& trace, const MonotoneOperator& op);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int used = 0;
  int excluded = 0;
  std::vector<std::string> warnings;
};

// Least squares of log y on log x after dropping the first burn_in fraction of
// points and every nonpositive value.
RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y,
                 double burn_in = 0.1);

}  // namespace monoplay
