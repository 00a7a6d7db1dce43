#include "monoplay/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monoplay/errors.hpp"

namespace monoplay {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec> checked_blocks(const Vec& z, const std::vector<int>& dims,
                                const std::vector<Vec>& centers) {
  if (centers.size() != dims.size())
    throw ContractViolation("need one deviation-set center per player");
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (centers[k].size() != dims[k]) throw ContractViolation("center has the wrong dimension");
  return split_blocks(z, dims);
}

}  // namespace

double grad_gap(const MonotoneOperator& op, const Vec& z) { return op.eval(z).norm(); }

double total_gap_bilinear(const GameSpec& game, const Vec& z, const std::vector<Vec>& centers,
                          double radius) {
  if (!game.own_affine)
    throw UnsupportedInstance("exact total gap needs costs affine in each player's own block");
  if (!(radius >= 0.0)) throw ContractViolation("radius must be nonnegative");
  const std::vector<Vec> blocks = checked_blocks(z, game.dims, centers);
  const std::vector<Vec> grads = split_blocks(game.op.eval(z), game.dims);
  double gap = 0.0;
  Eigen::Index offset = 0;
  for (int k = 0; k < game.players(); ++k) {
    Vec deviated = z;
    deviated.segment(offset, game.dims[k]) = centers[k];
    gap += game.costs[k](z) - game.costs[k](deviated) + radius * grads[k].norm();
    offset += game.dims[k];
  }
  return gap;
}

double total_gap_bound(const MonotoneOperator& op, const Vec& z, const std::vector<Vec>& centers,
                       double radius) {
  const std::vector<int> dims = op.player_dims();
  const std::vector<Vec> blocks = checked_blocks(z, dims, centers);
  double diam = 2.0 * radius;
  for (std::size_t k = 0; k < dims.size(); ++k)
    diam = std::max(diam, (blocks[k] - centers[k]).norm() + radius);
  return diam * std::sqrt(static_cast<double>(dims.size())) * grad_gap(op, z);
}

std::vector<GapReport> gap_reports(const MonotoneOperator& op, const Trace& trace,
                                   std::optional<std::vector<Vec>> centers,
                                   std::optional<double> radius) {
  if (trace.points.empty()) throw ContractViolation("empty trace");
  const std::vector<int> dims = op.player_dims();
  const std::vector<Vec> c = centers ? *centers : split_blocks(trace.z(0), dims);
  const double R = radius ? *radius : 3.0 * op.D();
  std::optional<GameSpec> game;
  if (op.kind() == OperatorKind::kBilinear) game = game_for(op);

  std::vector<GapReport> out;
  out.reserve(trace.last_t() + 1);
  for (int t = 0; t <= trace.last_t(); ++t) {
    const Vec& z = trace.z(t);
    GapReport rep;
    rep.t = t;
    rep.grad_gap = trace.grad_norm(t);
    rep.total_gap_bound = total_gap_bound(op, z, c, R);
    if (game) rep.total_gap = total_gap_bilinear(*game, z, c, R);
    if (op.equilibrium()) rep.dist_to_eq = (z - *op.equilibrium()).norm();
    out.push_back(rep);
  }
  return out;
}

BestIterate best_iterate(const Trace& trace, int S) {
  const int T = trace.steps();
  if (S < 1) throw ContractViolation("window S must be >= 1");
  if (T < 1) throw ContractViolation("best_iterate needs T >= 1");
  if (S > 1 && !(3 * S < T)) throw ContractViolation("window form needs S < T/3");
  BestIterate best{0, kInf};
  for (int t = 0; t + S - 1 <= T - 1; ++t) {
    double worst = 0.0;
    for (int s = 0; s < S; ++s) worst = std::max(worst, trace.grad_norm(t + s));
    if (worst < best.value) best = {t, worst};
  }
  return best;
}

double best_iterate_bound(double D, double eta, double ell, int T, int S) {
  const double shrink = 1.0 - 10.0 * eta * eta * ell * ell;
  if (!(shrink > 0.0)) return kInf;
  if (S == 1) return 4.0 * D / (eta * std::sqrt(static_cast<double>(T)) * std::sqrt(shrink));
  return 6.0 * D / (eta * std::sqrt(static_cast<double>(T) / S) * std::sqrt(shrink));
}

BoundCheck lemma1_check(const Trace& trace, double D, double eta, double ell, int S) {
  BoundCheck res;
  const BestIterate best = best_iterate(trace, S);
  const double bound = best_iterate_bound(D, eta, ell, trace.steps(), S);
  res.worst_t = best.t;
  if (std::isinf(bound)) {
    res.vacuous = true;
    return res;
  }
  res.margin = best.value / bound;
  res.holds = best.value <= bound;
  return res;
}

BoundCheck theorem1_check(const Trace& trace, double D, double eta, double ell, double lambda) {
  BoundCheck res;
  double eta_max = 1.0 / (150.0 * ell);
  if (lambda > 0.0) eta_max = std::min(eta_max, 1.0 / (1711.0 * D * lambda));
  res.vacuous = !(eta <= eta_max);
  for (int T = 1; T <= trace.last_t(); ++T) {
    const double bound = 60.0 * D / (eta * std::sqrt(static_cast<double>(T)));
    const double ratio = trace.grad_norm(T) / bound;
    if (ratio > res.margin) {
      res.margin = ratio;
      res.worst_t = T;
    }
  }
  res.holds = res.margin <= 1.0;
  return res;
}

GrowthCheck short_term_growth_check(const Trace& trace, double eta, double ell, double rel_tol) {
  GrowthCheck res;
  const int T = trace.last_t();
  const int t0 = std::max(0, trace.first_t() + 1);
  if (T <= t0) return res;
  const double L = std::log1p(3.0 * eta * ell);
  // suffix[u] = max_{v >= u} log|F(z^v)| - v L, for u in t0..T
  std::vector<double> suffix(T + 2, -kInf);
  for (int u = T; u >= t0; --u) {
    const double a = std::log(trace.grad_norm(u)) - u * L;
    suffix[u] = std::max(suffix[u + 1], a);
  }
  const double slack = std::log1p(rel_tol);
  for (int t = t0; t < T; ++t) {
    const double delta = std::max(trace.grad_norm(t), trace.grad_norm(t - 1));
    const double later = suffix[t + 1];
    if (later == -kInf) continue;
    const double excess = later - (std::log(delta) - t * L);
    res.worst_log_excess = std::max(res.worst_log_excess, excess);
    if (excess > slack) {
      ++res.violations;
      if (res.first_violation < 0) res.first_violation = t;
    }
  }
  res.holds = res.violations == 0;
  return res;
}

IterateBoundCheck bounded_iterates_check(const Trace& trace, const Vec& z_star, double rel_tol) {
  IterateBoundCheck res;
  double ref = (trace.z(0) - z_star).norm();
  if (trace.first_t() <= -1) {
    res.inits_differ = trace.z(-1) != trace.z(0);
    if (res.inits_differ) ref = std::max(ref, (trace.z(-1) - z_star).norm());
  }
  res.reference = 2.0 * ref;
  for (int t = 0; t <= trace.last_t(); ++t)
    res.max_dist = std::max(res.max_dist, (trace.z(t) - z_star).norm());
  res.holds = res.max_dist <= res.reference * (1.0 + rel_tol);
  res.finding = !res.holds && res.inits_differ;
  return res;
}

Series averaged_iterate_gap(const Trace& trace, const MonotoneOperator& op) {
  if (trace.points.empty()) throw ContractViolation("empty trace");
  Series s;
  Vec sum = Vec::Zero(trace.dim());
  for (int T = 1; T <= trace.last_t(); ++T) {
    sum += trace.z(T);
    s.x.push_back(T);
    s.y.push_back(grad_gap(op, sum / static_cast<double>(T)));
  }
  return s;
}

RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y, double burn_in) {
  if (x.size() != y.size()) throw ContractViolation("rate_fit needs equally many x and y values");
  if (!(burn_in >= 0.0 && burn_in < 1.0)) throw ContractViolation("burn-in must be in [0, 1)");
  RateFit fit;
  const std::size_t skip = static_cast<std::size_t>(std::floor(burn_in * x.size()));
  std::vector<double> lx, ly;
  for (std::size_t i = skip; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      ++fit.excluded;
      continue;
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (fit.excluded > 0)
    fit.warnings.push_back(std::to_string(fit.excluded) + " nonpositive point(s) excluded");
  fit.used = static_cast<int>(lx.size());
  if (fit.used < 3) throw NumericError("rate fit needs at least 3 positive points");
  const double n = fit.used;
  double mx = 0, my = 0;
  for (int i = 0; i < fit.used; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < fit.used; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericError("rate fit needs at least two distinct x values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace monoplay
